#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "thrifty/energy_core.hpp"

namespace thrifty {

enum class Phase : int { Initialization = 0, Collection = 1, Maintenance = 2 };

inline constexpr std::string_view name(Phase p) noexcept {
    switch (p) {
        case Phase::Initialization: return "initialization";
        case Phase::Collection: return "collection";
        case Phase::Maintenance: return "maintenance";
    }
    return "?";
}

inline std::optional<Phase> parse_phase(std::string_view text) {
    for (auto p : {Phase::Initialization, Phase::Collection, Phase::Maintenance})
        if (text == name(p)) return p;
    return std::nullopt;
}

/// One accounting window of a run, aggregated over all nodes.
struct SliceRecord {
    long slice = 0;
    double dt = 1.0;
    Phase phase = Phase::Collection;
    ConstituentFlowVector<double> flows;
    double energy_j = 0.0;
    long alive_nodes = 0;
    /// Measured energy split by constituent. Not serialized.
    Vector5<double> energy_by_constituent = Vector5<double>::Zero();

    friend bool operator==(const SliceRecord& a, const SliceRecord& b) {
        return a.slice == b.slice && a.phase == b.phase && a.flows.values == b.flows.values &&
               a.energy_j == b.energy_j && a.alive_nodes == b.alive_nodes;
    }
};

using Trace = std::vector<SliceRecord>;

}  // namespace thrifty
