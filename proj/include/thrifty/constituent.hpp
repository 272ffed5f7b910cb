#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

namespace thrifty {

/// Task categories every energy-consuming activity of a node falls into.
enum class Constituent : int { Individual = 0, Local = 1, Global = 2, Environment = 3, Sink = 4 };

inline constexpr int kConstituentCount = 5;

inline constexpr std::array<Constituent, kConstituentCount> kAllConstituents{
    Constituent::Individual, Constituent::Local, Constituent::Global, Constituent::Environment,
    Constituent::Sink};

/// Hardware resources a packet can touch, in profile order.
enum class Resource : int { Cpu = 0, Mem = 1, Rx = 2, Tx = 3, Sens = 4 };

inline constexpr int kResourceCount = 5;

/// Which constituents take part in a model. Bit k corresponds to Constituent(k).
using ConstituentMask = std::bitset<kConstituentCount>;

inline constexpr std::size_t index(Constituent c) noexcept { return static_cast<std::size_t>(c); }

inline constexpr std::string_view name(Constituent c) noexcept {
    switch (c) {
        case Constituent::Individual: return "individual";
        case Constituent::Local: return "local";
        case Constituent::Global: return "global";
        case Constituent::Environment: return "environment";
        case Constituent::Sink: return "snk";
    }
    return "?";
}

/// Trace column holding the packet flow of `c`, e.g. "b_global".
inline std::string column_name(Constituent c) { return "b_" + std::string(name(c)); }

inline std::optional<Constituent> parse_constituent(std::string_view text) {
    for (auto c : kAllConstituents) {
        if (text == name(c) || text == column_name(c)) return c;
    }
    if (text == "sink") return Constituent::Sink;
    return std::nullopt;
}

inline ConstituentMask mask_of(std::initializer_list<Constituent> cs) {
    ConstituentMask m;
    for (auto c : cs) m.set(index(c));
    return m;
}

/// Individual, Local and Global: the three constituents a default scenario exercises.
inline ConstituentMask three_constituent_mask() {
    return mask_of({Constituent::Individual, Constituent::Local, Constituent::Global});
}

}  // namespace thrifty
