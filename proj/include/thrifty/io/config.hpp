#pragma once

// Scenario configuration files.
//
// INI-style text: [section] headers and `key = value` lines, `;` or `#`
// comments. Every key has a default, so a minimal file can be just
//
//     [sim]
//     seed = 7
//     nodes = 25
//
// Keys are addressed as "section.key" (e.g. "flows.individual.r_sense"),
// which is also how sweep ranges name the parameter they vary.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thrifty/simulator.hpp"

namespace thrifty::io {

struct SweepRange {
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
};

struct SweepSpec {
    int runs = 0;
    std::optional<std::uint64_t> seed;
    std::vector<SweepRange> ranges;
};

struct LoadedConfig {
    sim::ScenarioConfig scenario;
    SweepSpec sweep;
};

/// Parses config text. Throws ConfigError listing every unknown key, bad value and boundary violation.
LoadedConfig parse_config(const std::string& text);

LoadedConfig load_config(const std::filesystem::path& path);

/// Sets one parameter by its "section.key" name from its textual value.
void set_parameter(sim::ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Sets a numeric parameter; integer parameters are rounded to the nearest whole value.
void set_numeric_parameter(sim::ScenarioConfig& cfg, const std::string& key, double value);

/// Whether `key` names an integer-valued parameter.
bool is_integer_parameter(const std::string& key);

/// Every recognised "section.key" name.
std::vector<std::string> parameter_names();

}  // namespace thrifty::io
