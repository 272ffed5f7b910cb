#include "thrifty/io/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "thrifty/errors.hpp"

namespace thrifty::io {

namespace {

using sim::ScenarioConfig;

enum class Kind { Real, Integer, Bool, Seed, Row };

struct Entry {
    Kind kind;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc{} || ptr != last) throw ValidationError("not a number: \"" + raw + "\"");
    return v;
}

long long parse_integer(const std::string& raw) {
    const double v = parse_real(raw);
    if (!std::isfinite(v) || std::floor(v) != v) throw ValidationError("not a whole number: \"" + raw + "\"");
    return static_cast<long long>(v);
}

std::uint64_t parse_seed(const std::string& raw) {
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("not an unsigned seed: \"" + raw + "\"");
    return v;
}

bool parse_bool(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ValidationError("not a boolean: \"" + raw + "\"");
}

Vector5<double> parse_row(const std::string& raw) {
    std::string s = raw;
    for (auto& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream is(s);
    Vector5<double> row;
    std::string token;
    int k = 0;
    while (is >> token) {
        if (k == 5) throw ValidationError("expected 5 weights: \"" + raw + "\"");
        row(k++) = parse_real(token);
    }
    if (k != 5) throw ValidationError("expected 5 weights: \"" + raw + "\"");
    return row;
}

template <typename Field>
Entry real(Field field) {
    return {Kind::Real, [field](ScenarioConfig& c, const std::string& v) { field(c) = parse_real(v); }};
}

template <typename Field>
Entry integer(Field field) {
    return {Kind::Integer,
            [field](ScenarioConfig& c, const std::string& v) { field(c) = static_cast<int>(parse_integer(v)); }};
}

template <typename Field>
Entry boolean(Field field) {
    return {Kind::Bool, [field](ScenarioConfig& c, const std::string& v) { field(c) = parse_bool(v); }};
}

Entry profile_entry(Resource r) {
    return {Kind::Real, [r](ScenarioConfig& c, const std::string& v) {
                c.profile.values(static_cast<int>(r)) = parse_real(v);
            }};
}

Entry mix_entry(Constituent k) {
    return {Kind::Row, [k](ScenarioConfig& c, const std::string& v) {
                c.mix.weights.row(static_cast<int>(k)) = parse_row(v).transpose();
            }};
}

#define FIELD(expr) [](ScenarioConfig & c) -> auto& { return c.expr; }

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> table = [] {
        std::map<std::string, Entry> t;
        t["sim.seed"] = {Kind::Seed, [](ScenarioConfig& c, const std::string& v) { c.seed = parse_seed(v); }};
        t["sim.nodes"] = integer(FIELD(node_count));
        t["sim.area_width"] = real(FIELD(area_width));
        t["sim.area_height"] = real(FIELD(area_height));
        t["sim.sink_x"] = real(FIELD(sink_position.x()));
        t["sim.sink_y"] = real(FIELD(sink_position.y()));
        t["sim.sink_count"] = integer(FIELD(sink_count));
        t["sim.sink_spacing"] = real(FIELD(sink_spacing));
        t["sim.r_tx"] = real(FIELD(r_tx));
        t["sim.g_tx"] = real(FIELD(g_tx));
        t["sim.slice_dt"] = real(FIELD(slice_dt));
        t["sim.init_slices"] = integer(FIELD(init_slices));
        t["sim.slices"] = integer(FIELD(slices));
        t["sim.epochs"] = integer(FIELD(epochs));
        t["sim.event_rate"] = real(FIELD(event_rate));
        t["sim.battery"] = real(FIELD(initial_battery));
        t["sim.monitoring"] = boolean(FIELD(monitoring));
        t["sim.monitor_interval"] = integer(FIELD(monitor_interval));
        t["sim.maintenance_interval"] = integer(FIELD(maintenance_interval));
        t["sim.maintenance_slices"] = integer(FIELD(maintenance_slices));
        t["sim.flood_rounds"] = integer(FIELD(flood_rounds));
        t["sim.repair_radius"] = integer(FIELD(repair_radius));
        t["sim.max_retx"] = integer(FIELD(max_retx));
        t["sim.boot_packets"] = integer(FIELD(boot_packets));
        t["sim.bits_per_packet"] = integer(FIELD(bits_per_packet));
        t["sim.table_entry_bits"] = integer(FIELD(table_entry_bits));

        t["energy.p_cpu"] = profile_entry(Resource::Cpu);
        t["energy.p_mem"] = profile_entry(Resource::Mem);
        t["energy.p_rx"] = profile_entry(Resource::Rx);
        t["energy.p_tx"] = profile_entry(Resource::Tx);
        t["energy.p_sens"] = profile_entry(Resource::Sens);
        t["energy.derive_radio_costs"] = boolean(FIELD(derive_radio_costs));
        t["energy.charge_by_mix"] = boolean(FIELD(charge_by_mix));
        for (auto k : kAllConstituents) t["energy.mix." + std::string(name(k))] = mix_entry(k);

        t["flows.probabilities.sigma"] = real(FIELD(probabilities.sigma));
        t["flows.probabilities.kappa_coll"] = real(FIELD(probabilities.kappa_coll));
        t["flows.probabilities.kappa_ohear"] = real(FIELD(probabilities.kappa_ohear));
        t["flows.probabilities.kappa_idle"] = real(FIELD(probabilities.kappa_idle));
        t["flows.probabilities.kappa_loss"] = real(FIELD(probabilities.kappa_loss));
        t["flows.probabilities.area"] = real(FIELD(probabilities.area));
        t["flows.probabilities.p_cap"] = real(FIELD(probabilities.p_cap));

        t["flows.individual.r_sense"] = real(FIELD(individual.r_sense));
        t["flows.individual.g_sense"] = real(FIELD(individual.g_sense));
        t["flows.individual.b_os"] = real(FIELD(individual.b_os));
        t["flows.individual.b_sec"] = real(FIELD(individual.b_sec));
        t["flows.individual.b_store"] = real(FIELD(individual.b_store));

        t["flows.local.b_mon"] = real(FIELD(local.b_mon));
        t["flows.local.b_sec"] = real(FIELD(local.b_sec));
        t["flows.local.b_ohead"] = real(FIELD(local.b_ohead));
        t["flows.local.b_retx"] = real(FIELD(local.b_retx));
        t["flows.local.idle_power"] = real(FIELD(local.idle_power));

        t["flows.global.b_sec"] = real(FIELD(global.b_sec));
        t["flows.global.b_topo"] = real(FIELD(global.b_topo));
        t["flows.global.b_rout"] = real(FIELD(global.b_rout));
        t["flows.global.b_ohead"] = real(FIELD(global.b_ohead));

        t["flows.environment.harvested_power"] = real(FIELD(environment.harvested_power));
        t["flows.environment.b_ph"] = real(FIELD(environment.b_ph));
        t["flows.environment.b_sec"] = real(FIELD(environment.b_sec));

        t["flows.sink.b_ohead"] = real(FIELD(sink.b_ohead));
        t["flows.sink.b_sec"] = real(FIELD(sink.b_sec));

        t["radio.e_t_elec"] = real(FIELD(radio.e_t_elec));
        t["radio.e_r_elec"] = real(FIELD(radio.e_r_elec));
        t["radio.eps_fs"] = real(FIELD(radio.eps_fs));
        t["radio.eps_mp"] = real(FIELD(radio.eps_mp));
        t["radio.eps_amp"] = real(FIELD(radio.eps_amp));
        t["radio.alpha_pl"] = real(FIELD(radio.alpha_pl));
        t["radio.d0"] = {Kind::Real,
                         [](ScenarioConfig& c, const std::string& v) { c.radio.d0_override = parse_real(v); }};
        return t;
    }();
    return table;
}

#undef FIELD

const Entry& lookup(const std::string& key) {
    const auto& t = registry();
    auto it = t.find(key);
    if (it == t.end()) throw ValidationError("unknown configuration key \"" + key + "\"");
    return it->second;
}

}  // namespace

void set_parameter(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    lookup(key).set(cfg, value);
}

bool is_integer_parameter(const std::string& key) { return lookup(key).kind == Kind::Integer; }

void set_numeric_parameter(ScenarioConfig& cfg, const std::string& key, double value) {
    const auto& e = lookup(key);
    switch (e.kind) {
        case Kind::Real: e.set(cfg, fmt::format("{}", value)); break;
        case Kind::Integer: e.set(cfg, std::to_string(std::llround(value))); break;
        default: throw ValidationError("parameter \"" + key + "\" is not numeric");
    }
}

std::vector<std::string> parameter_names() {
    std::vector<std::string> out;
    for (const auto& [k, _] : registry()) out.push_back(k);
    return out;
}

LoadedConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({std::string("malformed configuration: ") + e.what()});
    }

    LoadedConfig out;
    std::vector<std::string> errors;
    bool area_given = false;
    for (const auto& [section, child] : tree) {
        if (child.empty()) {
            errors.push_back("key \"" + section + "\" appears outside any section");
            continue;
        }
        for (const auto& [key, node] : child) {
            const std::string value = node.data();
            try {
                if (section == "sweep") {
                    if (key == "runs") {
                        out.sweep.runs = static_cast<int>(parse_integer(value));
                        if (out.sweep.runs < 1) errors.push_back("sweep.runs must be >= 1");
                    } else if (key == "seed") {
                        out.sweep.seed = parse_seed(value);
                    } else {
                        errors.push_back("unknown configuration key \"sweep." + key + "\"");
                    }
                } else if (section == "sweep.ranges") {
                    lookup(key);
                    std::string bounds = value;
                    for (auto& ch : bounds)
                        if (ch == ',') ch = ' ';
                    std::istringstream is(bounds);
                    std::string lo, hi, extra;
                    if (!(is >> lo >> hi) || (is >> extra))
                        throw ValidationError("sweep range for \"" + key + "\" needs exactly two bounds");
                    SweepRange r{key, parse_real(lo), parse_real(hi)};
                    if (!(r.lo <= r.hi)) throw ValidationError("sweep range for \"" + key + "\" has lo > hi");
                    out.sweep.ranges.push_back(r);
                } else {
                    const std::string full = section + "." + key;
                    set_parameter(out.scenario, full, value);
                    if (full == "flows.probabilities.area") area_given = true;
                }
            } catch (const ValidationError& e) {
                errors.push_back(section + "." + key + ": " + e.what());
            }
        }
    }
    if (!area_given) out.scenario.probabilities.area = out.scenario.area_width * out.scenario.area_height;
    if (!errors.empty()) throw ConfigError(std::move(errors));

    auto violations = out.scenario.boundary_violations();
    for (const auto& r : out.sweep.ranges) {
        for (double bound : {r.lo, r.hi}) {
            auto probe = out.scenario;
            set_numeric_parameter(probe, r.key, bound);
            for (auto& v : probe.boundary_violations())
                violations.push_back("sweep range " + r.key + " bound " + fmt::format("{}", bound) + ": " + v);
        }
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read configuration file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace thrifty::io
