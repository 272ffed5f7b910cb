#include "thrifty/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "thrifty/errors.hpp"

namespace thrifty::sim {

namespace {

using Usage = ResourceUsageVector<double>;

Usage usage(double cpu, double mem, double rx, double tx, double sens) {
    Usage u;
    u.values << cpu, mem, rx, tx, sens;
    return u;
}

const Usage kTxControl = usage(1, 0, 0, 1, 0);
const Usage kRxControl = usage(1, 0, 1, 0, 0);
const Usage kCpuOnly = usage(1, 0, 0, 0, 0);
const Usage kCpuMem = usage(1, 1, 0, 0, 0);
const Usage kRxOnly = usage(0, 0, 1, 0, 0);
const Usage kSensed = usage(1, 1, 0, 1, 1);
const Usage kRelay = usage(1, 1, 1, 1, 0);
const Usage kRetransmit = usage(1, 0, 0, 1, 0);
const Usage kProbeReply = usage(1, 0, 1, 1, 0);
const Usage kRouteTx = usage(1, 1, 0, 1, 0);
const Usage kRouteRx = usage(1, 1, 1, 0, 0);

double nearest_sink_distance(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& sinks) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sinks) best = std::min(best, (p - s).norm());
    return best;
}

void check(std::vector<std::string>& v, bool ok, const std::string& message) {
    if (!ok) v.push_back(message);
}

template <typename T>
std::string show(const std::string& key, T value) {
    std::ostringstream os;
    os << key << " = " << value;
    return os.str();
}

}  // namespace

std::string_view name(PacketKind kind) noexcept {
    switch (kind) {
        case PacketKind::Sensed: return "sensed";
        case PacketKind::NeighborInfo: return "neighbor_info";
        case PacketKind::Scheduling: return "scheduling";
        case PacketKind::TopologyInfo: return "topology_info";
        case PacketKind::RoutingInfo: return "routing_info";
        case PacketKind::RelayedData: return "relayed_data";
        case PacketKind::SystemTask: return "system_task";
        case PacketKind::HarvestControl: return "harvest_control";
        case PacketKind::SinkControl: return "sink_control";
    }
    return "?";
}

Constituent classify_packet(PacketKind kind) noexcept {
    switch (kind) {
        case PacketKind::Sensed:
        case PacketKind::SystemTask: return Constituent::Individual;
        case PacketKind::NeighborInfo:
        case PacketKind::Scheduling: return Constituent::Local;
        case PacketKind::TopologyInfo:
        case PacketKind::RoutingInfo:
        case PacketKind::RelayedData: return Constituent::Global;
        case PacketKind::HarvestControl: return Constituent::Environment;
        case PacketKind::SinkControl: return Constituent::Sink;
    }
    return Constituent::Individual;
}

// ---------------------------------------------------------------------------
// ScenarioConfig

ConstituentResourceMix<double> ScenarioConfig::default_mix() {
    ConstituentResourceMix<double> mix;
    mix.weights << 1, 1, 0, 1, 1,  //
        1, 0, 1, 1, 0,             //
        1, 1, 1, 1, 0,             //
        1, 0, 0, 0, 0,             //
        1, 0, 1, 1, 0;
    return mix;
}

std::vector<Eigen::Vector2d> ScenarioConfig::sink_positions() const {
    std::vector<Eigen::Vector2d> out;
    for (int k = 0; k < sink_count; ++k) out.push_back(sink_position + Eigen::Vector2d(k * sink_spacing, 0.0));
    return out;
}

ResourcePowerProfile<double> ScenarioConfig::effective_profile() const {
    auto p = profile;
    if (derive_radio_costs) {
        p.values(static_cast<int>(Resource::Tx)) = bits_per_packet * radio::tx_energy_per_bit(r_tx, radio);
        p.values(static_cast<int>(Resource::Rx)) = bits_per_packet * radio::rx_energy_per_bit(radio);
    }
    return p;
}

std::vector<std::string> ScenarioConfig::boundary_violations() const {
    std::vector<std::string> v;
    check(v, node_count >= 1, show("sim.nodes", node_count) + " (need at least 1 node)");
    check(v, area_width > 0 && area_height > 0, "sim.area_width/area_height must be > 0");
    check(v, sink_count >= 1, show("sim.sink_count", sink_count) + " (need at least 1 sink)");
    check(v, sink_spacing >= 0, show("sim.sink_spacing", sink_spacing) + " (must be >= 0)");
    for (const auto& s : sink_positions()) {
        if (s.x() < 0 || s.x() > area_width || s.y() < 0 || s.y() > area_height) {
            v.push_back("sink at (" + std::to_string(s.x()) + ", " + std::to_string(s.y()) +
                        ") lies outside the deployment area");
            break;
        }
    }
    check(v, std::isfinite(r_tx) && r_tx > 0,
          show("sim.r_tx", r_tx) + " violates local boundary \"0 < d_ij <= r_tx\" (needs r_tx > 0)");
    check(v, std::isfinite(g_tx) && g_tx >= 0, show("sim.g_tx", g_tx) + " violates \"g_tx >= 0\"");
    check(v, std::isfinite(slice_dt) && slice_dt > 0, show("sim.slice_dt", slice_dt) + " (must be > 0)");
    check(v, init_slices >= 0, show("sim.init_slices", init_slices) + " (must be >= 0)");
    check(v, slices >= 1 && slices >= init_slices,
          show("sim.slices", slices) + " (must be >= 1 and >= init_slices)");
    check(v, epochs >= 1, show("sim.epochs", epochs) + " (must be >= 1)");
    check(v, std::isfinite(event_rate) && event_rate >= 0, show("sim.event_rate", event_rate) + " (must be >= 0)");
    check(v, std::isfinite(initial_battery) && initial_battery > 0,
          show("sim.battery", initial_battery) + " (must be > 0)");
    check(v, monitor_interval >= 1, show("sim.monitor_interval", monitor_interval) + " (must be >= 1)");
    check(v, maintenance_interval >= 0, show("sim.maintenance_interval", maintenance_interval) + " (must be >= 0)");
    check(v, maintenance_slices >= 1, show("sim.maintenance_slices", maintenance_slices) + " (must be >= 1)");
    check(v, flood_rounds >= 0, show("sim.flood_rounds", flood_rounds) + " (must be >= 0)");
    check(v, repair_radius >= 0, show("sim.repair_radius", repair_radius) + " (must be >= 0)");
    check(v, max_retx >= 0, show("sim.max_retx", max_retx) + " (must be >= 0)");
    check(v, boot_packets >= 0, show("sim.boot_packets", boot_packets) + " (must be >= 0)");
    check(v, bits_per_packet >= 1, show("sim.bits_per_packet", bits_per_packet) + " (must be >= 1)");
    check(v, table_entry_bits >= 0, show("sim.table_entry_bits", table_entry_bits) + " (must be >= 0)");

    if (!profile.values.allFinite() || (profile.values.array() < 0).any())
        v.push_back("energy profile entries must be finite and >= 0");
    if (!mix.weights.allFinite() || (mix.weights.array() < 0).any())
        v.push_back("energy.mix weights must be finite and >= 0");
    if (charge_by_mix && (mix.weights.array().floor() != mix.weights.array()).any())
        v.push_back("energy.mix weights must be whole packet counts when charge_by_mix is set");

    auto append = [&v](const std::vector<std::string>& more) { v.insert(v.end(), more.begin(), more.end()); };
    append(probabilities.boundary_violations());
    append(individual.boundary_violations());
    // Topology-dependent local fields are supplied per node at run time; validate the configured ones.
    flows::LocalParams local_probe = local;
    local_probe.n = 1;
    local_probe.net_dens = std::max(1, node_count);
    local_probe.g_tx = std::max(0.0, g_tx);
    local_probe.r_tx = r_tx > 0 ? r_tx : 1.0;
    local_probe.d_ij = local_probe.r_tx;
    append(local_probe.boundary_violations());
    flows::GlobalParams global_probe = global;
    global_probe.net_dens = std::max(1, node_count);
    append(global_probe.boundary_violations());
    append(environment.boundary_violations());
    append(sink.boundary_violations());
    append(radio.boundary_violations());
    return v;
}

void ScenarioConfig::validate() const {
    auto v = boundary_violations();
    if (!v.empty()) throw ConfigError(std::move(v));
}

// ---------------------------------------------------------------------------
// Topology

int Network::alive_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive; }));
}

NextHop select_next_hop(const NodeState& node, const Network& net) {
    if (node.sink_distance <= net.r_tx) return {HopKind::Sink, -1};
    NextHop best;
    double best_residual = -1.0;
    for (const auto& nb : node.neighbors) {
        const auto& other = net.nodes[static_cast<std::size_t>(nb.id)];
        if (!other.alive || nb.known_residual <= 0.0) continue;
        if (!(other.sink_distance < node.sink_distance)) continue;
        if (nb.known_residual > best_residual ||
            (nb.known_residual == best_residual && nb.id < best.node)) {
            best = {HopKind::Node, nb.id};
            best_residual = nb.known_residual;
        }
    }
    return best;
}

Network build_topology(const ScenarioConfig& cfg) {
    cfg.validate();
    Network net;
    net.r_tx = cfg.r_tx;
    net.sinks = cfg.sink_positions();
    Rng placement(derive_seed(cfg.seed, 0));
    net.nodes.resize(static_cast<std::size_t>(cfg.node_count));
    for (int i = 0; i < cfg.node_count; ++i) {
        auto& n = net.nodes[static_cast<std::size_t>(i)];
        n.id = i;
        const double x = placement.uniform(0.0, cfg.area_width);
        const double y = placement.uniform(0.0, cfg.area_height);
        n.position = {x, y};
        n.battery = cfg.initial_battery;
        n.sink_distance = nearest_sink_distance(n.position, net.sinks);
    }
    for (auto& a : net.nodes) {
        for (const auto& b : net.nodes) {
            if (a.id == b.id) continue;
            const double d = (a.position - b.position).norm();
            if (d > 0.0 && d <= cfg.r_tx) a.neighbors.push_back({b.id, d, b.battery});
        }
    }
    for (auto& n : net.nodes) n.next_hop = select_next_hop(n, net);
    return net;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(ScenarioConfig cfg)
    : cfg_(std::move(cfg)),
      profile_(cfg_.effective_profile()),
      net_(build_topology(cfg_)),
      rng_(derive_seed(cfg_.seed, 1)) {
    for (const auto& n : net_.nodes) initial_total_ += n.battery;
}

double Simulator::table_scale(int node_id) const {
    const auto& node = net_.nodes[static_cast<std::size_t>(node_id)];
    long entries = 0;
    for (const auto& nb : node.neighbors) entries += net_.nodes[static_cast<std::size_t>(nb.id)].alive ? 1 : 0;
    return 1.0 + static_cast<double>(cfg_.table_entry_bits) * static_cast<double>(entries) / cfg_.bits_per_packet;
}

bool Simulator::charge(int node_id, PacketKind kind, const ResourceUsageVector<double>& use, double radio_scale) {
    auto& node = net_.nodes.at(static_cast<std::size_t>(node_id));
    if (!node.alive) {
        ++drops_.dead_node;
        return false;
    }
    const auto constituent = classify_packet(kind);
    Usage mixed;
    const Usage* charged = &use;
    if (cfg_.charge_by_mix) {
        mixed.values = cfg_.mix.row(constituent).transpose();
        charged = &mixed;
    }
    double cost = task_energy(*charged, profile_);
    if (!cfg_.charge_by_mix && radio_scale != 1.0)
        cost += (radio_scale - 1.0) * (use[Resource::Rx] * profile_[Resource::Rx] + use[Resource::Tx] * profile_[Resource::Tx]);
    if (cost > node.battery) {
        // Not enough left for this task: the node ignores it and stops operating.
        node.alive = false;
        ++drops_.dead_node;
        return false;
    }
    node.battery -= cost;
    if (node.battery <= 0.0) {
        node.battery = 0.0;
        node.alive = false;
    }
    node.usage += *charged;
    node.flows[constituent] += 1.0;
    current_.flows[constituent] += 1.0;
    current_.energy_j += cost;
    current_.energy_by_constituent(static_cast<int>(constituent)) += cost;
    ledger_.push_back({slice_, node_id, kind, cost});
    return true;
}

long Simulator::realize(double mean) {
    const double whole = std::floor(mean);
    return static_cast<long>(whole) + (rng_.bernoulli(mean - whole) ? 1 : 0);
}

Phase Simulator::next_phase() {
    if (epoch_slice_ < cfg_.init_slices) return Phase::Initialization;
    if (maintenance_left_ > 0) {
        --maintenance_left_;
        return Phase::Maintenance;
    }
    const bool periodic = cfg_.maintenance_interval > 0 && collection_since_repair_ >= cfg_.maintenance_interval;
    if (repair_pending_ || periodic) {
        maintenance_left_ = cfg_.maintenance_slices - 1;
        if (periodic && !repair_pending_) broken_.clear();
        repair_pending_ = false;
        collection_since_repair_ = 0;
        return Phase::Maintenance;
    }
    return Phase::Collection;
}

bool Simulator::step() {
    if (finished_) return false;
    current_ = SliceRecord{};
    current_.slice = slice_;
    current_.dt = cfg_.slice_dt;
    for (auto& n : net_.nodes) {
        n.usage = {};
        n.flows = {};
    }

    const Phase phase = next_phase();
    current_.phase = phase;
    switch (phase) {
        case Phase::Initialization: initialization_slice(epoch_slice_); break;
        case Phase::Collection:
            collection_tasks();
            ++collection_since_repair_;
            break;
        case Phase::Maintenance:
            collection_tasks();
            maintenance_tasks();
            break;
    }
    finish_slice(phase);
    return !finished_;
}

void Simulator::finish_slice(Phase) {
    current_.alive_nodes = net_.alive_count();
    trace_.push_back(current_);
    ++slice_;
    ++epoch_slice_;
    if (current_.alive_nodes == 0) {
        finished_ = true;
        return;
    }
    if (epoch_slice_ >= cfg_.slices) {
        ++epoch_;
        epoch_slice_ = 0;
        maintenance_left_ = 0;
        repair_pending_ = false;
        collection_since_repair_ = 0;
        broken_.clear();
        if (epoch_ >= cfg_.epochs) finished_ = true;
    }
}

RunResult Simulator::run() {
    while (step()) {
    }
    RunResult r;
    r.trace = trace_;
    r.network = net_;
    r.ledger = ledger_;
    r.drops = drops_;
    r.delivered = delivered_;
    r.initial_battery_total = initial_total_;
    return r;
}

void Simulator::discover_neighbors() {
    for (auto& a : net_.nodes) {
        a.neighbors.clear();
        if (!a.alive) continue;
        for (const auto& b : net_.nodes) {
            if (a.id == b.id || !b.alive) continue;
            const double d = (a.position - b.position).norm();
            if (d > 0.0 && d <= cfg_.r_tx) a.neighbors.push_back({b.id, d, b.battery});
        }
    }
}

void Simulator::initialization_slice(int step_in_init) {
    const int stage = std::min(step_in_init, 2);
    if (stage == 0) discover_neighbors();
    for (auto& node : net_.nodes) {
        const int i = node.id;
        if (!net_.nodes[static_cast<std::size_t>(i)].alive) continue;
        const long os_packets = realize(cfg_.individual.b_os);
        for (long k = 0; k < os_packets; ++k) charge(i, PacketKind::SystemTask, kCpuMem);
        switch (stage) {
            case 0:
                for (int k = 0; k < cfg_.boot_packets; ++k) charge(i, PacketKind::SystemTask, kCpuMem);
                if (charge(i, PacketKind::NeighborInfo, kTxControl))
                    for (const auto& nb : node.neighbors) charge(nb.id, PacketKind::NeighborInfo, kRxControl);
                break;
            case 1:
                monitor(i);
                if (charge(i, PacketKind::Scheduling, kTxControl))
                    for (const auto& nb : node.neighbors) charge(nb.id, PacketKind::Scheduling, kRxControl);
                break;
            default:
            {
                const double table = table_scale(i);
                if (charge(i, PacketKind::TopologyInfo, kTxControl, table))
                    for (const auto& nb : node.neighbors) charge(nb.id, PacketKind::TopologyInfo, kRxControl, table);
                if (charge(i, PacketKind::RoutingInfo, kRouteTx, table))
                    for (const auto& nb : node.neighbors) charge(nb.id, PacketKind::RoutingInfo, kRouteRx, table);
                break;
            }
        }
    }
    if (stage >= 2) {
        std::vector<int> everyone;
        for (const auto& n : net_.nodes) everyone.push_back(n.id);
        refresh_routes(everyone);
    }
}

void Simulator::monitor(int i) {
    auto& node = net_.nodes[static_cast<std::size_t>(i)];
    if (!charge(i, PacketKind::NeighborInfo, kTxControl)) return;
    for (auto& nb : node.neighbors) {
        auto& other = net_.nodes[static_cast<std::size_t>(nb.id)];
        if (other.alive && charge(nb.id, PacketKind::NeighborInfo, kProbeReply)) {
            if (!charge(i, PacketKind::NeighborInfo, kRxControl)) return;
            nb.known_residual = other.battery;
        } else {
            // Probe timed out.
            nb.known_residual = 0.0;
            if (node.next_hop.kind == HopKind::Node && node.next_hop.node == nb.id) {
                broken_.push_back(i);
                repair_pending_ = true;
            }
        }
    }
}

void Simulator::local_overheads(int i, long base_packets) {
    const auto& node = net_.nodes[static_cast<std::size_t>(i)];
    const long b_mon = realize(cfg_.local.b_mon);
    const long b_sec = realize(cfg_.local.b_sec);
    const long b_ohead = realize(cfg_.local.b_ohead);
    for (long k = 0; k < b_mon; ++k) charge(i, PacketKind::NeighborInfo, kTxControl);
    for (long k = 0; k < b_sec; ++k) charge(i, PacketKind::Scheduling, kCpuOnly);
    for (long k = 0; k < b_ohead; ++k) charge(i, PacketKind::Scheduling, kTxControl);

    long alive_neighbors = 0;
    double nearest = cfg_.r_tx;
    for (const auto& nb : node.neighbors) {
        if (!net_.nodes[static_cast<std::size_t>(nb.id)].alive) continue;
        ++alive_neighbors;
        nearest = std::min(nearest, nb.distance);
    }
    if (alive_neighbors == 0) return;

    flows::LocalParams params = cfg_.local;
    params.n = static_cast<double>(alive_neighbors);
    params.net_dens = static_cast<double>(std::max(1, net_.alive_count()));
    params.g_tx = cfg_.g_tx;
    params.r_tx = cfg_.r_tx;
    params.d_ij = nearest;
    params.b_mon = static_cast<double>(base_packets + b_mon);
    params.b_sec = static_cast<double>(b_sec);
    params.b_ohead = static_cast<double>(b_ohead);
    const auto expected = flows::local_flow(params, cfg_.probabilities);

    const long coll = rng_.poisson(expected.coll);
    const long ohear = rng_.poisson(expected.ohear);
    const long idle = rng_.poisson(expected.idle);
    for (long k = 0; k < coll; ++k) charge(i, PacketKind::Scheduling, kRetransmit);
    for (long k = 0; k < ohear; ++k) charge(i, PacketKind::NeighborInfo, kRxOnly);
    for (long k = 0; k < idle; ++k) charge(i, PacketKind::NeighborInfo, kRxOnly);
}

void Simulator::forward(int origin) {
    const double loss = flows::p_hop(std::max(1, net_.alive_count()), cfg_.probabilities);
    int cur = origin;
    for (int hops = 0; hops <= cfg_.node_count; ++hops) {
        const auto& sender = net_.nodes[static_cast<std::size_t>(cur)];
        const NextHop hop = sender.next_hop;
        if (hop.kind == HopKind::None) {
            ++drops_.unroutable;
            return;
        }
        bool through = !rng_.bernoulli(loss);
        for (int retry = 0; !through && retry < cfg_.max_retx; ++retry) {
            if (!charge(cur, PacketKind::RelayedData, kRetransmit)) return;
            through = !rng_.bernoulli(loss);
        }
        if (!through) {
            ++drops_.lost;
            return;
        }
        if (hop.kind == HopKind::Sink) {
            ++delivered_;
            return;
        }
        if (!net_.nodes[static_cast<std::size_t>(hop.node)].alive) {
            // No acknowledgement from the next hop: the sender reports a broken route.
            ++drops_.dead_node;
            broken_.push_back(cur);
            repair_pending_ = true;
            return;
        }
        if (!charge(hop.node, PacketKind::RelayedData, kRelay)) return;
        cur = hop.node;
    }
    ++drops_.unroutable;
}

void Simulator::collection_tasks() {
    const bool monitor_now = cfg_.monitoring && (collection_count_ % cfg_.monitor_interval == 0);
    ++collection_count_;
    const double sense_p = flows::p_sense(cfg_.individual.r_sense, cfg_.individual.g_sense, cfg_.probabilities);

    for (std::size_t idx = 0; idx < net_.nodes.size(); ++idx) {
        const int i = static_cast<int>(idx);
        if (!net_.nodes[idx].alive) continue;

        const long os_packets = realize(cfg_.individual.b_os);
        const long sec_packets = realize(cfg_.individual.b_sec);
        for (long k = 0; k < os_packets; ++k) charge(i, PacketKind::SystemTask, kCpuMem);
        for (long k = 0; k < sec_packets; ++k) charge(i, PacketKind::SystemTask, kCpuOnly);

        const long events = rng_.poisson(cfg_.event_rate * cfg_.slice_dt);
        const long sensed = rng_.binomial(events, sense_p);
        for (long k = 0; k < sensed; ++k)
            if (charge(i, PacketKind::Sensed, kSensed)) forward(i);

        if (!net_.nodes[idx].alive) continue;
        long monitoring_packets = 0;
        if (monitor_now) {
            const double before = current_.flows[Constituent::Local];
            monitor(i);
            monitoring_packets = static_cast<long>(current_.flows[Constituent::Local] - before);
        }
        local_overheads(i, monitoring_packets);

        const long topo = realize(cfg_.global.b_topo);
        const long rout = realize(cfg_.global.b_rout);
        const long gsec = realize(cfg_.global.b_sec);
        const long gohead = realize(cfg_.global.b_ohead);
        const double table = table_scale(i);
        for (long k = 0; k < topo; ++k) charge(i, PacketKind::TopologyInfo, kTxControl, table);
        for (long k = 0; k < rout; ++k) charge(i, PacketKind::RoutingInfo, kTxControl, table);
        for (long k = 0; k < gsec; ++k) charge(i, PacketKind::RoutingInfo, kCpuOnly);
        for (long k = 0; k < gohead; ++k) charge(i, PacketKind::RoutingInfo, kTxControl);

        const long env = realize(flows::environment_flow(cfg_.environment));
        const long snk = realize(flows::sink_flow(cfg_.sink));
        for (long k = 0; k < env; ++k) charge(i, PacketKind::HarvestControl, kCpuOnly);
        for (long k = 0; k < snk; ++k) charge(i, PacketKind::SinkControl, kTxControl);
    }
}

std::vector<int> Simulator::repair_participants() const {
    std::vector<int> out;
    if (cfg_.repair_radius == 0 || broken_.empty()) {
        for (const auto& n : net_.nodes)
            if (n.alive) out.push_back(n.id);
        return out;
    }
    std::vector<int> depth(net_.nodes.size(), -1);
    std::deque<int> queue;
    for (int b : broken_) {
        if (depth[static_cast<std::size_t>(b)] == -1) {
            depth[static_cast<std::size_t>(b)] = 0;
            queue.push_back(b);
        }
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (depth[static_cast<std::size_t>(u)] >= cfg_.repair_radius) continue;
        for (const auto& nb : net_.nodes[static_cast<std::size_t>(u)].neighbors) {
            auto& d = depth[static_cast<std::size_t>(nb.id)];
            if (d == -1) {
                d = depth[static_cast<std::size_t>(u)] + 1;
                queue.push_back(nb.id);
            }
        }
    }
    for (std::size_t i = 0; i < depth.size(); ++i)
        if (depth[i] >= 0 && net_.nodes[i].alive) out.push_back(static_cast<int>(i));
    return out;
}

void Simulator::maintenance_tasks() {
    const auto participants = repair_participants();
    auto broadcast = [&](int p, PacketKind kind, const Usage& tx, const Usage& rx) {
        const double table = table_scale(p);
        if (!charge(p, kind, tx, table)) return;
        for (const auto& nb : net_.nodes[static_cast<std::size_t>(p)].neighbors)
            if (net_.nodes[static_cast<std::size_t>(nb.id)].alive) charge(nb.id, kind, rx, table);
    };
    for (int round = 0; round < cfg_.flood_rounds; ++round)
        for (int p : participants) broadcast(p, PacketKind::TopologyInfo, kTxControl, kRxControl);
    for (int p : participants) broadcast(p, PacketKind::RoutingInfo, kRouteTx, kRouteRx);
    refresh_routes(participants);
    broken_.clear();
}

void Simulator::refresh_routes(const std::vector<int>& participants) {
    for (int p : participants) {
        auto& node = net_.nodes[static_cast<std::size_t>(p)];
        std::erase_if(node.neighbors, [&](const Neighbor& nb) { return !net_.nodes[static_cast<std::size_t>(nb.id)].alive; });
        for (auto& nb : node.neighbors) nb.known_residual = net_.nodes[static_cast<std::size_t>(nb.id)].battery;
    }
    for (int p : participants) {
        auto& node = net_.nodes[static_cast<std::size_t>(p)];
        node.next_hop = node.alive ? select_next_hop(node, net_) : NextHop{};
    }
}

RunResult run(const ScenarioConfig& cfg) {
    Simulator sim(cfg);
    return sim.run();
}

RadioConsistency radio_consistency(const ScenarioConfig& cfg) {
    const auto p = cfg.effective_profile();
    const double bits = cfg.bits_per_packet;
    RadioConsistency r;
    r.tx_ratio = p[Resource::Tx] / (bits * radio::tx_energy_per_bit(cfg.r_tx, cfg.radio));
    r.rx_ratio = p[Resource::Rx] / (bits * radio::rx_energy_per_bit(cfg.radio));
    return r;
}

}  // namespace thrifty::sim
