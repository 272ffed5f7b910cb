#pragma once

// Slice-stepped simulator of an event-collection sensor network.
//
// Nodes are scattered uniformly over a rectangle with a group of sinks at one
// location. Every packet a node handles is charged against its battery and
// tallied under the constituent of its packet kind. A run goes through an
// initialization phase, then collection slices, with maintenance slices
// (route repair floods) whenever a broken route is detected or the periodic
// maintenance interval elapses.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "thrifty/energy_core.hpp"
#include "thrifty/flow_models.hpp"
#include "thrifty/radio_baseline.hpp"
#include "thrifty/rng.hpp"
#include "thrifty/trace.hpp"

namespace thrifty::sim {

enum class PacketKind : int {
    Sensed,
    NeighborInfo,
    Scheduling,
    TopologyInfo,
    RoutingInfo,
    RelayedData,
    SystemTask,      ///< OS, boot and node-level security work
    HarvestControl,  ///< energy-harvesting management
    SinkControl,     ///< sink-directed management
};

std::string_view name(PacketKind kind) noexcept;

/// Constituent a packet kind is accounted under. Total over PacketKind.
Constituent classify_packet(PacketKind kind) noexcept;

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int node_count = 25;
    double area_width = 100.0;
    double area_height = 100.0;
    Eigen::Vector2d sink_position{0.0, 0.0};
    int sink_count = 3;
    double sink_spacing = 2.0;  ///< sinks sit along +x from sink_position

    double r_tx = 30.0;
    double g_tx = 0.01;
    double slice_dt = 1.0;
    int init_slices = 3;
    int slices = 60;  ///< per epoch, initialization included
    int epochs = 1;
    double event_rate = 2.0;  ///< events per node per second
    double initial_battery = 1.0;

    bool monitoring = true;
    int monitor_interval = 1;
    int maintenance_interval = 12;  ///< collection slices between periodic repairs; 0 disables
    int maintenance_slices = 2;
    int flood_rounds = 3;
    int repair_radius = 0;  ///< hops around a broken route; 0 repairs the whole network
    int max_retx = 3;
    int boot_packets = 10;

    int bits_per_packet = 1000;
    int table_entry_bits = 800;  ///< topology and routing packets carry one entry per alive neighbor
    bool derive_radio_costs = true;  ///< p_rx and p_tx from the radio model at r_tx
    bool charge_by_mix = false;      ///< charge each packet its constituent's mix row

    ResourcePowerProfile<double> profile = ResourcePowerProfile<double>::make(1e-5, 5e-6, 5e-5, 5.9e-5, 2e-5);
    ConstituentResourceMix<double> mix = default_mix();
    flows::ProbabilityModelConfig probabilities{.sigma = 0.005};
    flows::IndividualParams individual{.r_sense = 10.0, .g_sense = 1.0, .b_os = 2.0, .b_sec = 1.0};
    flows::LocalParams local{.b_sec = 0.0, .b_ohead = 1.0};
    flows::GlobalParams global;
    flows::EnvironmentParams environment;
    flows::SinkParams sink;
    radio::RadioModelParams<double> radio;

    static ConstituentResourceMix<double> default_mix();

    std::vector<Eigen::Vector2d> sink_positions() const;

    /// Resource costs actually charged.
    ResourcePowerProfile<double> effective_profile() const;

    std::vector<std::string> boundary_violations() const;
    /// Throws ConfigError listing every violation.
    void validate() const;
};

struct Neighbor {
    int id = -1;
    double distance = 0.0;
    double known_residual = 0.0;
};

enum class HopKind { None, Sink, Node };

struct NextHop {
    HopKind kind = HopKind::None;
    int node = -1;

    friend bool operator==(const NextHop&, const NextHop&) = default;
};

struct NodeState {
    int id = 0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double battery = 0.0;
    bool alive = true;
    double sink_distance = 0.0;  ///< to the nearest sink
    std::vector<Neighbor> neighbors;
    NextHop next_hop;
    ResourceUsageVector<double> usage;       ///< this slice
    ConstituentFlowVector<double> flows;     ///< this slice
};

struct Network {
    std::vector<NodeState> nodes;
    std::vector<Eigen::Vector2d> sinks;
    double r_tx = 0.0;

    int alive_count() const;
};

/// Seeded placement, range-limited adjacency and initial next hops.
Network build_topology(const ScenarioConfig& cfg);

/// Residual-energy greedy next hop among neighbors strictly closer to the nearest sink.
NextHop select_next_hop(const NodeState& node, const Network& net);

struct LedgerEntry {
    long slice = 0;
    int node = 0;
    PacketKind kind = PacketKind::Sensed;
    double energy = 0.0;
};

struct DropStats {
    long dead_node = 0;    ///< packets a dead or exhausted node could not handle
    long unroutable = 0;   ///< no next hop
    long lost = 0;         ///< retransmission budget exhausted

    long total() const { return dead_node + unroutable + lost; }
};

struct RunResult {
    Trace trace;
    Network network;
    std::vector<LedgerEntry> ledger;
    DropStats drops;
    long delivered = 0;
    double initial_battery_total = 0.0;
};

class Simulator {
public:
    explicit Simulator(ScenarioConfig cfg);

    /// Charges one packet to `node`. Returns false (and counts a drop) if the node
    /// is dead or cannot afford it; a node that cannot afford a packet is exhausted.
    /// radio_scale multiplies the rx/tx part of the cost (larger packets); ignored under charge_by_mix.
    bool charge(int node, PacketKind kind, const ResourceUsageVector<double>& usage, double radio_scale = 1.0);
    double table_scale(int node) const;

    /// Advances one slice. Returns false once the run is over.
    bool step();

    RunResult run();

    const Network& network() const { return net_; }
    const Trace& trace() const { return trace_; }
    const std::vector<LedgerEntry>& ledger() const { return ledger_; }
    const DropStats& drops() const { return drops_; }
    long current_slice() const { return slice_; }

private:
    Phase next_phase();
    void initialization_slice(int step_in_init);
    void collection_tasks();
    void maintenance_tasks();
    void forward(int origin);
    void monitor(int node);
    void local_overheads(int node, long base_packets);
    void discover_neighbors();
    void refresh_routes(const std::vector<int>& participants);
    std::vector<int> repair_participants() const;
    long realize(double mean);
    void finish_slice(Phase phase);

    ScenarioConfig cfg_;
    ResourcePowerProfile<double> profile_;
    Network net_;
    Rng rng_;

    Trace trace_;
    std::vector<LedgerEntry> ledger_;
    DropStats drops_;
    long delivered_ = 0;
    double initial_total_ = 0.0;

    long slice_ = 0;
    int epoch_ = 0;
    int epoch_slice_ = 0;
    int maintenance_left_ = 0;
    int collection_since_repair_ = 0;
    long collection_count_ = 0;
    bool repair_pending_ = false;
    std::vector<int> broken_;  ///< nodes whose next hop stopped answering
    SliceRecord current_;
    bool finished_ = false;
};

/// Runs a full scenario.
RunResult run(const ScenarioConfig& cfg);

/// bits * per-bit radio cost at r_tx versus the profile's p_tx and p_rx; 1.0 means consistent.
struct RadioConsistency {
    double tx_ratio = 0.0;
    double rx_ratio = 0.0;
};

RadioConsistency radio_consistency(const ScenarioConfig& cfg);

}  // namespace thrifty::sim
