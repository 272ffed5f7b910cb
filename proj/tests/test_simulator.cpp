#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "thrifty/errors.hpp"
#include "thrifty/simulator.hpp"

using namespace thrifty;
using namespace thrifty::sim;

namespace {

ResourceUsageVector<double> cpu_mem() { return ResourceUsageVector<double>::make(1, 1, 0, 0, 0); }

double ledger_total(const RunResult& r) {
    double s = 0.0;
    for (const auto& e : r.ledger) s += e.energy;
    return s;
}

double remaining(const Network& net) {
    double s = 0.0;
    for (const auto& n : net.nodes) s += n.battery;
    return s;
}

}  // namespace

TEST_SUITE("simulator") {
    TEST_CASE("packet kinds map onto constituents") {
        CHECK(classify_packet(PacketKind::Sensed) == Constituent::Individual);
        CHECK(classify_packet(PacketKind::SystemTask) == Constituent::Individual);
        CHECK(classify_packet(PacketKind::NeighborInfo) == Constituent::Local);
        CHECK(classify_packet(PacketKind::Scheduling) == Constituent::Local);
        CHECK(classify_packet(PacketKind::TopologyInfo) == Constituent::Global);
        CHECK(classify_packet(PacketKind::RoutingInfo) == Constituent::Global);
        CHECK(classify_packet(PacketKind::RelayedData) == Constituent::Global);
        CHECK(classify_packet(PacketKind::HarvestControl) == Constituent::Environment);
        CHECK(classify_packet(PacketKind::SinkControl) == Constituent::Sink);
    }

    TEST_CASE("topology is seeded, range limited and symmetric") {
        ScenarioConfig cfg;
        const auto a = build_topology(cfg);
        const auto b = build_topology(cfg);
        for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i].position == b.nodes[i].position);
        cfg.seed = 2;
        const auto c = build_topology(cfg);
        CHECK(a.nodes[0].position != c.nodes[0].position);

        for (const auto& n : a.nodes) {
            CHECK(n.position.x() >= 0.0);
            CHECK(n.position.x() <= cfg.area_width);
            for (const auto& other : a.nodes) {
                if (other.id == n.id) continue;
                const double d = (n.position - other.position).norm();
                const bool listed = std::any_of(n.neighbors.begin(), n.neighbors.end(),
                                                [&](const Neighbor& nb) { return nb.id == other.id; });
                CHECK(listed == (d <= cfg.r_tx));
            }
        }
    }

    TEST_CASE("next hops move strictly towards the sink") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ScenarioConfig cfg;
            cfg.seed = seed;
            const auto net = build_topology(cfg);
            for (const auto& n : net.nodes) {
                switch (n.next_hop.kind) {
                    case HopKind::Sink: CHECK(n.sink_distance <= cfg.r_tx); break;
                    case HopKind::Node:
                        CHECK(n.sink_distance > cfg.r_tx);
                        CHECK(net.nodes[static_cast<std::size_t>(n.next_hop.node)].sink_distance < n.sink_distance);
                        break;
                    case HopKind::None: CHECK(n.sink_distance > cfg.r_tx); break;
                }
            }
        }
    }

    TEST_CASE("a single node beside the sink delivers directly") {
        ScenarioConfig cfg;
        cfg.node_count = 1;
        cfg.area_width = cfg.area_height = 10.0;
        const auto r = run(cfg);
        CHECK(r.network.nodes[0].next_hop.kind == HopKind::Sink);
        long sensed = 0;
        for (const auto& e : r.ledger) sensed += e.kind == PacketKind::Sensed;
        CHECK(sensed > 0);
        CHECK(r.delivered + r.drops.lost == sensed);
        CHECK(r.drops.unroutable == 0);
    }

    TEST_CASE("no events means no sensed or relayed traffic") {
        ScenarioConfig cfg;
        cfg.event_rate = 0.0;
        cfg.monitoring = false;
        const auto r = run(cfg);
        for (const auto& e : r.ledger) {
            CHECK(e.kind != PacketKind::Sensed);
            CHECK(e.kind != PacketKind::RelayedData);
        }
        CHECK(r.delivered == 0);
    }

    TEST_CASE("charging at the battery boundary") {
        ScenarioConfig cfg;
        cfg.node_count = 2;
        const auto profile = cfg.effective_profile();
        const double cost = profile[Resource::Cpu] + profile[Resource::Mem];

        cfg.initial_battery = cost;
        Simulator exact(cfg);
        CHECK(exact.charge(0, PacketKind::SystemTask, cpu_mem()));
        CHECK(exact.network().nodes[0].battery == 0.0);
        CHECK_FALSE(exact.network().nodes[0].alive);
        CHECK_FALSE(exact.charge(0, PacketKind::SystemTask, cpu_mem()));
        CHECK(exact.drops().dead_node == 1);

        cfg.initial_battery = std::nextafter(cost, 0.0);
        Simulator short_by_one(cfg);
        CHECK_FALSE(short_by_one.charge(1, PacketKind::SystemTask, cpu_mem()));
        CHECK_FALSE(short_by_one.network().nodes[1].alive);
        CHECK(short_by_one.network().nodes[1].battery == cfg.initial_battery);
        CHECK(short_by_one.ledger().empty());
    }

    TEST_CASE("table scale grows the radio share only") {
        ScenarioConfig cfg;
        cfg.node_count = 2;
        cfg.area_width = cfg.area_height = 5.0;
        const auto profile = cfg.effective_profile();
        Simulator s(cfg);
        CHECK(s.table_scale(0) == 1.0 + static_cast<double>(cfg.table_entry_bits) / cfg.bits_per_packet);
        const auto tx = ResourceUsageVector<double>::make(1, 0, 0, 1, 0);
        REQUIRE(s.charge(0, PacketKind::TopologyInfo, tx, 2.0));
        const double want = profile[Resource::Cpu] + 2.0 * profile[Resource::Tx];
        CHECK(s.ledger().back().energy == doctest::Approx(want).epsilon(1e-15));
    }

    TEST_CASE("energy is conserved and the alive count never grows") {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            ScenarioConfig cfg;
            cfg.seed = seed;
            if (seed % 2 == 0) cfg.initial_battery = 0.05;
            const auto r = run(cfg);
            const double used = r.initial_battery_total - remaining(r.network);
            CHECK(oracle::rel_err(ledger_total(r), used) < 1e-9);
            double traced = 0.0;
            for (const auto& s : r.trace) traced += s.energy_j;
            CHECK(oracle::rel_err(traced, used) < 1e-9);
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                CHECK(r.trace[i].alive_nodes <= r.trace[i - 1].alive_nodes);
            for (const auto& n : r.network.nodes) CHECK(n.battery >= 0.0);
        }
    }

    TEST_CASE("runs are reproducible") {
        ScenarioConfig cfg;
        cfg.seed = 9;
        const auto a = run(cfg);
        const auto b = run(cfg);
        CHECK(a.trace == b.trace);
        REQUIRE(a.ledger.size() == b.ledger.size());
        for (std::size_t i = 0; i < a.ledger.size(); ++i) CHECK(a.ledger[i].energy == b.ledger[i].energy);
        cfg.seed = 10;
        CHECK_FALSE(run(cfg).trace == a.trace);
    }

    TEST_CASE("a default run goes through every phase and maintenance is global-heavy") {
        const auto r = run(ScenarioConfig{});
        double coll_global = 0.0, coll_energy = 0.0;
        long coll = 0;
        bool init = false, maint = false;
        for (const auto& s : r.trace) {
            init |= s.phase == Phase::Initialization;
            maint |= s.phase == Phase::Maintenance;
            if (s.phase == Phase::Collection) {
                coll_global += s.flows[Constituent::Global];
                coll_energy += s.energy_j;
                ++coll;
            }
        }
        REQUIRE(coll > 0);
        CHECK(init);
        CHECK(maint);
        CHECK(r.trace.size() >= 60);
        for (const auto& s : r.trace) {
            if (s.phase != Phase::Maintenance) continue;
            CHECK(s.flows[Constituent::Global] > coll_global / coll);
            CHECK(s.energy_j > coll_energy / coll);
        }
    }

    TEST_CASE("charging by mix rows makes energy exactly linear in flows") {
        ScenarioConfig cfg;
        cfg.charge_by_mix = true;
        const auto r = run(cfg);
        const auto alpha = coefficients_from_mix(cfg.mix, cfg.effective_profile());
        for (const auto& s : r.trace) {
            const double want = overall_energy(alpha, s.flows);
            CHECK(oracle::rel_err(s.energy_j, want) < 1e-12);
        }
    }

    TEST_CASE("invalid scenarios are rejected with every violation") {
        ScenarioConfig cfg;
        cfg.node_count = 0;
        CHECK_THROWS_AS(build_topology(cfg), ConfigError);

        cfg = {};
        cfg.sink_position = {200.0, 0.0};
        CHECK_THROWS_AS(cfg.validate(), ConfigError);

        cfg.node_count = 0;
        cfg.r_tx = -1;
        try {
            cfg.validate();
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(e.violations().size() >= 3);
        }
    }

    TEST_CASE("radio-derived costs are consistent with the radio model") {
        ScenarioConfig cfg;
        const auto c = radio_consistency(cfg);
        CHECK(c.tx_ratio == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(c.rx_ratio == doctest::Approx(1.0).epsilon(1e-15));
    }
}
