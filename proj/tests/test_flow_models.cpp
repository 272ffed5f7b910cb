#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thrifty/errors.hpp"
#include "thrifty/flow_models.hpp"

using namespace thrifty;
using namespace thrifty::flows;

TEST_SUITE("flow_models") {
    TEST_CASE("p_sense form and monotonicity") {
        ProbabilityModelConfig cfg;
        cfg.sigma = 0.01;
        // sigma r^2 = 1, so 1 / (1 + 2 + 1).
        CHECK(p_sense(10.0, 2.0, cfg) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(p_sense(1e-9, 0.0, cfg) < 1e-18);
        CHECK(p_sense(5.0, 0.0, cfg) >= p_sense(5.0, 0.1, cfg));
        double last = 0.0;
        for (double r = 0.5; r < 6.0; r += 0.5) {
            const double p = p_sense(r, 1.0, cfg);
            CHECK(p > last);
            last = p;
        }
        CHECK_THROWS_AS(p_sense(0.0, 1.0, cfg), ValidationError);
        CHECK_THROWS_AS(p_sense(1.0, -1.0, cfg), ValidationError);
    }

    TEST_CASE("local probabilities") {
        ProbabilityModelConfig zero;
        zero.kappa_coll = zero.kappa_ohear = zero.kappa_idle = 0.0;
        CHECK(p_coll(1, 0.5, 10, zero) == 0.0);
        CHECK(p_ohear(1, 10, 30, zero) == 0.0);
        CHECK(p_idle(1, zero) == 0.0);

        ProbabilityModelConfig cfg;
        cfg.kappa_idle = 0.3;
        CHECK(p_idle(2, cfg) == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(p_idle(1, cfg) >= p_idle(5, cfg));
        CHECK(p_coll(2, 0.01, 10, cfg) <= p_coll(3, 0.01, 10, cfg));
        CHECK(p_coll(2, 0.01, 10, cfg) <= p_coll(2, 0.02, 10, cfg));
        CHECK(p_coll(2, 0.01, 10, cfg) <= p_coll(2, 0.01, 20, cfg));
        CHECK(p_ohear(2, 10, 10, cfg) <= p_ohear(3, 10, 10, cfg));
        CHECK(p_ohear(2, 10, 10, cfg) <= p_ohear(2, 10, 20, cfg));
    }

    TEST_CASE("all probabilities stay within [0, p_cap] for random inputs") {
        std::mt19937_64 gen(21);
        auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
        for (int k = 0; k < 2000; ++k) {
            ProbabilityModelConfig cfg;
            cfg.sigma = u(0, 10);
            cfg.kappa_coll = u(0, 10);
            cfg.kappa_ohear = u(0, 10);
            cfg.kappa_idle = u(0, 10);
            cfg.kappa_loss = u(0, 10);
            cfg.area = u(1, 1e4);
            cfg.p_cap = u(0, 0.33);
            const double n = std::floor(u(1, 50));
            for (double p : {p_sense(u(1e-3, 100), u(0, 10), cfg), p_coll(n, u(0, 1), n + u(0, 100), cfg),
                             p_ohear(n, n + 1, u(0, 200), cfg), p_idle(n, cfg),
                             p_pktls(u(0, 1000), u(0.1, 100), u(1, 100), cfg)}) {
                CHECK(p >= 0.0);
                CHECK(p <= cfg.p_cap);
            }
        }
    }

    TEST_CASE("probability model boundaries") {
        ProbabilityModelConfig cfg;
        cfg.p_cap = 0.34;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
        cfg.p_cap = 0.33;
        CHECK_NOTHROW(cfg.validate());
        cfg.sigma = -1;
        CHECK(cfg.boundary_violations().size() == 1);
    }

    TEST_CASE("individual flow closed form") {
        const auto zero = individual_flow_at(0.0, 10, 5);
        CHECK(zero.total == 15.0);
        CHECK(zero.sensed == 0.0);
        const auto half = individual_flow_at(0.5, 10, 5);
        CHECK(half.total == doctest::Approx(oracle::fixed_point(15.0, 0.5)).epsilon(1e-12));
        CHECK(half.total == doctest::Approx(30.0).epsilon(1e-15));
        CHECK(half.sensed == doctest::Approx(15.0).epsilon(1e-15));
        CHECK_THROWS_AS(individual_flow_at(1.0, 10, 5), SingularityError);
        CHECK_THROWS_AS(individual_flow_at(1.0 - 1e-10, 10, 5), SingularityError);
    }

    TEST_CASE("local flow closed form") {
        const auto none = local_flow_at(0, 0, 0, 4, 4, 4);
        CHECK(none.total == 12.0);
        CHECK(none.coll + none.ohear + none.idle == 0.0);
        const auto half = local_flow_at(0.2, 0.2, 0.1, 4, 4, 4);
        CHECK(half.total == doctest::Approx(oracle::fixed_point(12.0, 0.5)).epsilon(1e-12));
        CHECK(half.total == doctest::Approx(24.0).epsilon(1e-14));
        CHECK_THROWS_AS(local_flow_at(0.5, 0.25, 0.25, 4, 4, 4), SingularityError);
    }

    TEST_CASE("global flow and packet loss") {
        const auto lossless = global_flow_at(0.0, 2, 2, 2, 2);
        CHECK(lossless.total == 8.0);
        const auto lossy = global_flow_at(0.2, 2, 2, 2, 2);
        CHECK(lossy.total == doctest::Approx(10.0).epsilon(1e-15));
        CHECK(lossy.pktls == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(lossy.total == doctest::Approx(oracle::fixed_point(8.0, 0.2)).epsilon(1e-12));

        CHECK(loss_over_hops(0.1, 2) == doctest::Approx(0.19).epsilon(1e-15));
        CHECK(loss_over_hops(0.0, 7) == 0.0);

        ProbabilityModelConfig cfg;
        CHECK(p_pktls(0.0, 30, 25, cfg) == 0.0);
        CHECK_THROWS_AS(p_pktls(10.0, 0.0, 25, cfg), ValidationError);
        double last = 0.0;
        for (double d = 0; d < 400; d += 10) {
            const double p = p_pktls(d, 30, 25, cfg);
            CHECK(p >= last);
            last = p;
        }

        GlobalParams adjacent;
        adjacent.dist_to_sink = 0.0;
        adjacent.b_topo = 3;
        adjacent.b_rout = 5;
        CHECK(global_flow(adjacent, cfg).total == 8.0);
    }

    TEST_CASE("defining sums are recovered from the outputs") {
        std::mt19937_64 gen(22);
        auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
        for (int k = 0; k < 500; ++k) {
            const double ps = u(0, 0.33);
            const double os = u(0, 50), sec = u(0, 50);
            const auto fi = individual_flow_at(ps, os, sec);
            CHECK(oracle::rel_err(fi.sensed + os + sec, fi.total) < 1e-12);

            const double pc = u(0, 0.3), po = u(0, 0.3), pi = u(0, 0.3);
            const double lsec = u(0, 20), mon = u(0, 20), oh = u(0, 20);
            const auto fl = local_flow_at(pc, po, pi, lsec, mon, oh);
            CHECK(oracle::rel_err(fl.coll + fl.idle + fl.ohear + lsec + mon + oh, fl.total) < 1e-12);

            const double pl = u(0, 0.3);
            const double gs = u(0, 9), gt = u(0, 9), gr = u(0, 9), go = u(0, 9);
            const auto fg = global_flow_at(pl, gs, gt, gr, go);
            CHECK(oracle::rel_err(fg.pktls + gs + gt + gr + go, fg.total) < 1e-12);
        }
    }

    TEST_CASE("flows grow with every additive overhead") {
        ProbabilityModelConfig cfg;
        IndividualParams ind{.r_sense = 10, .g_sense = 1, .b_os = 2, .b_sec = 1};
        auto more = ind;
        more.b_os += 1;
        CHECK(individual_flow(more, cfg).total > individual_flow(ind, cfg).total);
        more = ind;
        more.b_sec += 1;
        CHECK(individual_flow(more, cfg).total > individual_flow(ind, cfg).total);

        LocalParams loc{.n = 4, .net_dens = 25, .g_tx = 0.01, .r_tx = 30, .d_ij = 10, .b_mon = 1, .b_sec = 1, .b_ohead = 1};
        for (double LocalParams::*field : {&LocalParams::b_mon, &LocalParams::b_sec, &LocalParams::b_ohead}) {
            auto l2 = loc;
            l2.*field += 1;
            CHECK(local_flow(l2, cfg).total > local_flow(loc, cfg).total);
        }

        GlobalParams glo{.dist_to_sink = 70, .r_tx = 30, .net_dens = 25, .b_sec = 1, .b_topo = 1, .b_rout = 1, .b_ohead = 1};
        for (double GlobalParams::*field :
             {&GlobalParams::b_sec, &GlobalParams::b_topo, &GlobalParams::b_rout, &GlobalParams::b_ohead}) {
            auto g2 = glo;
            g2.*field += 1;
            CHECK(global_flow(g2, cfg).total > global_flow(glo, cfg).total);
        }

        EnvironmentParams env{.b_ph = 1, .b_sec = 1};
        auto env2 = env;
        env2.b_ph += 1;
        CHECK(environment_flow(env2) > environment_flow(env));
    }

    TEST_CASE("environment and sink flows are direct sums") {
        CHECK(environment_flow({}) == 0.0);
        CHECK(environment_flow({.b_ph = 3, .b_sec = 4}) == 7.0);
        CHECK(sink_flow({}) == 0.0);
        CHECK(sink_flow({.b_ohead = 2, .b_sec = 5}) == 7.0);
        std::mt19937_64 gen(23);
        std::uniform_real_distribution<double> u(0, 1e3);
        for (int k = 0; k < 100; ++k) {
            const double a = u(gen), b = u(gen);
            CHECK(environment_flow({.b_ph = a, .b_sec = b}) == a + b);
            CHECK(sink_flow({.b_ohead = a, .b_sec = b}) == a + b);
        }
        CHECK_THROWS_AS(environment_flow({.b_ph = -1}), ValidationError);
        CHECK_THROWS_AS(sink_flow({.b_sec = -1}), ValidationError);
    }

    TEST_CASE("parameter boundaries name the violated rule") {
        IndividualParams ind;
        ind.r_sense = 0;
        const auto v = ind.boundary_violations();
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("r_sense > 0") != std::string::npos);

        LocalParams loc;
        loc.r_tx = 10;
        loc.d_ij = 11;
        CHECK(loc.boundary_violations().size() == 1);
        CHECK_THROWS_AS(loc.validate(), ValidationError);
    }
}
