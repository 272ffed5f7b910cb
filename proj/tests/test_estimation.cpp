#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thrifty/errors.hpp"
#include "thrifty/estimation.hpp"

using namespace thrifty;

namespace {

const std::vector<Constituent> kThree = {Constituent::Individual, Constituent::Local, Constituent::Global};

ObservationSet<double> random_set(std::mt19937_64& gen, Eigen::Index m, const double* alpha, double noise) {
    std::uniform_real_distribution<double> flow(0.0, 400.0);
    std::normal_distribution<double> eps(0.0, noise);
    ObservationSet<double> obs;
    obs.columns = kThree;
    obs.flows.resize(m, 3);
    obs.energy.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double e = 0.0;
        for (int j = 0; j < 3; ++j) {
            obs.flows(i, j) = std::round(flow(gen));
            e += alpha[j] * obs.flows(i, j);
        }
        obs.energy(i) = e + (noise > 0 ? eps(gen) : 0.0);
    }
    return obs;
}

oracle::Mat rows_of(const MatrixX<double>& b) {
    oracle::Mat out(static_cast<std::size_t>(b.rows()), oracle::Vec(static_cast<std::size_t>(b.cols())));
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b(i, j);
    return out;
}

oracle::Vec vec_of(const VectorX<double>& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

}  // namespace

TEST_SUITE("estimation") {
    TEST_CASE("noiseless data recovers the generating coefficients") {
        std::mt19937_64 gen(41);
        const double alpha[3] = {2.5e-5, 7.25e-5, 1.9e-4};
        const auto fit = fit_ls(random_set(gen, 50, alpha, 0.0));
        for (int j = 0; j < 3; ++j) CHECK(oracle::rel_err(fit.coefficients[kThree[j]], alpha[j]) < 1e-9);
        CHECK(fit.coefficients.active == three_constituent_mask());
        CHECK(fit.negative.empty());
    }

    TEST_CASE("single collinear column") {
        ObservationSet<double> obs;
        obs.columns = {Constituent::Global};
        obs.flows.resize(2, 1);
        obs.flows << 2, 4;
        obs.energy.resize(2);
        obs.energy << 4, 8;
        CHECK(fit_ls(obs).coefficients[Constituent::Global] == doctest::Approx(2.0).epsilon(1e-14));
    }

    TEST_CASE("noisy data agrees with the normal-equation oracle") {
        std::mt19937_64 gen(42);
        const double alpha[3] = {1e-5, 5e-5, 2e-4};
        for (int trial = 0; trial < 50; ++trial) {
            const auto obs = random_set(gen, 40, alpha, 1e-3);
            const auto fit = fit_ls(obs);
            const auto want = oracle::normal_equations(rows_of(obs.flows), vec_of(obs.energy));
            for (int j = 0; j < 3; ++j) CHECK(oracle::rel_err(fit.coefficients[kThree[j]], want[j]) < 1e-6);
        }
    }

    TEST_CASE("least-squares optimality, orthogonality and scale equivariance") {
        std::mt19937_64 gen(43);
        const double alpha[3] = {3e-5, 4e-5, 1e-4};
        const auto obs = random_set(gen, 60, alpha, 5e-4);
        const auto fit = fit_ls(obs);
        VectorX<double> a(3);
        for (int j = 0; j < 3; ++j) a(j) = fit.coefficients[kThree[j]];
        const double best = (obs.energy - obs.flows * a).norm();
        CHECK(fit.residual.norm() == doctest::Approx(best).epsilon(1e-12));

        std::normal_distribution<double> delta(0.0, 1e-6);
        for (int k = 0; k < 200; ++k) {
            VectorX<double> d(3);
            d << delta(gen), delta(gen), delta(gen);
            CHECK((obs.energy - obs.flows * (a + d)).norm() >= best);
        }

        const VectorX<double> gradient = obs.flows.transpose() * fit.residual;
        const double scale = (obs.flows.transpose() * obs.energy).norm();
        CHECK(gradient.norm() / scale < 1e-6);

        auto scaled = obs;
        scaled.energy *= 3.0;
        const auto fit_scaled = fit_ls(scaled);
        for (auto c : kThree)
            CHECK(fit_scaled.coefficients[c] == doctest::Approx(3.0 * fit.coefficients[c]).epsilon(1e-10));

        auto column = obs;
        column.flows.col(1) *= 4.0;
        const auto fit_col = fit_ls(column);
        CHECK(fit_col.coefficients[Constituent::Local] ==
              doctest::Approx(fit.coefficients[Constituent::Local] / 4.0).epsilon(1e-10));
        CHECK(fit_col.coefficients[Constituent::Global] ==
              doctest::Approx(fit.coefficients[Constituent::Global]).epsilon(1e-10));
    }

    TEST_CASE("standard errors follow the normal-equation covariance") {
        std::mt19937_64 gen(44);
        const double alpha[3] = {3e-5, 4e-5, 1e-4};
        const auto obs = random_set(gen, 30, alpha, 1e-3);
        const auto fit = fit_ls(obs);
        const double sigma2 = fit.residual.squaredNorm() / (30 - 3);
        const MatrixX<double> cov = sigma2 * (obs.flows.transpose() * obs.flows).inverse();
        for (int j = 0; j < 3; ++j)
            CHECK(fit.standard_error(j) == doctest::Approx(std::sqrt(cov(j, j))).epsilon(1e-8));
    }

    TEST_CASE("too few rows and rank deficiency are errors") {
        std::mt19937_64 gen(45);
        const double alpha[3] = {1, 2, 3};
        CHECK_THROWS_AS(fit_ls(random_set(gen, 3, alpha, 0.0)), ValidationError);

        auto obs = random_set(gen, 20, alpha, 0.0);
        obs.columns = {Constituent::Individual, Constituent::Local, Constituent::Environment};
        obs.flows.col(2).setZero();
        try {
            fit_ls(obs);
            FAIL("expected a rank error");
        } catch (const RankDeficientError& e) {
            CHECK(std::string(e.what()).find("b_environment") != std::string::npos);
            CHECK(e.columns() == std::vector<std::string>{"b_environment"});
        }

        auto twins = random_set(gen, 20, alpha, 0.0);
        twins.flows.col(2) = 2.0 * twins.flows.col(0);
        try {
            fit_ls(twins);
            FAIL("expected a rank error");
        } catch (const RankDeficientError& e) {
            CHECK(e.columns() == std::vector<std::string>{"b_individual", "b_global"});
        }
    }

    TEST_CASE("prediction") {
        CoefficientVector<double> a;
        a.alpha << 1, 1, 1, 0, 0;
        a.active = three_constituent_mask();
        ConstituentFlowVector<double> f;
        CHECK(predict(a, f) == 0.0);
        f.values << 2, 3, 4, 0, 0;
        CHECK(predict(a, f) == 9.0);
        CHECK(predict(a, f, three_constituent_mask()) == 9.0);
        CHECK_THROWS_AS(predict(a, f, ConstituentMask{}.set()), ValidationError);
        f.values(3) = 1;
        CHECK_THROWS_AS(predict(a, f), ValidationError);

        std::mt19937_64 gen(46);
        std::uniform_real_distribution<double> u(0, 1);
        for (int k = 0; k < 100; ++k) {
            a.alpha << u(gen), u(gen), u(gen), 0, 0;
            f.values << u(gen), u(gen), u(gen), 0, 0;
            CHECK(oracle::rel_err(predict(a, f), oracle::dot({a.alpha(0), a.alpha(1), a.alpha(2)},
                                                             {f.values(0), f.values(1), f.values(2)})) < 1e-14);
        }
    }

    TEST_CASE("error report") {
        const std::vector<double> same = {1.0, 2.0, 3.0};
        CHECK(error_report(same, same).mape_pct == 0.0);

        const std::vector<double> obs = {100.0};
        const std::vector<double> pred = {87.0};
        const auto m = error_report(pred, obs);
        CHECK(m.mape_pct == doctest::Approx(13.0).epsilon(1e-14));
        CHECK(m.max_ape_pct == doctest::Approx(13.0).epsilon(1e-14));

        const std::vector<double> zero = {0.0, 1.0};
        const std::vector<double> two = {1.0, 1.0};
        CHECK_THROWS_AS(error_report(two, zero), ValidationError);
        CHECK(error_report(two, zero, false).mae == doctest::Approx(0.5));

        std::mt19937_64 gen(47);
        std::uniform_real_distribution<double> u(0.1, 10);
        std::vector<double> p(64), o(64);
        for (std::size_t i = 0; i < 64; ++i) p[i] = u(gen), o[i] = u(gen);
        double sum = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < 64; ++i) {
            const double ape = 100.0 * std::abs(p[i] - o[i]) / o[i];
            sum += ape;
            worst = std::max(worst, ape);
        }
        const auto r = error_report(p, o);
        CHECK(r.mape_pct == doctest::Approx(sum / 64).epsilon(1e-13));
        CHECK(r.max_ape_pct == worst);
        CHECK(r.per_slice_pct.size() == 64);
    }

    TEST_CASE("rolling refit tracks a coefficient change") {
        std::mt19937_64 gen(48);
        const double before[3] = {1e-5, 4e-5, 1e-4};
        const double after[3] = {1e-5, 4e-5, 2e-4};
        auto first = random_set(gen, 40, before, 0.0);
        auto second = random_set(gen, 40, after, 0.0);
        ObservationSet<double> all;
        all.columns = kThree;
        all.flows.resize(80, 3);
        all.flows << first.flows, second.flows;
        all.energy.resize(80);
        all.energy << first.energy, second.energy;

        const auto rolling = rolling_fit(all, 20, 5);
        CHECK(rolling.skipped.empty());
        for (const auto& w : rolling.windows) {
            const double g = w.fit.coefficients[Constituent::Global];
            if (w.start + 20 <= 40) CHECK(g == doctest::Approx(1e-4).epsilon(1e-9));
            if (w.start >= 40) CHECK(g == doctest::Approx(2e-4).epsilon(1e-9));
        }

        const auto whole = rolling_fit(all, 80);
        REQUIRE(whole.windows.size() == 1);
        const auto direct = fit_ls(all);
        CHECK(whole.windows[0].fit.coefficients.alpha == direct.coefficients.alpha);

        CHECK_THROWS_AS(rolling_fit(all, 81), ValidationError);
        CHECK_THROWS_AS(rolling_fit(all, 3), ValidationError);
    }

    TEST_CASE("rank-deficient windows are skipped, not fatal") {
        std::mt19937_64 gen(49);
        const double alpha[3] = {1e-5, 4e-5, 1e-4};
        auto obs = random_set(gen, 30, alpha, 0.0);
        obs.flows.block(0, 2, 10, 1).setZero();
        const auto rolling = rolling_fit(obs, 8, 1);
        CHECK_FALSE(rolling.skipped.empty());
        CHECK_FALSE(rolling.windows.empty());
        CHECK(rolling.skipped.front() == 0);
    }

    TEST_CASE("extended precision instantiation") {
        ObservationSet<long double> obs;
        obs.columns = {Constituent::Individual, Constituent::Global};
        obs.flows.resize(4, 2);
        obs.flows << 1, 0, 0, 1, 1, 1, 2, 1;
        obs.energy.resize(4);
        obs.energy << 3, 5, 8, 11;
        const auto fit = fit_ls(obs);
        CHECK(static_cast<double>(fit.coefficients[Constituent::Individual]) == doctest::Approx(3.0));
        CHECK(static_cast<double>(fit.coefficients[Constituent::Global]) == doctest::Approx(5.0));
    }
}
