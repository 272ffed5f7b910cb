#include "thrifty/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

#include "thrifty/errors.hpp"
#include "thrifty/rng.hpp"

namespace thrifty::pipeline {

io::FitReport fit_trace(const Trace& trace, const FitOptions& options) {
    if (!(options.train_fraction > 0.0 && options.train_fraction <= 1.0))
        throw ValidationError("train fraction must lie in (0, 1]");
    const auto all = observations_from_trace(trace, options.mask);
    const Eigen::Index m = all.rows();
    const Eigen::Index train_rows =
        options.train_fraction == 1.0 ? m : static_cast<Eigen::Index>(std::floor(options.train_fraction * m));
    const auto train = all.middle_rows(0, train_rows);

    io::FitReport report;
    report.columns = all.columns;
    report.fit = fit_ls(train);

    const Eigen::Index first = train_rows == m ? 0 : train_rows;
    if (first >= m) throw ValidationError("no slices left to predict");
    const auto test = all.middle_rows(first, m - first);
    const VectorX<double> predicted = predict_all(report.fit.coefficients, test);
    std::vector<double> pred(predicted.data(), predicted.data() + predicted.size());
    std::vector<double> obs(test.energy.data(), test.energy.data() + test.energy.size());
    report.metrics = error_report(pred, obs);
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        report.predictions.push_back({test.slice[k], obs[k], pred[k], report.metrics.per_slice_pct[k]});
    }

    Vector5<double> contribution = Vector5<double>::Zero();
    for (std::size_t j = 0; j < all.columns.size(); ++j) {
        const auto c = all.columns[j];
        contribution(static_cast<int>(index(c))) =
            report.fit.coefficients[c] * all.flows.col(static_cast<Eigen::Index>(j)).sum();
    }
    const double total = contribution.sum();
    report.energy_share = total != 0.0 ? Vector5<double>(contribution / total) : contribution;
    Eigen::Index best = 0;
    double best_share = -std::numeric_limits<double>::infinity();
    for (auto c : all.columns) {
        const double s = report.energy_share(static_cast<int>(index(c)));
        if (s > best_share) {
            best_share = s;
            best = static_cast<Eigen::Index>(index(c));
        }
    }
    report.dominant = static_cast<Constituent>(best);

    if (options.window) {
        const auto rolling = rolling_fit(all, *options.window);
        for (const auto& w : rolling.windows) report.windows.push_back({w.start, w.fit.coefficients});
        report.skipped_windows = rolling.skipped;
    }
    return report;
}

SliceRecord aggregate(const Trace& trace) {
    SliceRecord total;
    total.slice = static_cast<long>(trace.size());
    for (const auto& r : trace) {
        total.flows += r.flows;
        total.energy_j += r.energy_j;
        total.energy_by_constituent += r.energy_by_constituent;
    }
    total.alive_nodes = trace.empty() ? 0 : trace.back().alive_nodes;
    return total;
}

sim::ScenarioConfig sweep_scenario(const sim::ScenarioConfig& base, const io::SweepSpec& spec, int run,
                                   std::vector<double>* sampled) {
    if (!spec.seed) throw ValidationError("sweep requires a master seed (sweep.seed or --seed)");
    auto cfg = base;
    Rng draw(derive_seed(*spec.seed, 2 * static_cast<std::uint64_t>(run) + 1));
    for (const auto& r : spec.ranges) {
        double value = draw.uniform(r.lo, r.hi);
        if (io::is_integer_parameter(r.key)) value = static_cast<double>(std::llround(value));
        io::set_numeric_parameter(cfg, r.key, value);
        if (sampled) sampled->push_back(value);
    }
    cfg.seed = derive_seed(*spec.seed, 2 * static_cast<std::uint64_t>(run));
    return cfg;
}

SweepOutput sweep(const sim::ScenarioConfig& base, const io::SweepSpec& spec, unsigned threads) {
    if (!spec.seed) throw ValidationError("sweep requires a master seed (sweep.seed or --seed)");
    if (spec.runs < 1) throw ValidationError("sweep requires runs >= 1");
    SweepOutput out;
    for (const auto& r : spec.ranges) out.keys.push_back(r.key);

    std::vector<sim::ScenarioConfig> scenarios;
    out.rows.resize(static_cast<std::size_t>(spec.runs));
    for (int run = 0; run < spec.runs; ++run) {
        auto& row = out.rows[static_cast<std::size_t>(run)];
        scenarios.push_back(sweep_scenario(base, spec, run, &row.parameters));
        row.run = run;
        row.seed = scenarios.back().seed;
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    auto execute = [&](std::size_t k) {
        const auto totals = aggregate(sim::run(scenarios[k]).trace);
        auto& row = out.rows[k];
        row.flows = totals.flows;
        row.energy_j = totals.energy_j;
        row.alive_nodes = totals.alive_nodes;
    };
    for (std::size_t begin = 0; begin < scenarios.size(); begin += threads) {
        std::vector<std::future<void>> batch;
        const std::size_t end = std::min(scenarios.size(), begin + threads);
        for (std::size_t k = begin; k < end; ++k) batch.push_back(std::async(std::launch::async, execute, k));
        for (auto& f : batch) f.get();
    }
    return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman: need two equal-length series");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const Eigen::Map<const Eigen::VectorXd> a(rx.data(), static_cast<Eigen::Index>(rx.size()));
    const Eigen::Map<const Eigen::VectorXd> b(ry.data(), static_cast<Eigen::Index>(ry.size()));
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
    if (denom == 0.0) return 0.0;
    return ca.dot(cb) / denom;
}

}  // namespace thrifty::pipeline
