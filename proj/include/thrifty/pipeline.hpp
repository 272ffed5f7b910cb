#pragma once

// End-to-end workflows behind the command-line tool: fit a trace, aggregate
// runs, and sweep scenario parameters over seeded runs.

#include <optional>
#include <string>
#include <vector>

#include "thrifty/io/config.hpp"
#include "thrifty/io/csv.hpp"
#include "thrifty/simulator.hpp"

namespace thrifty::pipeline {

struct FitOptions {
    ConstituentMask mask = three_constituent_mask();
    std::optional<Eigen::Index> window;  ///< rolling refit window, in slices
    double train_fraction = 1.0;         ///< fit on this leading share of slices, predict the rest
};

/// Fits the trace and predicts it. With train_fraction == 1 the prediction covers every slice.
io::FitReport fit_trace(const Trace& trace, const FitOptions& options);

/// Total flows and energy of a trace; alive_nodes is taken from the last slice.
SliceRecord aggregate(const Trace& trace);

struct SweepOutput {
    std::vector<std::string> keys;
    std::vector<io::SweepRow> rows;  ///< ordered by run index
};

/// Seeded runs with parameters drawn uniformly from the ranges. Requires spec.seed.
SweepOutput sweep(const sim::ScenarioConfig& base, const io::SweepSpec& spec, unsigned threads = 0);

/// Scenario of one sweep run, exactly as `sweep` executes it.
sim::ScenarioConfig sweep_scenario(const sim::ScenarioConfig& base, const io::SweepSpec& spec, int run,
                                   std::vector<double>* sampled = nullptr);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace thrifty::pipeline
