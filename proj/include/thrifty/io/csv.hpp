#pragma once

// CSV files exchanged by the command-line tools.
//
// Numbers are written in shortest round-trip decimal form, so a file read
// back reproduces the in-memory values bit for bit.

#include <iosfwd>
#include <string>
#include <vector>

#include "thrifty/estimation.hpp"
#include "thrifty/policy_opt.hpp"
#include "thrifty/trace.hpp"

namespace thrifty::io {

inline constexpr const char* kTraceHeader =
    "slice,phase,b_individual,b_local,b_global,b_environment,b_snk,energy_j,alive_nodes";

std::string format_number(double value);
double parse_number(const std::string& text);

void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

/// One row of the prediction table.
struct PredictionRow {
    long slice = 0;
    double observed_j = 0.0;
    double predicted_j = 0.0;
    double pct_error = 0.0;
};

struct WindowRow {
    Eigen::Index start = 0;
    CoefficientVector<double> coefficients;
};

/// Everything `fit` reports: coefficients, predictions and the summary line.
struct FitReport {
    FitResult<double> fit;
    std::vector<Constituent> columns;
    Vector5<double> energy_share = Vector5<double>::Zero();  ///< alpha_k * sum b_k over the trace, normalized
    std::vector<PredictionRow> predictions;
    ErrorMetrics metrics;
    Constituent dominant = Constituent::Global;
    std::vector<WindowRow> windows;             ///< rolling refits, if requested
    std::vector<Eigen::Index> skipped_windows;
};

/// Sections separated by blank lines: coefficients, predictions, summary, then rolling windows if any.
void write_report(std::ostream& out, const FitReport& report);

/// Coefficients from the first section of a report; constituents not listed are inactive.
CoefficientVector<double> read_model(std::istream& in);

/// Task list: header `id,constituent,pf_size,importance,mandatory`.
std::vector<policy::TaskDescriptor> read_tasks(std::istream& in);
void write_tasks(std::ostream& out, const std::vector<policy::TaskDescriptor>& tasks);

void write_schedule(std::ostream& out, const policy::Schedule& schedule);

/// One aggregated run of a sweep.
struct SweepRow {
    int run = 0;
    std::uint64_t seed = 0;
    std::vector<double> parameters;  ///< in SweepSpec range order
    ConstituentFlowVector<double> flows;
    double energy_j = 0.0;
    long alive_nodes = 0;
};

void write_sweep(std::ostream& out, const std::vector<std::string>& parameter_keys,
                 const std::vector<SweepRow>& rows);

}  // namespace thrifty::io
