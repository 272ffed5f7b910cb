// Command-line front end: simulate, fit, sweep, budget.
//
// Exit status: 0 on success, 1 on invalid input or configuration, 2 when the
// data is rank deficient / singular or the budget problem is infeasible.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "thrifty/errors.hpp"
#include "thrifty/io/config.hpp"
#include "thrifty/io/csv.hpp"
#include "thrifty/pipeline.hpp"
#include "thrifty/policy_opt.hpp"
#include "thrifty/simulator.hpp"

namespace {

using namespace thrifty;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    return in;
}

ConstituentMask parse_mask(const std::string& text) {
    ConstituentMask mask;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        auto c = parse_constituent(item);
        if (!c) throw ValidationError("unknown constituent \"" + item + "\" in --mask");
        mask.set(index(*c));
    }
    if (mask.none()) throw ValidationError("--mask selects no constituents");
    return mask;
}

struct SimulateArgs {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a) {
    auto loaded = io::load_config(a.config);
    if (a.seed) loaded.scenario.seed = *a.seed;
    const auto result = sim::run(loaded.scenario);
    auto out = open_output(a.output);
    io::write_trace(out, result.trace);
    const auto totals = pipeline::aggregate(result.trace);
    std::cout << "seed " << loaded.scenario.seed << '\n'
              << "slices " << result.trace.size() << ", alive nodes " << totals.alive_nodes << " of "
              << loaded.scenario.node_count << '\n'
              << "energy_j " << io::format_number(totals.energy_j) << '\n';
    for (auto c : kAllConstituents) std::cout << column_name(c) << ' ' << io::format_number(totals.flows[c]) << '\n';
    std::cout << "delivered " << result.delivered << ", dropped " << result.drops.total() << '\n';
    return kExitOk;
}

struct FitArgs {
    std::string input;
    std::string output;
    std::string mask = "individual,local,global";
    long window = 0;
    double train_fraction = 1.0;
};

int cmd_fit(const FitArgs& a) {
    auto in = open_input(a.input);
    const auto trace = io::read_trace(in);
    pipeline::FitOptions options;
    options.mask = parse_mask(a.mask);
    options.train_fraction = a.train_fraction;
    if (a.window > 0) options.window = a.window;
    const auto report = pipeline::fit_trace(trace, options);
    auto out = open_output(a.output);
    io::write_report(out, report);
    for (auto c : report.fit.negative)
        std::cerr << "warning: fitted coefficient for " << name(c) << " is negative\n";
    std::cout << "mape_pct " << io::format_number(report.metrics.mape_pct) << '\n'
              << "dominant " << name(report.dominant) << '\n';
    return kExitOk;
}

struct SweepArgs {
    std::string config;
    std::string output;
    int runs = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a) {
    auto loaded = io::load_config(a.config);
    auto spec = loaded.sweep;
    if (a.runs > 0) spec.runs = a.runs;
    if (a.seed) spec.seed = a.seed;
    if (!spec.seed) throw ValidationError("sweep needs a master seed: set sweep.seed or pass --seed");
    if (spec.runs < 1) throw ValidationError("sweep needs runs >= 1: set sweep.runs or pass --runs");
    const auto result = pipeline::sweep(loaded.scenario, spec, a.threads);
    auto out = open_output(a.output);
    io::write_sweep(out, result.keys, result.rows);
    std::cout << "seed " << *spec.seed << "\nruns " << result.rows.size() << '\n';
    return kExitOk;
}

struct BudgetArgs {
    std::string tasks;
    std::string model;
    std::string output;
    double battery = 0.0;
    bool require_local = false;
    bool require_global = false;
};

int cmd_budget(const BudgetArgs& a) {
    auto task_in = open_input(a.tasks);
    auto model_in = open_input(a.model);
    policy::BudgetProblem problem;
    problem.tasks = io::read_tasks(task_in);
    problem.model = io::read_model(model_in);
    problem.battery = a.battery;
    problem.require_local = a.require_local;
    problem.require_global = a.require_global;
    const auto schedule = policy::select_tasks(problem);
    auto out = open_output(a.output);
    io::write_schedule(out, schedule);
    if (!schedule.feasible) {
        std::cerr << "infeasible: " << *schedule.infeasible_reason << '\n';
        return kExitNumerical;
    }
    std::cout << "scheduled " << schedule.order.size() << " tasks, " << io::format_number(schedule.total_energy)
              << " J of " << io::format_number(schedule.battery) << " J\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task-based sensor energy simulator and modeling toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its slice trace");
    simulate->add_option("-c,--config", sim_args.config, "Scenario configuration file")->required();
    simulate->add_option("-o,--output", sim_args.output, "Trace CSV to write")->required();
    simulate->add_option("--seed", sim_args.seed, "Override the scenario seed");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit constituent coefficients to a trace");
    fit->add_option("-i,--input", fit_args.input, "Trace CSV")->required();
    fit->add_option("-o,--output", fit_args.output, "Report CSV to write")->required();
    fit->add_option("--mask", fit_args.mask, "Comma-separated active constituents")->capture_default_str();
    fit->add_option("--window", fit_args.window, "Rolling refit window in slices (0 = off)");
    fit->add_option("--train-fraction", fit_args.train_fraction,
                    "Fit on this leading share of slices and predict the rest")
        ->capture_default_str();
    std::optional<std::uint64_t> unused_seed;
    fit->add_option("--seed", unused_seed, "Accepted for symmetry; fitting is deterministic");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Run seeded scenarios over parameter ranges");
    sweep->add_option("-c,--config", sweep_args.config, "Scenario configuration with [sweep.ranges]")->required();
    sweep->add_option("-o,--output", sweep_args.output, "Observation CSV to write")->required();
    sweep->add_option("--runs", sweep_args.runs, "Number of runs (overrides sweep.runs)");
    sweep->add_option("--seed", sweep_args.seed, "Master seed (overrides sweep.seed)");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware)");

    BudgetArgs budget_args;
    auto* budget = app.add_subcommand("budget", "Select tasks under a residual-battery budget");
    budget->add_option("-i,--input,--tasks", budget_args.tasks, "Task list CSV")->required();
    budget->add_option("-m,--model", budget_args.model, "Report CSV produced by fit")->required();
    budget->add_option("-b,--battery", budget_args.battery, "Residual battery in joules")->required();
    budget->add_option("-o,--output", budget_args.output, "Schedule CSV to write")->required();
    budget->add_flag("--require-local", budget_args.require_local, "Enforce E_local > 0");
    budget->add_flag("--require-global", budget_args.require_global, "Enforce E_global > 0");
    std::optional<std::uint64_t> unused_budget_seed;
    budget->add_option("--seed", unused_budget_seed, "Accepted for symmetry; selection is deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*simulate) return cmd_simulate(sim_args);
        if (*fit) return cmd_fit(fit_args);
        if (*sweep) return cmd_sweep(sweep_args);
        if (*budget) return cmd_budget(budget_args);
    } catch (const RankDeficientError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const SingularityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
