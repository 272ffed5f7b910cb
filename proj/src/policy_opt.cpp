#include "thrifty/policy_opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "thrifty/errors.hpp"

namespace thrifty::policy {

namespace {

// Frontier sizes past this switch the exact solver to the greedy fallback.
constexpr std::size_t kFrontierLimit = 1u << 21;

struct State {
    double cost = 0.0;
    double importance = 0.0;
    std::uint64_t chosen = 0;
};

double density(double importance, double cost) {
    return cost > 0.0 ? importance / cost : std::numeric_limits<double>::infinity();
}

/// Nemhauser-Ullmann: keep only (cost, importance) pairs not dominated by another subset.
std::optional<std::uint64_t> exact_selection(const std::vector<double>& costs,
                                             const std::vector<double>& importance, double fixed_cost,
                                             double battery) {
    std::vector<State> frontier{State{}};
    std::vector<State> merged;
    for (std::size_t k = 0; k < costs.size(); ++k) {
        merged.clear();
        merged.reserve(frontier.size() * 2);
        std::vector<State> extended;
        extended.reserve(frontier.size());
        for (const auto& s : frontier) {
            const double cost = s.cost + costs[k];
            if (fixed_cost + cost < battery)
                extended.push_back({cost, s.importance + importance[k], s.chosen | (std::uint64_t{1} << k)});
        }
        std::merge(frontier.begin(), frontier.end(), extended.begin(), extended.end(), std::back_inserter(merged),
                   [](const State& a, const State& b) {
                       if (a.cost != b.cost) return a.cost < b.cost;
                       return a.importance > b.importance;
                   });
        frontier.clear();
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& s : merged) {
            if (s.importance > best) {
                frontier.push_back(s);
                best = s.importance;
            }
        }
        if (frontier.size() > kFrontierLimit) return std::nullopt;
    }
    // Frontier importance increases with cost, so the last state is the optimum at least cost.
    return frontier.back().chosen;
}

std::vector<std::size_t> greedy_selection(const std::vector<double>& costs, const std::vector<double>& importance,
                                          const std::vector<int>& ids, double fixed_cost, double battery) {
    std::vector<std::size_t> idx(costs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = density(importance[a], costs[a]);
        const double db = density(importance[b], costs[b]);
        if (da != db) return da > db;
        return ids[a] < ids[b];
    });
    std::vector<std::size_t> picked;
    double spent = 0.0;
    for (auto i : idx) {
        if (fixed_cost + (spent + costs[i]) < battery) {
            spent += costs[i];
            picked.push_back(i);
        }
    }
    return picked;
}

}  // namespace

void TaskDescriptor::validate() const {
    if (pf_size < 1) throw ValidationError("task " + std::to_string(id) + ": packet flow size must be >= 1");
    if (!std::isfinite(importance) || importance <= 0.0)
        throw ValidationError("task " + std::to_string(id) + ": importance must be finite and > 0");
}

double task_cost(const TaskDescriptor& task, const CoefficientVector<double>& model) {
    task.validate();
    if (!model.is_active(task.constituent))
        throw ValidationError("task " + std::to_string(task.id) + ": constituent " +
                              std::string(name(task.constituent)) + " is not in the model");
    const double alpha = model[task.constituent];
    if (!std::isfinite(alpha)) throw ValidationError("task cost: non-finite coefficient");
    return alpha * static_cast<double>(task.pf_size);
}

ConstraintCheck check_constraints(const std::vector<TaskDescriptor>& selection,
                                  const CoefficientVector<double>& model, double battery) {
    Vector5<double> e = Vector5<double>::Zero();
    for (const auto& t : selection) e(static_cast<int>(index(t.constituent))) += task_cost(t, model);
    ConstraintCheck c;
    c.local_positive = e(static_cast<int>(index(Constituent::Local))) > 0.0;
    c.global_positive = e(static_cast<int>(index(Constituent::Global))) > 0.0;
    const double budgeted = e(static_cast<int>(index(Constituent::Individual))) +
                            e(static_cast<int>(index(Constituent::Local))) +
                            e(static_cast<int>(index(Constituent::Global))) +
                            e(static_cast<int>(index(Constituent::Sink)));
    c.within_budget = budgeted < battery;
    return c;
}

Schedule select_tasks(const BudgetProblem& problem) {
    if (std::isnan(problem.battery) || problem.battery < 0.0)
        throw ValidationError("select_tasks: battery must be >= 0");
    problem.model.validate();

    Schedule out;
    out.battery = problem.battery;

    std::vector<TaskDescriptor> mandatory;
    std::vector<TaskDescriptor> optional;
    for (const auto& t : problem.tasks) (t.mandatory ? mandatory : optional).push_back(t);
    auto by_id = [](const TaskDescriptor& a, const TaskDescriptor& b) { return a.id < b.id; };
    std::sort(mandatory.begin(), mandatory.end(), by_id);
    std::sort(optional.begin(), optional.end(), by_id);

    for (const auto& t : problem.tasks) {
        if (task_cost(t, problem.model) < 0.0)
            throw ValidationError("task " + std::to_string(t.id) + " has negative cost; model coefficient for " +
                                  std::string(name(t.constituent)) + " is below zero");
    }

    double fixed = 0.0;
    bool mandatory_local = false;
    bool mandatory_global = false;
    for (const auto& t : mandatory) {
        const double c = task_cost(t, problem.model);
        fixed += c;
        mandatory_local |= t.constituent == Constituent::Local && c > 0.0;
        mandatory_global |= t.constituent == Constituent::Global && c > 0.0;
    }
    out.total_energy = fixed;
    out.slack = problem.battery - fixed;

    if (problem.require_local && !mandatory_local) {
        out.infeasible_reason = "constraint 1 (E_local > 0): no mandatory local task with positive cost";
        return out;
    }
    if (problem.require_global && !mandatory_global) {
        out.infeasible_reason = "constraint 2 (E_global > 0): no mandatory global task with positive cost";
        return out;
    }
    if (!(fixed < problem.battery)) {
        out.infeasible_reason = "constraint 3 (energy < battery): mandatory tasks need " + std::to_string(fixed) +
                                " J of " + std::to_string(problem.battery) + " J";
        return out;
    }

    std::vector<double> costs;
    std::vector<double> importance;
    std::vector<int> ids;
    for (const auto& t : optional) {
        costs.push_back(task_cost(t, problem.model));
        importance.push_back(t.importance);
        ids.push_back(t.id);
    }

    std::vector<std::size_t> picked;
    std::optional<std::uint64_t> exact;
    if (optional.size() <= kExactTaskLimit) exact = exact_selection(costs, importance, fixed, problem.battery);
    if (exact) {
        out.method = Method::Exact;
        for (std::size_t k = 0; k < optional.size(); ++k)
            if (*exact >> k & 1u) picked.push_back(k);
    } else {
        out.method = Method::Greedy;
        picked = greedy_selection(costs, importance, ids, fixed, problem.battery);
    }

    double optional_cost = 0.0;
    std::vector<TaskDescriptor> selection = mandatory;
    for (auto k : picked) {
        optional_cost += costs[k];
        selection.push_back(optional[k]);
    }

    for (const auto& t : selection) {
        const double c = task_cost(t, problem.model);
        out.order.push_back({t, c});
        out.energy_by_constituent(static_cast<int>(index(t.constituent))) += c;
        out.total_importance += t.importance;
    }
    std::sort(out.order.begin(), out.order.end(), [](const ScheduledTask& a, const ScheduledTask& b) {
        const double da = density(a.task.importance, a.cost);
        const double db = density(b.task.importance, b.cost);
        if (da != db) return da > db;
        return a.task.id < b.task.id;
    });

    out.total_energy = fixed + optional_cost;
    out.slack = problem.battery - out.total_energy;
    out.constraints = check_constraints(selection, problem.model, problem.battery);
    out.feasible = true;
    return out;
}

}  // namespace thrifty::policy
