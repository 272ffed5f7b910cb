#pragma once

// Task selection under a residual-battery budget.
//
// Mandatory tasks are always scheduled. Optional tasks are chosen to maximize
// total importance while the whole schedule costs strictly less than the
// battery, then everything is ordered by importance per joule.

#include <optional>
#include <string>
#include <vector>

#include "thrifty/energy_core.hpp"

namespace thrifty::policy {

/// Largest optional-task count solved exactly; larger instances fall back to a greedy heuristic.
inline constexpr std::size_t kExactTaskLimit = 64;

struct TaskDescriptor {
    int id = 0;
    Constituent constituent = Constituent::Individual;
    long pf_size = 1;  ///< packets the task generates
    double importance = 1.0;
    bool mandatory = false;

    void validate() const;
};

struct BudgetProblem {
    std::vector<TaskDescriptor> tasks;
    CoefficientVector<double> model;
    double battery = 0.0;  ///< residual energy, joules
    bool require_local = false;   ///< enforce E_local > 0
    bool require_global = false;  ///< enforce E_global > 0
};

/// E_local > 0, E_global > 0 and E_individual + E_local + E_global + E_snk < battery.
struct ConstraintCheck {
    bool local_positive = false;
    bool global_positive = false;
    bool within_budget = false;

    bool all() const { return local_positive && global_positive && within_budget; }
};

enum class Method { Exact, Greedy };

struct ScheduledTask {
    TaskDescriptor task;
    double cost = 0.0;
};

struct Schedule {
    bool feasible = false;
    Method method = Method::Exact;
    std::vector<ScheduledTask> order;
    Vector5<double> energy_by_constituent = Vector5<double>::Zero();
    double total_energy = 0.0;  ///< reported objective: energy of the whole schedule
    double total_importance = 0.0;
    double battery = 0.0;
    double slack = 0.0;  ///< battery - total_energy
    ConstraintCheck constraints;
    std::optional<std::string> infeasible_reason;
};

/// alpha of the task's constituent times its packet flow.
double task_cost(const TaskDescriptor& task, const CoefficientVector<double>& model);

ConstraintCheck check_constraints(const std::vector<TaskDescriptor>& selection,
                                  const CoefficientVector<double>& model, double battery);

Schedule select_tasks(const BudgetProblem& problem);

}  // namespace thrifty::policy
