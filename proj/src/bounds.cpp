#include "stateabs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stateabs {

double eta(Family family, double gamma, std::size_t n_ground_states, std::size_t n_actions,
           const NormalizerConstants& k, double epsilon) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("eta requires gamma in [0,1)");
    }
    const double h = 1.0 - gamma;
    const double actions = static_cast<double>(n_actions);
    switch (family) {
    case Family::QStar: return 1.0 / (h * h);
    case Family::Model:
        return (1.0 + gamma * (static_cast<double>(n_ground_states) - 1.0)) / (h * h * h);
    case Family::Boltzmann:
        return (actions / h + epsilon * k.k_bolt + k.k_bolt) / (h * h);
    case Family::Multinomial: return (actions / h + k.k_mult) / (h * h);
    }
    return 0.0;
}

double loss_bound(Family family, double gamma, std::size_t n_ground_states, std::size_t n_actions,
                  const NormalizerConstants& k, double epsilon) {
    const double e = eta(family, gamma, n_ground_states, n_actions, k, epsilon);
    if (std::isinf(e)) return e;  // normalizer assumption fails; no finite bound
    return 2.0 * epsilon * e;
}

BoundReport verify(const TabularMdp& ground, const Solution& solution, const AbstractionMap& map,
                   const PredicateSpec& spec, const NormalizerConstants& k, const SolveConfig& cfg) {
    spec.check();
    if (solution.v.size() != ground.n_states()) {
        throw std::invalid_argument("solution does not belong to the ground MDP");
    }

    BoundReport report;
    report.family = spec.family;
    report.epsilon = spec.epsilon;
    report.eta = eta(spec.family, ground.gamma(), ground.n_states(), ground.n_actions(), k, spec.epsilon);
    report.bound = loss_bound(spec.family, ground.gamma(), ground.n_states(), ground.n_actions(), k, spec.epsilon);
    report.slack = solver_slack(cfg.tolerance, ground.gamma());
    report.vacuous = report.bound >= max_value(ground);

    const TabularMdp abstract = induce_abstract_mdp(ground, map);
    report.abstract_solution = solve(abstract, cfg);
    report.n_abstract = abstract.n_states();
    report.abstract_iterations = report.abstract_solution.iterations;
    report.lifted_policy = lift_policy(report.abstract_solution.policy, map);
    report.lifted_values = evaluate_policy(ground, report.lifted_policy, cfg);

    double worst = -std::numeric_limits<double>::infinity();
    for (State s = 0; s < ground.n_states(); ++s) {
        worst = std::max(worst, solution.v[s] - report.lifted_values[s]);
    }
    report.measured_max_loss = worst;
    report.satisfied = worst <= report.bound + report.slack;
    return report;
}

}  // namespace stateabs
