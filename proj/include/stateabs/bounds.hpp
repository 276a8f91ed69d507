#pragma once

#include <cstddef>

#include "stateabs/abstraction.hpp"
#include "stateabs/solver.hpp"

namespace stateabs {

/// Family-specific factor eta_f of the value-loss bound 2 eps eta_f:
///
///   QStar        1 / (1-g)^2
///   Model        (1 + g (|S|-1)) / (1-g)^3
///   Boltzmann    (|A|/(1-g) + eps k_bolt + k_bolt) / (1-g)^2
///   Multinomial  (|A|/(1-g) + k_mult) / (1-g)^2
double eta(Family family, double gamma, std::size_t n_ground_states, std::size_t n_actions,
           const NormalizerConstants& k, double epsilon);

/// 2 eps eta_f.
double loss_bound(Family family, double gamma, std::size_t n_ground_states, std::size_t n_actions,
                  const NormalizerConstants& k, double epsilon);

struct BoundReport {
    Family family = Family::QStar;
    double epsilon = 0.0;
    double eta = 0.0;
    double bound = 0.0;
    double measured_max_loss = 0.0;  ///< max_s V*(s) - V^{pi_GA}(s)
    double slack = 0.0;
    bool satisfied = false;
    bool vacuous = false;  ///< bound >= 1/(1-gamma)

    std::size_t n_abstract = 0;
    std::size_t abstract_iterations = 0;
    Solution abstract_solution;
    Policy lifted_policy;
    ValueTable lifted_values;
};

/// Solves the induced abstract MDP, lifts its optimal policy, evaluates it in
/// the ground MDP and compares the worst-state loss with 2 eps eta_f.
/// Propagates SolverError.
BoundReport verify(const TabularMdp& ground, const Solution& solution, const AbstractionMap& map,
                   const PredicateSpec& spec, const NormalizerConstants& k, const SolveConfig& cfg = {});

}  // namespace stateabs
