#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "stateabs/mdp.hpp"

namespace stateabs {

/// The four similarity predicates used to aggregate ground states.
enum class Family { QStar, Model, Boltzmann, Multinomial };

std::string_view to_string(Family family);
/// Accepts "qstar", "model", "bolt" / "boltzmann", "mult" / "multinomial".
Family parse_family(std::string_view name);

inline constexpr Family kAllFamilies[] = {Family::QStar, Family::Model, Family::Boltzmann, Family::Multinomial};

struct PredicateSpec {
    Family family = Family::QStar;
    double epsilon = 0.0;

    /// Throws std::invalid_argument on a negative or non-finite epsilon.
    void check() const;
};

/// Surjective state aggregation phi with convex weights omega over each
/// abstract state's constituents.
class AbstractionMap {
public:
    /// Throws std::invalid_argument unless phi is onto {0..k-1}, weights lie in
    /// [0,1] and each abstract state's weights sum to 1 within 1e-9.
    AbstractionMap(std::vector<std::size_t> phi, std::vector<double> weights);

    /// Weights 1/|G(s_A)| for every constituent.
    static AbstractionMap uniform(std::vector<std::size_t> phi);
    static AbstractionMap identity(std::size_t n_ground);

    std::size_t n_ground() const noexcept { return phi_.size(); }
    std::size_t n_abstract() const noexcept { return members_.size(); }

    std::size_t operator()(State ground) const { return phi_[ground]; }
    double weight(State ground) const { return weights_[ground]; }

    const std::vector<std::size_t>& phi() const noexcept { return phi_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Ground states aggregated into an abstract state, in ascending order.
    const std::vector<State>& members(std::size_t abstract_state) const { return members_[abstract_state]; }

private:
    std::vector<std::size_t> phi_;
    std::vector<double> weights_;
    std::vector<std::vector<State>> members_;
};

/// Optional by-products of build_abstraction.
struct BuildStats {
    /// States split into singletons by the final partition re-check (Model only).
    std::size_t recheck_splits = 0;
    std::size_t recheck_rounds = 0;
};

/// Whether s1 and s2 may share an abstract state under spec.
///
/// q must be the solved ground Q for QStar, Boltzmann and Multinomial. Model
/// compares rewards and the probability mass each state sends into every group
/// of group_of, which assigns an arbitrary group id to each ground state.
bool compatible(const PredicateSpec& spec, State s1, State s2, const TabularMdp& ground, const QTable& q,
                std::span<const std::size_t> group_of);

/// Greedy first-fit clustering in the given visiting order. A state joins the
/// earliest-created cluster whose every current member is compatible with it,
/// otherwise it founds a new cluster. Weights are uniform per cluster.
///
/// For Model, the transition clause is checked against the partition built so
/// far (unvisited states count as singletons); afterwards the final partition
/// is re-checked and offending states are split out until it is consistent.
AbstractionMap build_abstraction(const TabularMdp& ground, const QTable& q, const PredicateSpec& spec,
                                 std::span<const State> order, BuildStats* stats = nullptr);

/// Abstract MDP with R_A(s,a) = sum_g R(g,a) w(g) and
/// T_A(s,a,s') = sum_{g in G(s)} sum_{g' in G(s')} T(g,a,g') w(g).
TabularMdp induce_abstract_mdp(const TabularMdp& ground, const AbstractionMap& map);

/// pi_GA(s) = pi_A(phi(s)).
Policy lift_policy(const Policy& abstract_policy, const AbstractionMap& map);

struct NormalizerConstants {
    double k_bolt = 0.0;
    double k_mult = 0.0;
};

/// Smallest constants k with |sum_a f(Q(s1,a)) - sum_a f(Q(s2,a))| <= k eps over
/// every co-clustered pair, for f = exp (k_bolt) and f = identity (k_mult).
/// At eps = 0 a nonzero spread gives infinity.
/// Both are 0 when epsilon is 0 or no cluster has two members.
NormalizerConstants measure_normalizer_constants(const QTable& q, const AbstractionMap& map, double epsilon);

}  // namespace stateabs
