#include "stateabs/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace stateabs {

std::string_view to_string(Family family) {
    switch (family) {
    case Family::QStar: return "qstar";
    case Family::Model: return "model";
    case Family::Boltzmann: return "bolt";
    case Family::Multinomial: return "mult";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "qstar" || name == "q") return Family::QStar;
    if (name == "model") return Family::Model;
    if (name == "bolt" || name == "boltzmann") return Family::Boltzmann;
    if (name == "mult" || name == "multinomial") return Family::Multinomial;
    throw std::invalid_argument(fmt::format("unknown abstraction family '{}'", name));
}

void PredicateSpec::check() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument(fmt::format("epsilon must be a finite non-negative number, got {}", epsilon));
    }
}

// ---------------------------------------------------------------------------
// AbstractionMap

AbstractionMap::AbstractionMap(std::vector<std::size_t> phi, std::vector<double> weights)
    : phi_(std::move(phi)), weights_(std::move(weights)) {
    if (phi_.empty()) {
        throw std::invalid_argument("abstraction map over an empty state space");
    }
    if (weights_.size() != phi_.size()) {
        throw std::invalid_argument(
            fmt::format("abstraction map has {} weights for {} ground states", weights_.size(), phi_.size()));
    }
    const std::size_t k = *std::max_element(phi_.begin(), phi_.end()) + 1;
    if (k > phi_.size()) {
        throw std::invalid_argument("abstraction map is not surjective onto a contiguous index range");
    }
    members_.resize(k);
    for (State g = 0; g < phi_.size(); ++g) {
        members_[phi_[g]].push_back(g);
    }
    for (std::size_t sa = 0; sa < k; ++sa) {
        if (members_[sa].empty()) {
            throw std::invalid_argument(fmt::format("abstract state {} has no ground states", sa));
        }
        double total = 0.0;
        for (State g : members_[sa]) {
            const double w = weights_[g];
            if (!(w >= 0.0 && w <= 1.0)) {
                throw std::invalid_argument(fmt::format("weight {} of ground state {} outside [0,1]", w, g));
            }
            total += w;
        }
        if (!(std::abs(total - 1.0) <= 1e-9)) {
            throw std::invalid_argument(fmt::format("weights of abstract state {} sum to {}", sa, total));
        }
    }
}

AbstractionMap AbstractionMap::uniform(std::vector<std::size_t> phi) {
    std::vector<std::size_t> sizes;
    for (std::size_t c : phi) {
        if (c >= sizes.size()) sizes.resize(c + 1, 0);
        ++sizes[c];
    }
    std::vector<double> weights(phi.size());
    for (State g = 0; g < phi.size(); ++g) {
        weights[g] = 1.0 / static_cast<double>(sizes[phi[g]]);
    }
    return AbstractionMap(std::move(phi), std::move(weights));
}

AbstractionMap AbstractionMap::identity(std::size_t n_ground) {
    std::vector<std::size_t> phi(n_ground);
    std::iota(phi.begin(), phi.end(), std::size_t{0});
    return AbstractionMap(std::move(phi), std::vector<double>(n_ground, 1.0));
}

// ---------------------------------------------------------------------------
// Predicates

namespace {

bool rows_within(std::span<const double> x, std::span<const double> y, double epsilon) {
    for (std::size_t a = 0; a < x.size(); ++a) {
        if (!(std::abs(x[a] - y[a]) <= epsilon)) return false;
    }
    return true;
}

std::vector<double> boltzmann(std::span<const double> q) {
    // exp(q - max) / sum exp(q - max) equals the unshifted softmax and cannot overflow.
    const double top = *std::max_element(q.begin(), q.end());
    std::vector<double> p(q.size());
    double z = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
        p[a] = std::exp(q[a] - top);
        z += p[a];
    }
    for (double& x : p) x /= z;
    return p;
}

std::vector<double> multinomial(std::span<const double> q) {
    const double z = std::accumulate(q.begin(), q.end(), 0.0);
    std::vector<double> p(q.size());
    if (z == 0.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(q.size()));
        return p;
    }
    for (std::size_t a = 0; a < q.size(); ++a) p[a] = q[a] / z;
    return p;
}

bool model_compatible(double epsilon, State s1, State s2, const TabularMdp& ground,
                      std::span<const std::size_t> group_of) {
    std::vector<std::pair<std::size_t, double>> mass;
    for (Action a = 0; a < ground.n_actions(); ++a) {
        if (!(std::abs(ground.reward(s1, a) - ground.reward(s2, a)) <= epsilon)) return false;
        mass.clear();
        for (const auto& [next, p] : ground.successors(s1, a)) mass.emplace_back(group_of[next], p);
        for (const auto& [next, p] : ground.successors(s2, a)) mass.emplace_back(group_of[next], -p);
        std::sort(mass.begin(), mass.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 0; i < mass.size();) {
            double diff = 0.0;
            std::size_t j = i;
            for (; j < mass.size() && mass[j].first == mass[i].first; ++j) diff += mass[j].second;
            if (!(std::abs(diff) <= epsilon)) return false;
            i = j;
        }
    }
    return true;
}

class PredicateCache {
public:
    PredicateCache(const PredicateSpec& spec, const QTable& q) : spec_(spec) {
        if (spec.family == Family::Boltzmann || spec.family == Family::Multinomial) {
            dist_.reserve(q.n_states());
            for (State s = 0; s < q.n_states(); ++s) {
                dist_.push_back(spec.family == Family::Boltzmann ? boltzmann(q.row(s)) : multinomial(q.row(s)));
            }
        }
    }

    bool operator()(State s1, State s2, const TabularMdp& ground, const QTable& q,
                    std::span<const std::size_t> group_of) const {
        if (s1 == s2) return true;
        switch (spec_.family) {
        case Family::QStar: return rows_within(q.row(s1), q.row(s2), spec_.epsilon);
        case Family::Model: return model_compatible(spec_.epsilon, s1, s2, ground, group_of);
        case Family::Boltzmann:
        case Family::Multinomial: return rows_within(dist_[s1], dist_[s2], spec_.epsilon);
        }
        return false;
    }

private:
    PredicateSpec spec_;
    std::vector<std::vector<double>> dist_;
};

void check_q_shape(const TabularMdp& ground, const QTable& q) {
    if (q.n_states() != ground.n_states() || q.n_actions() != ground.n_actions()) {
        throw std::invalid_argument("Q table shape does not match the ground MDP");
    }
}

}  // namespace

bool compatible(const PredicateSpec& spec, State s1, State s2, const TabularMdp& ground, const QTable& q,
                std::span<const std::size_t> group_of) {
    spec.check();
    if (spec.family != Family::Model) check_q_shape(ground, q);
    if (spec.family == Family::Model && group_of.size() != ground.n_states()) {
        throw std::invalid_argument("group assignment does not cover the ground MDP");
    }
    return PredicateCache(spec, q)(s1, s2, ground, q, group_of);
}

// ---------------------------------------------------------------------------
// Greedy construction

AbstractionMap build_abstraction(const TabularMdp& ground, const QTable& q, const PredicateSpec& spec,
                                 std::span<const State> order, BuildStats* stats) {
    spec.check();
    if (spec.family != Family::Model) check_q_shape(ground, q);
    const std::size_t n = ground.n_states();
    {
        std::vector<bool> seen(n, false);
        if (order.size() != n) throw std::invalid_argument("visiting order is not a permutation of the states");
        for (State s : order) {
            if (s >= n || seen[s]) throw std::invalid_argument("visiting order is not a permutation of the states");
            seen[s] = true;
        }
    }

    const PredicateCache admits(spec, q);
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max() / 2;

    // Unvisited states sit in singleton groups kUnvisited + s until placed.
    std::vector<std::size_t> group_of(n);
    for (State s = 0; s < n; ++s) group_of[s] = kUnvisited + s;
    std::vector<std::vector<State>> clusters;

    for (State s : order) {
        std::size_t home = clusters.size();
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const bool fits = std::all_of(clusters[c].begin(), clusters[c].end(), [&](State member) {
                return admits(s, member, ground, q, group_of);
            });
            if (fits) {
                home = c;
                break;
            }
        }
        if (home == clusters.size()) clusters.emplace_back();
        clusters[home].push_back(s);
        group_of[s] = home;
    }

    BuildStats local;
    if (spec.family == Family::Model) {
        // The transition clause depends on the partition, which kept changing
        // while states were admitted; enforce it against the final one.
        bool changed = true;
        while (changed) {
            changed = false;
            ++local.recheck_rounds;
            std::vector<std::vector<State>> next;
            std::vector<State> evicted;
            for (const auto& cluster : clusters) {
                std::vector<State> kept;
                for (State s : cluster) {
                    const bool fits = std::all_of(kept.begin(), kept.end(), [&](State member) {
                        return admits(s, member, ground, q, group_of);
                    });
                    (fits ? kept : evicted).push_back(s);
                }
                next.push_back(std::move(kept));
            }
            for (State s : evicted) next.push_back({s});
            if (!evicted.empty()) {
                changed = true;
                local.recheck_splits += evicted.size();
                clusters = std::move(next);
                for (std::size_t c = 0; c < clusters.size(); ++c) {
                    for (State s : clusters[c]) group_of[s] = c;
                }
            }
        }
    }
    if (stats) *stats = local;

    std::vector<std::size_t> phi(n);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (State s : clusters[c]) phi[s] = c;
    }
    return AbstractionMap::uniform(std::move(phi));
}

// ---------------------------------------------------------------------------
// Induced MDP and lifting

TabularMdp induce_abstract_mdp(const TabularMdp& ground, const AbstractionMap& map) {
    if (map.n_ground() != ground.n_states()) {
        throw std::invalid_argument(fmt::format("abstraction map covers {} states, ground MDP has {}",
                                                map.n_ground(), ground.n_states()));
    }
    const std::size_t k = map.n_abstract();
    const std::size_t m = ground.n_actions();

    MdpTables t;
    t.n_states = k;
    t.n_actions = m;
    t.gamma = ground.gamma();
    t.rewards.assign(k * m, 0.0);
    t.transitions.assign(k * m * k, 0.0);
    t.labels.reserve(k);

    for (std::size_t sa = 0; sa < k; ++sa) {
        std::string label = "{";
        for (State g : map.members(sa)) {
            if (label.size() > 1) label += ",";
            label += ground.label(g);
        }
        t.labels.push_back(label + "}");

        for (Action a = 0; a < m; ++a) {
            double r = 0.0;
            double* row = t.transitions.data() + (sa * m + a) * k;
            for (State g : map.members(sa)) {
                const double w = map.weight(g);
                r += w * ground.reward(g, a);
                for (const auto& [next, p] : ground.successors(g, a)) {
                    row[map(next)] += w * p;
                }
            }
            // Convex combinations of values in [0,1] can land an ulp outside it.
            t.rewards[sa * m + a] = std::clamp(r, 0.0, 1.0);
            for (std::size_t n = 0; n < k; ++n) row[n] = std::min(row[n], 1.0);
        }
    }
    return TabularMdp(std::move(t));
}

Policy lift_policy(const Policy& abstract_policy, const AbstractionMap& map) {
    if (abstract_policy.size() != map.n_abstract()) {
        throw std::invalid_argument(fmt::format("abstract policy covers {} states, map has {} abstract states",
                                                abstract_policy.size(), map.n_abstract()));
    }
    Policy lifted;
    lifted.action_of.resize(map.n_ground());
    for (State g = 0; g < map.n_ground(); ++g) {
        lifted.action_of[g] = abstract_policy[map(g)];
    }
    return lifted;
}

NormalizerConstants measure_normalizer_constants(const QTable& q, const AbstractionMap& map, double epsilon) {
    if (q.n_states() != map.n_ground()) {
        throw std::invalid_argument("Q table and abstraction map disagree on the number of ground states");
    }
    // At eps = 0 any spread means no finite k exists.
    const auto scale = [epsilon](double spread) {
        if (spread == 0.0) return 0.0;
        return epsilon > 0.0 ? spread / epsilon : std::numeric_limits<double>::infinity();
    };
    NormalizerConstants k;
    // The largest pairwise gap within a cluster is its max minus its min.
    for (std::size_t sa = 0; sa < map.n_abstract(); ++sa) {
        const auto& members = map.members(sa);
        if (members.size() < 2) continue;
        double lo_mult = std::numeric_limits<double>::infinity(), hi_mult = -lo_mult;
        double lo_bolt = lo_mult, hi_bolt = hi_mult;
        for (State g : members) {
            double z_mult = 0.0, z_bolt = 0.0;
            for (double x : q.row(g)) {
                z_mult += x;
                z_bolt += std::exp(x);
            }
            lo_mult = std::min(lo_mult, z_mult);
            hi_mult = std::max(hi_mult, z_mult);
            lo_bolt = std::min(lo_bolt, z_bolt);
            hi_bolt = std::max(hi_bolt, z_bolt);
        }
        k.k_mult = std::max(k.k_mult, scale(hi_mult - lo_mult));
        k.k_bolt = std::max(k.k_bolt, scale(hi_bolt - lo_bolt));
    }
    return k;
}

}  // namespace stateabs
