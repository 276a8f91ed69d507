#include "stateabs/mdp.hpp"

#include <cmath>

#include <fmt/format.h>

namespace stateabs {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string summarize(const std::vector<Violation>& violations) {
    std::string out = "invalid MDP:";
    for (const auto& v : violations) {
        out += "\n  ";
        out += v.message;
    }
    return out;
}

}  // namespace

std::vector<Violation> validate(const MdpTables& t) {
    std::vector<Violation> out;
    if (t.n_states == 0) {
        out.push_back({ViolationKind::EmptyStateSpace, "state space is empty"});
    }
    if (t.n_actions == 0) {
        out.push_back({ViolationKind::EmptyActionSpace, "action space is empty"});
    }
    if (!(t.gamma >= 0.0 && t.gamma < 1.0)) {
        out.push_back({ViolationKind::Discount, fmt::format("gamma {} outside [0,1)", t.gamma)});
    }
    if (!t.labels.empty() && t.labels.size() != t.n_states) {
        out.push_back({ViolationKind::LabelCount,
                       fmt::format("{} labels for {} states", t.labels.size(), t.n_states)});
    }
    const std::size_t n_rows = t.n_states * t.n_actions;
    if (t.rewards.size() != n_rows || t.transitions.size() != n_rows * t.n_states) {
        out.push_back({ViolationKind::TableShape,
                       fmt::format("table sizes (rewards {}, transitions {}) do not match {} states x {} actions",
                                   t.rewards.size(), t.transitions.size(), t.n_states, t.n_actions)});
        return out;
    }

    for (std::size_t s = 0; s < t.n_states; ++s) {
        for (std::size_t a = 0; a < t.n_actions; ++a) {
            const std::size_t row = s * t.n_actions + a;
            const double r = t.rewards[row];
            if (!(r >= 0.0 && r <= 1.0)) {
                out.push_back({ViolationKind::RewardRange,
                               fmt::format("reward outside [0,1] at (s={}, a={}): {}", s, a, r)});
            }
            double sum = 0.0;
            bool range_ok = true;
            for (std::size_t n = 0; n < t.n_states; ++n) {
                const double p = t.transitions[row * t.n_states + n];
                if (!(p >= 0.0 && p <= 1.0)) {
                    range_ok = false;
                }
                sum += p;
            }
            if (!range_ok) {
                out.push_back({ViolationKind::ProbabilityRange,
                               fmt::format("probability outside [0,1] in row (s={}, a={})", s, a)});
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
                out.push_back({ViolationKind::RowSum,
                               fmt::format("row sum != 1 at (s={}, a={}): {}", s, a, sum)});
            }
        }
    }
    return out;
}

InvalidMdp::InvalidMdp(std::vector<Violation> violations)
    : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}

TabularMdp::TabularMdp(MdpTables tables) : tables_(std::move(tables)) {
    if (auto violations = validate(tables_); !violations.empty()) {
        throw InvalidMdp(std::move(violations));
    }
    const std::size_t n_rows = n_states() * n_actions();
    row_start_.reserve(n_rows + 1);
    row_start_.push_back(0);
    for (std::size_t row = 0; row < n_rows; ++row) {
        const double* p = tables_.transitions.data() + row * n_states();
        for (State next = 0; next < n_states(); ++next) {
            if (p[next] > 0.0) {
                successors_.push_back({next, p[next]});
            }
        }
        row_start_.push_back(successors_.size());
    }
}

std::string TabularMdp::label(State s) const {
    return has_labels() ? tables_.labels[s] : std::to_string(s);
}

bool TabularMdp::operator==(const TabularMdp& other) const {
    const auto& a = tables_;
    const auto& b = other.tables_;
    return a.n_states == b.n_states && a.n_actions == b.n_actions && a.gamma == b.gamma &&
           a.rewards == b.rewards && a.transitions == b.transitions && a.labels == b.labels;
}

double max_value(double gamma) { return 1.0 / (1.0 - gamma); }

double max_value(const TabularMdp& mdp) { return max_value(mdp.gamma()); }

void check_policy(const TabularMdp& mdp, const Policy& policy) {
    if (policy.size() != mdp.n_states()) {
        throw std::invalid_argument(
            fmt::format("policy covers {} states, MDP has {}", policy.size(), mdp.n_states()));
    }
    for (State s = 0; s < policy.size(); ++s) {
        if (policy[s] >= mdp.n_actions()) {
            throw std::invalid_argument(
                fmt::format("policy action {} at state {} out of range", policy[s], s));
        }
    }
}

}  // namespace stateabs
