#pragma once

#include <initializer_list>
#include <numeric>
#include <vector>

#include "stateabs/mdp.hpp"

namespace stateabs::testing {

/// Builds tables from nested [s][a] rewards and [s][a][s'] transitions.
inline MdpTables tables(double gamma, const std::vector<std::vector<double>>& rewards,
                        const std::vector<std::vector<std::vector<double>>>& transitions) {
    MdpTables t;
    t.n_states = rewards.size();
    t.n_actions = rewards.empty() ? 0 : rewards.front().size();
    t.gamma = gamma;
    for (const auto& r : rewards) t.rewards.insert(t.rewards.end(), r.begin(), r.end());
    for (const auto& rows : transitions) {
        for (const auto& row : rows) t.transitions.insert(t.transitions.end(), row.begin(), row.end());
    }
    return t;
}

inline TabularMdp mdp(double gamma, const std::vector<std::vector<double>>& rewards,
                      const std::vector<std::vector<std::vector<double>>>& transitions) {
    return TabularMdp(tables(gamma, rewards, transitions));
}

/// Single state, single action, self-loop.
inline TabularMdp self_loop(double reward, double gamma) { return mdp(gamma, {{reward}}, {{{1.0}}}); }

inline std::vector<State> identity_order(std::size_t n) {
    std::vector<State> order(n);
    std::iota(order.begin(), order.end(), State{0});
    return order;
}

inline QTable q_from_rows(const std::vector<std::vector<double>>& rows) {
    QTable q(rows.size(), rows.front().size());
    for (State s = 0; s < rows.size(); ++s) {
        for (Action a = 0; a < rows[s].size(); ++a) q(s, a) = rows[s][a];
    }
    return q;
}

/// Q* recovered from a value function by one exact backup.
inline QTable backup_q(const TabularMdp& m, const std::vector<double>& v) {
    QTable q(m.n_states(), m.n_actions());
    for (State s = 0; s < m.n_states(); ++s) {
        for (Action a = 0; a < m.n_actions(); ++a) {
            double e = 0.0;
            for (State n = 0; n < m.n_states(); ++n) e += m.transition(s, a, n) * v[n];
            q(s, a) = m.reward(s, a) + m.gamma() * e;
        }
    }
    return q;
}

}  // namespace stateabs::testing
