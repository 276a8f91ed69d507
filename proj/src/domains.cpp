#include "stateabs/domains.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace stateabs {

namespace {

class TableBuilder {
public:
    TableBuilder(std::size_t n_states, std::size_t n_actions, double gamma) {
        t_.n_states = n_states;
        t_.n_actions = n_actions;
        t_.gamma = gamma;
        t_.rewards.assign(n_states * n_actions, 0.0);
        t_.transitions.assign(n_states * n_actions * n_states, 0.0);
    }

    /// Adds an outcome of (s,a): probability p of reaching next while earning r.
    void outcome(State s, Action a, State next, double p, double r) {
        t_.transitions[(s * t_.n_actions + a) * t_.n_states + next] += p;
        t_.rewards[s * t_.n_actions + a] += p * r;
    }

    void labels(std::vector<std::string> labels) { t_.labels = std::move(labels); }

    TabularMdp build() && { return TabularMdp(std::move(t_)); }

private:
    MdpTables t_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_probability(double p, const char* name) {
    require(p >= 0.0 && p <= 1.0, fmt::format("{} must lie in [0,1], got {}", name, p));
}

void require_gamma(double gamma) {
    require(gamma >= 0.0 && gamma < 1.0, fmt::format("gamma must lie in [0,1), got {}", gamma));
}

std::string fmt_double(double x) { return fmt::format("{}", x); }

}  // namespace

// ---------------------------------------------------------------------------

DomainInstance nchain(const NChainParams& p) {
    using namespace nchain_actions;
    require(p.n >= 2, fmt::format("nchain needs at least 2 states, got {}", p.n));
    require_probability(p.slip, "slip");
    require_probability(p.small_reward, "small_reward");
    require_probability(p.goal_reward, "goal_reward");
    require_gamma(p.gamma);

    const State last = p.n - 1;
    TableBuilder b(p.n, 2, p.gamma);
    for (State s = 0; s < p.n; ++s) {
        const State ahead = std::min(s + 1, last);
        const double ahead_reward = ahead == last ? p.goal_reward : 0.0;
        b.outcome(s, kAdvance, ahead, 1.0 - p.slip, ahead_reward);
        b.outcome(s, kAdvance, 0, p.slip, p.small_reward);
        b.outcome(s, kReturn, 0, 1.0 - p.slip, p.small_reward);
        b.outcome(s, kReturn, ahead, p.slip, ahead_reward);
    }
    return DomainInstance{std::move(b).build(),
                          0,
                          "nchain",
                          {{"n", std::to_string(p.n)},
                           {"slip", fmt_double(p.slip)},
                           {"small_reward", fmt_double(p.small_reward)},
                           {"goal_reward", fmt_double(p.goal_reward)},
                           {"goal_reward_timing", "on entering the last state"},
                           {"gamma", fmt_double(p.gamma)}}};
}

// ---------------------------------------------------------------------------

DomainInstance upworld(const UpworldParams& p) {
    using namespace upworld_actions;
    require(p.rows >= 1 && p.cols >= 1, fmt::format("upworld needs a non-empty grid, got {}x{}", p.rows, p.cols));
    require_gamma(p.gamma);

    const auto index = [&](std::size_t r, std::size_t c) { return r * p.cols + c; };
    const std::size_t top = p.rows - 1;
    TableBuilder b(p.rows * p.cols, 3, p.gamma);
    for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) {
            const State s = index(r, c);
            const double reward = r == top ? 1.0 : 0.0;
            const std::size_t up_row = std::min(r + 1, top);
            b.outcome(s, kUp, index(up_row, c), 1.0, up_row == top ? 1.0 : 0.0);
            b.outcome(s, kLeft, index(r, c == 0 ? 0 : c - 1), 1.0, reward);
            b.outcome(s, kRight, index(r, std::min(c + 1, p.cols - 1)), 1.0, reward);
        }
    }
    return DomainInstance{std::move(b).build(),
                          index(0, 0),
                          "upworld",
                          {{"rows", std::to_string(p.rows)},
                           {"cols", std::to_string(p.cols)},
                           {"gamma", fmt_double(p.gamma)}}};
}

// ---------------------------------------------------------------------------

namespace {

// Passenger location codes beyond the depot indices.
struct TaxiLayout {
    std::size_t n_depots;
    std::size_t in_taxi() const { return n_depots; }
    std::size_t delivered() const { return n_depots + 1; }
};

struct TaxiState {
    std::size_t x = 0, y = 0;
    std::vector<std::size_t> loc;   // per passenger
    std::vector<std::size_t> dest;  // per passenger

    auto operator<=>(const TaxiState&) const = default;
};

}  // namespace

DomainInstance taxi(const TaxiParams& p) {
    using namespace taxi_actions;
    require(p.width >= 1 && p.height >= 1, "taxi grid must be non-empty");
    require(!p.depots.empty(), "taxi needs at least one depot");
    require(p.n_passengers >= 1, "taxi needs at least one passenger");
    require(p.start.x < p.width && p.start.y < p.height, "taxi start cell is off the grid");
    for (std::size_t i = 0; i < p.depots.size(); ++i) {
        require(p.depots[i].x < p.width && p.depots[i].y < p.height,
                fmt::format("depot {} is off the grid", i));
        for (std::size_t j = 0; j < i; ++j) {
            require(!(p.depots[i] == p.depots[j]), fmt::format("depots {} and {} share a cell", j, i));
        }
    }
    require_gamma(p.gamma);

    const TaxiLayout layout{p.depots.size()};
    const std::size_t n_pass = p.n_passengers;
    const std::size_t n_dep = p.depots.size();

    // Enumerate every non-goal configuration: at most one passenger aboard, not
    // all delivered, delivered passengers' destinations fixed to depot 0.
    std::vector<TaxiState> states;
    {
        std::vector<std::size_t> code(2 * n_pass, 0);
        const std::size_t loc_choices = n_dep + 2;
        for (;;) {
            TaxiState ps;
            ps.loc.assign(code.begin(), code.begin() + n_pass);
            ps.dest.assign(code.begin() + n_pass, code.end());
            const auto aboard = std::count(ps.loc.begin(), ps.loc.end(), layout.in_taxi());
            const auto done = std::count(ps.loc.begin(), ps.loc.end(), layout.delivered());
            bool canonical = true;
            for (std::size_t i = 0; i < n_pass; ++i) {
                if (ps.loc[i] == layout.delivered() && ps.dest[i] != 0) canonical = false;
            }
            if (aboard <= 1 && static_cast<std::size_t>(done) < n_pass && canonical) {
                for (std::size_t y = 0; y < p.height; ++y) {
                    for (std::size_t x = 0; x < p.width; ++x) {
                        TaxiState s = ps;
                        s.x = x;
                        s.y = y;
                        states.push_back(std::move(s));
                        if (states.size() + 1 > kMaxTaxiStates) {
                            throw std::invalid_argument(fmt::format(
                                "taxi instance exceeds {} states; reduce the grid, depots or passengers",
                                kMaxTaxiStates));
                        }
                    }
                }
            }
            // Odometer increment: locations range over depots+2, destinations over depots.
            std::size_t i = 0;
            for (; i < code.size(); ++i) {
                const std::size_t limit = i < n_pass ? loc_choices : n_dep;
                if (++code[i] < limit) break;
                code[i] = 0;
            }
            if (i == code.size()) break;
        }
    }
    std::sort(states.begin(), states.end());
    const State goal = states.size();
    const std::size_t n_states = states.size() + 1;

    const auto find = [&](const TaxiState& s) -> State {
        const auto it = std::lower_bound(states.begin(), states.end(), s);
        return static_cast<State>(it - states.begin());
    };
    const auto depot_at = [&](std::size_t x, std::size_t y) -> std::size_t {
        for (std::size_t d = 0; d < n_dep; ++d) {
            if (p.depots[d].x == x && p.depots[d].y == y) return d;
        }
        return n_dep;
    };

    TableBuilder b(n_states, 6, p.gamma);
    std::vector<std::string> labels;
    labels.reserve(n_states);
    for (State s = 0; s < states.size(); ++s) {
        const TaxiState& cur = states[s];
        std::string label = fmt::format("({},{})", cur.x, cur.y);
        for (std::size_t i = 0; i < n_pass; ++i) {
            const std::size_t l = cur.loc[i];
            const std::string where = l == layout.in_taxi() ? "T" : l == layout.delivered() ? "X" : std::to_string(l);
            label += fmt::format(" p{}:{}>{}", i, where, cur.dest[i]);
        }
        labels.push_back(std::move(label));

        const auto move = [&](Action a, long dx, long dy) {
            TaxiState next = cur;
            const long nx = static_cast<long>(cur.x) + dx;
            const long ny = static_cast<long>(cur.y) + dy;
            if (nx >= 0 && ny >= 0 && nx < static_cast<long>(p.width) && ny < static_cast<long>(p.height)) {
                next.x = static_cast<std::size_t>(nx);
                next.y = static_cast<std::size_t>(ny);
            }
            b.outcome(s, a, find(next), 1.0, 0.0);
        };
        move(kNorth, 0, 1);
        move(kSouth, 0, -1);
        move(kEast, 1, 0);
        move(kWest, -1, 0);

        const std::size_t here = depot_at(cur.x, cur.y);
        const bool occupied = std::find(cur.loc.begin(), cur.loc.end(), layout.in_taxi()) != cur.loc.end();

        TaxiState picked = cur;
        if (!occupied && here < n_dep) {
            for (std::size_t i = 0; i < n_pass; ++i) {
                if (picked.loc[i] == here) {
                    picked.loc[i] = layout.in_taxi();
                    break;
                }
            }
        }
        b.outcome(s, kPickup, find(picked), 1.0, 0.0);

        TaxiState dropped = cur;
        bool completed = false;
        for (std::size_t i = 0; i < n_pass; ++i) {
            if (dropped.loc[i] == layout.in_taxi() && dropped.dest[i] == here) {
                dropped.loc[i] = layout.delivered();
                dropped.dest[i] = 0;
                completed = std::count(dropped.loc.begin(), dropped.loc.end(), layout.delivered()) ==
                            static_cast<long>(n_pass);
                break;
            }
        }
        if (completed) {
            b.outcome(s, kDropoff, goal, 1.0, 1.0);
        } else {
            b.outcome(s, kDropoff, find(dropped), 1.0, 0.0);
        }
    }
    for (Action a = 0; a < 6; ++a) b.outcome(goal, a, goal, 1.0, 0.0);
    labels.push_back("goal");
    b.labels(std::move(labels));

    TaxiState start;
    start.x = p.start.x;
    start.y = p.start.y;
    for (std::size_t i = 0; i < n_pass; ++i) {
        start.loc.push_back(i % n_dep);
        start.dest.push_back((i + 1) % n_dep);
    }

    std::string depot_list;
    for (const Cell& c : p.depots) depot_list += fmt::format("{}({},{})", depot_list.empty() ? "" : " ", c.x, c.y);
    return DomainInstance{std::move(b).build(),
                          find(start),
                          "taxi",
                          {{"width", std::to_string(p.width)},
                           {"height", std::to_string(p.height)},
                           {"depots", depot_list},
                           {"n_passengers", std::to_string(p.n_passengers)},
                           {"start", fmt::format("({},{})", p.start.x, p.start.y)},
                           {"n_states", std::to_string(n_states)},
                           {"gamma", fmt_double(p.gamma)}}};
}

// ---------------------------------------------------------------------------

std::vector<State> minefield_mines(const MinefieldParams& p) {
    const std::size_t cells = p.rows * p.cols;
    require(p.n_mines <= cells, fmt::format("{} mines do not fit in {} cells", p.n_mines, cells));
    std::mt19937_64 rng(p.seed);
    std::vector<State> pool(cells);
    for (State s = 0; s < cells; ++s) pool[s] = s;
    // Partial Fisher-Yates: the first n_mines entries are a uniform sample.
    for (std::size_t i = 0; i < p.n_mines; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(p.n_mines);
    std::sort(pool.begin(), pool.end());
    return pool;
}

DomainInstance minefield(const MinefieldParams& p) {
    using namespace minefield_actions;
    require(p.rows >= 1 && p.cols >= 1, "minefield grid must be non-empty");
    require_probability(p.slip, "slip");
    require_gamma(p.gamma);
    const auto mines = minefield_mines(p);

    const std::size_t n = p.rows * p.cols;
    const std::size_t top = p.rows - 1;
    std::vector<bool> is_mine(n, false);
    for (State m : mines) is_mine[m] = true;

    struct Step {
        long dr, dc;
    };
    const Step steps[4] = {{1, 0}, {-1, 0}, {0, -1}, {0, 1}};
    const Action perpendicular[4][2] = {{kLeft, kRight}, {kLeft, kRight}, {kUp, kDown}, {kUp, kDown}};

    TableBuilder b(n, 4, p.gamma);
    for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) {
            const State s = r * p.cols + c;
            const auto resolve = [&](Action dir, double prob, Action a) {
                if (prob <= 0.0) return;
                const long nr = static_cast<long>(r) + steps[dir].dr;
                const long nc = static_cast<long>(c) + steps[dir].dc;
                State next = s;
                if (nr >= 0 && nc >= 0 && nr < static_cast<long>(p.rows) && nc < static_cast<long>(p.cols)) {
                    next = static_cast<State>(nr) * p.cols + static_cast<State>(nc);
                }
                double reward = 0.2;
                if (dir == kUp && r == top) {
                    reward = 1.0;
                } else if (is_mine[next]) {
                    reward = 0.0;
                }
                b.outcome(s, a, next, prob, reward);
            };
            for (Action a = 0; a < 4; ++a) {
                resolve(a, 1.0 - p.slip, a);
                resolve(perpendicular[a][0], p.slip / 2.0, a);
                resolve(perpendicular[a][1], p.slip / 2.0, a);
            }
        }
    }

    std::string mine_list;
    for (State m : mines) mine_list += fmt::format("{}{}", mine_list.empty() ? "" : " ", m);
    return DomainInstance{std::move(b).build(),
                          0,
                          "minefield",
                          {{"rows", std::to_string(p.rows)},
                           {"cols", std::to_string(p.cols)},
                           {"n_mines", std::to_string(p.n_mines)},
                           {"mines", mine_list},
                           {"slip", fmt_double(p.slip)},
                           {"seed", std::to_string(p.seed)},
                           {"gamma", fmt_double(p.gamma)}}};
}

// ---------------------------------------------------------------------------

DomainInstance random_mdp(const RandomMdpParams& p) {
    require(p.n_states >= 2, fmt::format("random MDP needs at least 2 states, got {}", p.n_states));
    require(p.n_actions >= 1, "random MDP needs at least one action");
    require_gamma(p.gamma);

    std::mt19937_64 rng(p.seed);
    std::uniform_int_distribution<State> first(0, p.n_states - 1);
    std::uniform_int_distribution<State> other(0, p.n_states - 2);
    std::uniform_real_distribution<double> reward(0.0, 1.0);

    MdpTables t;
    t.n_states = p.n_states;
    t.n_actions = p.n_actions;
    t.gamma = p.gamma;
    t.rewards.assign(p.n_states * p.n_actions, 0.0);
    t.transitions.assign(p.n_states * p.n_actions * p.n_states, 0.0);
    for (State s = 0; s < p.n_states; ++s) {
        for (Action a = 0; a < p.n_actions; ++a) {
            const State x = first(rng);
            State y = other(rng);
            if (y >= x) ++y;  // uniform over the states distinct from x
            double* row = t.transitions.data() + (s * p.n_actions + a) * p.n_states;
            row[x] = 0.5;
            row[y] = 0.5;
            t.rewards[s * p.n_actions + a] = reward(rng);
        }
    }
    return DomainInstance{TabularMdp(std::move(t)),
                          0,
                          "random",
                          {{"n_states", std::to_string(p.n_states)},
                           {"n_actions", std::to_string(p.n_actions)},
                           {"reward_distribution", "uniform[0,1)"},
                           {"seed", std::to_string(p.seed)},
                           {"gamma", fmt_double(p.gamma)}}};
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& domain_names() {
    static const std::vector<std::string> names = {"nchain", "upworld", "taxi", "minefield", "random"};
    return names;
}

DomainInstance make_domain(const std::string& name, std::uint64_t seed) {
    if (name == "nchain") return nchain();
    if (name == "upworld") return upworld();
    if (name == "taxi") return taxi();
    if (name == "minefield") {
        MinefieldParams p;
        p.seed = seed;
        return minefield(p);
    }
    if (name == "random") {
        RandomMdpParams p;
        p.seed = seed;
        return random_mdp(p);
    }
    throw std::invalid_argument(fmt::format("unknown domain '{}'", name));
}

}  // namespace stateabs
