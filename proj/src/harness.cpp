#include "stateabs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "stateabs/bounds.hpp"

namespace stateabs {

void SweepConfig::check() const {
    if (epsilon_grid.empty()) throw std::invalid_argument("epsilon grid is empty");
    for (double e : epsilon_grid) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            throw std::invalid_argument(fmt::format("epsilon grid holds an invalid value {}", e));
        }
    }
    if (n_trials < 1) throw std::invalid_argument("a sweep needs at least one trial per epsilon");
    solver.check();
}

bool SweepResult::all_satisfied() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.satisfied; });
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t epsilon_index, std::size_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(epsilon_index));
    return splitmix64(h ^ (static_cast<std::uint64_t>(trial) << 1 | 1ULL));
}

std::vector<State> random_order(std::size_t n, std::uint64_t seed) {
    std::vector<State> order(n);
    std::iota(order.begin(), order.end(), State{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

std::vector<double> default_epsilon_grid(const std::string& domain) {
    const bool taxi = domain == "taxi";
    const double step = taxi ? 0.0025 : 0.05;
    const std::size_t points = 21;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) * step;
    return grid;
}

std::size_t default_trials(const std::string& domain) {
    return domain == "taxi" || domain == "random" ? 200 : 20;
}

std::size_t worker_count(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STATEABS_WORKERS")) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepConfig& cfg) {
    return run_sweep(make_domain(cfg.domain, cfg.domain_seed), cfg);
}

SweepResult run_sweep(const DomainInstance& domain, const SweepConfig& cfg) {
    cfg.check();
    const TabularMdp& ground = domain.mdp;
    const Solution solution = solve(ground, cfg.solver);

    SweepResult result;
    result.domain = domain.name;
    result.family = cfg.family;
    result.n_ground = ground.n_states();
    result.gamma = ground.gamma();
    result.tolerance = cfg.solver.tolerance;
    result.ground_iterations = solution.iterations;

    const std::size_t n_jobs = cfg.epsilon_grid.size() * cfg.n_trials;
    result.rows.resize(n_jobs);

    auto run_one = [&](std::size_t job) {
        SweepRow& row = result.rows[job];
        row.epsilon_index = job / cfg.n_trials;
        row.trial = job % cfg.n_trials;
        row.epsilon = cfg.epsilon_grid[row.epsilon_index];
        row.order_seed = trial_seed(cfg.seed, row.epsilon_index, row.trial);
        row.v_opt_init = solution.v[domain.initial_state];
        try {
            const PredicateSpec spec{cfg.family, row.epsilon};
            const auto order = random_order(ground.n_states(), row.order_seed);
            const AbstractionMap map = build_abstraction(ground, solution.q, spec, order);
            const NormalizerConstants k = measure_normalizer_constants(solution.q, map, row.epsilon);
            const BoundReport report = verify(ground, solution, map, spec, k, cfg.solver);
            row.n_abstract = map.n_abstract();
            row.v_lifted_init = report.lifted_values[domain.initial_state];
            row.bound = report.bound;
            row.measured_max_loss = report.measured_max_loss;
            row.satisfied = report.satisfied;
            row.k_bolt = k.k_bolt;
            row.k_mult = k.k_mult;
            row.solver_iters = report.abstract_iterations;
        } catch (const std::exception& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.v_lifted_init = row.bound = row.measured_max_loss = nan;
            row.satisfied = false;
            row.error = e.what();
        }
    };

    const std::size_t workers = std::min(worker_count(cfg.workers), n_jobs);
    if (workers <= 1) {
        for (std::size_t job = 0; job < n_jobs; ++job) run_one(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t job = next++; job < n_jobs; job = next++) run_one(job);
            });
        }
    }
    return result;
}

void write_csv(std::ostream& out, const SweepResult& result) {
    out << kCsvHeader << '\n';
    for (const SweepRow& r : result.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", result.domain, to_string(result.family),
                           r.epsilon, r.trial, r.order_seed, r.n_abstract, r.v_lifted_init, r.v_opt_init, r.bound,
                           r.satisfied ? 1 : 0, r.k_bolt, r.k_mult, r.solver_iters);
    }
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    write_csv(out, result);
    return out.str();
}

namespace {

/// Two-sided standard normal quantile for the given coverage.
double normal_quantile(double confidence) {
    if (confidence == 0.95) return 1.96;
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument(fmt::format("confidence must lie in (0,1), got {}", confidence));
    }
    // Solve erf(z / sqrt 2) = confidence by bisection.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erf(mid / std::sqrt(2.0)) < confidence ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

MeanCi mean_ci(std::span<const double> samples, double confidence) {
    const double z = normal_quantile(confidence);
    MeanCi out;
    if (samples.empty()) return out;
    const double n = static_cast<double>(samples.size());
    out.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() < 2) return out;
    double ss = 0.0;
    for (double x : samples) ss += (x - out.mean) * (x - out.mean);
    const double stddev = std::sqrt(ss / (n - 1.0));
    out.half_width = z * stddev / std::sqrt(n);
    return out;
}

std::vector<SummaryRow> summarize(const SweepResult& result, double confidence) {
    std::vector<SummaryRow> out;
    std::size_t i = 0;
    while (i < result.rows.size()) {
        const std::size_t index = result.rows[i].epsilon_index;
        SummaryRow row;
        row.epsilon = result.rows[i].epsilon;
        row.v_opt_init = result.rows[i].v_opt_init;
        std::vector<double> states, values;
        for (; i < result.rows.size() && result.rows[i].epsilon_index == index; ++i) {
            const SweepRow& r = result.rows[i];
            if (!r.error.empty()) continue;
            states.push_back(static_cast<double>(r.n_abstract));
            values.push_back(r.v_lifted_init);
        }
        row.n_trials = states.size();
        row.n_abstract = mean_ci(states, confidence);
        row.v_lifted_init = mean_ci(values, confidence);
        out.push_back(row);
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
    std::string out = "epsilon,trials,n_abstract_mean,n_abstract_ci,v_lifted_mean,v_lifted_ci,v_opt_init\n";
    for (const auto& r : summary) {
        out += fmt::format("{},{},{},{},{},{},{}\n", r.epsilon, r.n_trials, r.n_abstract.mean,
                           r.n_abstract.half_width, r.v_lifted_init.mean, r.v_lifted_init.half_width, r.v_opt_init);
    }
    return out;
}

}  // namespace stateabs
