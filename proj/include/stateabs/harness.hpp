#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stateabs/abstraction.hpp"
#include "stateabs/domains.hpp"
#include "stateabs/solver.hpp"

namespace stateabs {

struct SweepConfig {
    std::string domain = "nchain";
    std::uint64_t domain_seed = 0;  ///< seeds minefield / random generation
    Family family = Family::QStar;
    std::vector<double> epsilon_grid;
    std::size_t n_trials = 20;
    std::uint64_t seed = 0;  ///< master seed for aggregation orders
    SolveConfig solver;
    std::size_t workers = 0;  ///< 0: STATEABS_WORKERS or hardware concurrency

    void check() const;
};

struct SweepRow {
    double epsilon = 0.0;
    std::size_t epsilon_index = 0;
    std::size_t trial = 0;
    std::uint64_t order_seed = 0;
    std::size_t n_abstract = 0;
    double v_lifted_init = 0.0;
    double v_opt_init = 0.0;
    double bound = 0.0;
    double measured_max_loss = 0.0;
    bool satisfied = false;
    double k_bolt = 0.0;
    double k_mult = 0.0;
    std::size_t solver_iters = 0;
    std::string error;  ///< non-empty when this trial's solve failed
};

struct SweepResult {
    std::string domain;
    Family family = Family::QStar;
    std::size_t n_ground = 0;
    double gamma = 0.0;
    double tolerance = 0.0;
    std::size_t ground_iterations = 0;
    std::vector<SweepRow> rows;  ///< ordered by (epsilon_index, trial)

    bool all_satisfied() const;
};

/// Seed for one trial, derived only from (master, epsilon index, trial index).
std::uint64_t trial_seed(std::uint64_t master, std::size_t epsilon_index, std::size_t trial);

/// Uniformly random visiting order over n states.
std::vector<State> random_order(std::size_t n, std::uint64_t seed);

/// Taxi: 0 to 0.05 by 0.0025; elsewhere 0 to 1 by 0.05.
std::vector<double> default_epsilon_grid(const std::string& domain);
/// Taxi and random: 200; elsewhere 20.
std::size_t default_trials(const std::string& domain);

/// Worker threads to use: explicit request, else STATEABS_WORKERS, else hardware.
std::size_t worker_count(std::size_t requested = 0);

SweepResult run_sweep(const SweepConfig& cfg);
SweepResult run_sweep(const DomainInstance& domain, const SweepConfig& cfg);

inline constexpr const char* kCsvHeader =
    "domain,family,epsilon,trial,order_seed,n_abstract,v_lifted_init,v_opt_init,bound,satisfied,k_bolt,k_mult,"
    "solver_iters";

void write_csv(std::ostream& out, const SweepResult& result);
std::string to_csv(const SweepResult& result);

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;
};

/// Mean and normal-approximation half-width z * s / sqrt(n) with the sample
/// standard deviation s; half-width 0 for a single sample.
MeanCi mean_ci(std::span<const double> samples, double confidence = 0.95);

struct SummaryRow {
    double epsilon = 0.0;
    std::size_t n_trials = 0;
    MeanCi n_abstract;
    MeanCi v_lifted_init;
    double v_opt_init = 0.0;
};

/// One row per epsilon, skipping failed trials.
std::vector<SummaryRow> summarize(const SweepResult& result, double confidence = 0.95);
std::string summary_csv(const std::vector<SummaryRow>& summary);

/// Graphviz description of an MDP. With a map, the MDP is treated as the ground
/// model and the induced abstract MDP is drawn, each node labeled with its
/// constituent ground states. Edge width grows affinely from 1 (reward 0) to 5
/// (reward 1).
std::string to_dot(const TabularMdp& mdp, const AbstractionMap* map = nullptr);
void export_dot(const TabularMdp& mdp, const AbstractionMap* map, const std::filesystem::path& path);

}  // namespace stateabs
