// Command-line front end: generate domains, solve, abstract, sweep, visualize.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stateabs/abstraction.hpp"
#include "stateabs/bounds.hpp"
#include "stateabs/domains.hpp"
#include "stateabs/harness.hpp"
#include "stateabs/io.hpp"
#include "stateabs/oracle.hpp"
#include "stateabs/solver.hpp"

using namespace stateabs;

namespace {

// JSON has no infinity; spell it out.
io::json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

// "0,0.1,0.2" or "start:stop:step" (inclusive of stop within rounding).
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0)) {
            throw CLI::ValidationError("--eps-grid", "expected start:stop:step with a positive step");
        }
        for (std::size_t i = 0;; ++i) {
            const double e = start + static_cast<double>(i) * step;
            if (e > stop + step * 1e-9) break;
            grid.push_back(e);
        }
        return grid;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--eps-grid", fmt::format("'{}' is not a number", item));
        }
    }
    return grid;
}

void print_instance_summary(const DomainInstance& d) {
    std::cerr << fmt::format("{}: {} states, {} actions, gamma {}, initial state {}\n", d.name, d.mdp.n_states(),
                             d.mdp.n_actions(), d.mdp.gamma(), d.initial_state);
    for (const auto& [k, v] : d.params) std::cerr << fmt::format("  {} = {}\n", k, v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate state abstraction for tabular MDPs"};
    app.require_subcommand(1);

    SolveConfig solver;
    app.add_option("--tolerance", solver.tolerance, "Value iteration residual threshold")->capture_default_str();
    app.add_option("--max-iterations", solver.max_iterations, "Value iteration cap")->capture_default_str();

    // gen ------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Generate a benchmark domain as MDP JSON");
    std::string gen_domain;
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    NChainParams chain;
    UpworldParams up;
    TaxiParams cab;
    MinefieldParams mines;
    RandomMdpParams rnd;
    double gen_gamma = kDefaultGamma;
    std::size_t rows = 0, cols = 0;
    double slip = -1.0;
    gen->add_option("domain", gen_domain, "nchain | upworld | taxi | minefield | random")
        ->required()
        ->check(CLI::IsMember(domain_names()));
    gen->add_option("--seed", gen_seed, "Generator seed (minefield, random)");
    gen->add_option("--out", gen_out, "Output JSON path")->required();
    gen->add_option("--gamma", gen_gamma, "Discount factor")->capture_default_str();
    gen->add_option("--n", chain.n, "NChain length")->capture_default_str();
    gen->add_option("--slip", slip, "Slip probability (nchain, minefield)");
    gen->add_option("--rows", rows, "Grid rows (upworld, minefield)");
    gen->add_option("--cols", cols, "Grid columns (upworld, minefield)");
    gen->add_option("--mines", mines.n_mines, "Mine count")->capture_default_str();
    gen->add_option("--width", cab.width, "Taxi grid width")->capture_default_str();
    gen->add_option("--height", cab.height, "Taxi grid height")->capture_default_str();
    gen->add_option("--passengers", cab.n_passengers, "Taxi passengers")->capture_default_str();
    gen->add_option("--states", rnd.n_states, "Random MDP states")->capture_default_str();
    gen->add_option("--actions", rnd.n_actions, "Random MDP actions")->capture_default_str();

    // solve ----------------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "Solve an MDP and print V*, Q* and the greedy policy");
    std::string solve_in, solve_out;
    solve_cmd->add_option("mdp", solve_in, "MDP JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", solve_out, "Write the solution JSON here instead of stdout");

    // abstract -------------------------------------------------------------
    auto* abstract_cmd = app.add_subcommand("abstract", "Build an abstraction and check its value-loss bound");
    std::string abs_in, abs_out, abs_family = "qstar";
    double abs_epsilon = 0.0;
    std::uint64_t abs_order_seed = 0;
    abstract_cmd->add_option("mdp", abs_in, "MDP JSON")->required()->check(CLI::ExistingFile);
    abstract_cmd->add_option("--family", abs_family, "qstar | model | bolt | mult")
        ->check(CLI::IsMember({"qstar", "model", "bolt", "mult"}))
        ->capture_default_str();
    abstract_cmd->add_option("--epsilon", abs_epsilon, "Similarity threshold")->required();
    abstract_cmd->add_option("--order-seed", abs_order_seed, "Seed of the state visiting order");
    abstract_cmd->add_option("--out", abs_out, "Write the abstraction map JSON here");

    // sweep ----------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "Epsilon sweep with randomized aggregation orders");
    SweepConfig sweep;
    std::string sweep_family = "qstar", sweep_grid, sweep_out, sweep_summary;
    std::size_t sweep_trials = 0;
    sweep_cmd->add_option("--domain", sweep.domain, "Benchmark domain")
        ->required()
        ->check(CLI::IsMember(domain_names()));
    sweep_cmd->add_option("--domain-seed", sweep.domain_seed, "Generator seed (minefield, random)");
    sweep_cmd->add_option("--family", sweep_family, "qstar | model | bolt | mult")
        ->check(CLI::IsMember({"qstar", "model", "bolt", "mult"}))
        ->capture_default_str();
    sweep_cmd->add_option("--eps-grid", sweep_grid, "Comma list or start:stop:step (default per domain)");
    sweep_cmd->add_option("--trials", sweep_trials, "Trials per epsilon (default per domain)");
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed for aggregation orders");
    sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (default STATEABS_WORKERS or hardware)");
    sweep_cmd->add_option("--out", sweep_out, "Per-trial CSV")->required();
    sweep_cmd->add_option("--summary", sweep_summary, "Per-epsilon mean / 95% CI CSV");

    // viz ------------------------------------------------------------------
    auto* viz_cmd = app.add_subcommand("viz", "Write a Graphviz description of a ground or abstract MDP");
    std::string viz_in, viz_map, viz_out;
    viz_cmd->add_option("mdp", viz_in, "MDP JSON")->required()->check(CLI::ExistingFile);
    viz_cmd->add_option("--map", viz_map, "Abstraction map JSON; draws the induced abstract MDP")
        ->check(CLI::ExistingFile);
    viz_cmd->add_option("--out", viz_out, "Output .dot path")->required();

    // selfcheck ------------------------------------------------------------
    auto* selfcheck_cmd = app.add_subcommand("selfcheck", "Cross-check the solver and bounds against brute force");
    std::size_t check_instances = 100;
    selfcheck_cmd->add_option("--instances", check_instances, "Random instances")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            DomainInstance d = [&] {
                if (gen_domain == "nchain") {
                    chain.gamma = gen_gamma;
                    if (slip >= 0.0) chain.slip = slip;
                    return nchain(chain);
                }
                if (gen_domain == "upworld") {
                    up.gamma = gen_gamma;
                    if (rows) up.rows = rows;
                    if (cols) up.cols = cols;
                    return upworld(up);
                }
                if (gen_domain == "taxi") {
                    cab.gamma = gen_gamma;
                    return taxi(cab);
                }
                if (gen_domain == "minefield") {
                    mines.gamma = gen_gamma;
                    mines.seed = gen_seed;
                    if (rows) mines.rows = rows;
                    if (cols) mines.cols = cols;
                    if (slip >= 0.0) mines.slip = slip;
                    return minefield(mines);
                }
                rnd.gamma = gen_gamma;
                rnd.seed = gen_seed;
                return random_mdp(rnd);
            }();
            auto j = io::to_json(d.mdp);
            io::write_json(gen_out, j);
            print_instance_summary(d);
            return 0;
        }

        if (*solve_cmd) {
            const TabularMdp mdp = io::mdp_from_json(io::read_json(solve_in));
            const Solution sol = solve(mdp, solver);
            const auto j = io::to_json(sol);
            if (solve_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                io::write_json(solve_out, j);
            }
            return 0;
        }

        if (*abstract_cmd) {
            const TabularMdp mdp = io::mdp_from_json(io::read_json(abs_in));
            const Solution sol = solve(mdp, solver);
            const PredicateSpec spec{parse_family(abs_family), abs_epsilon};
            const auto order = random_order(mdp.n_states(), abs_order_seed);
            BuildStats stats;
            const AbstractionMap map = build_abstraction(mdp, sol.q, spec, order, &stats);
            const NormalizerConstants k = measure_normalizer_constants(sol.q, map, abs_epsilon);
            const BoundReport report = verify(mdp, sol, map, spec, k, solver);
            if (!abs_out.empty()) io::write_json(abs_out, io::to_json(map));
            const io::json summary = {{"family", abs_family},
                                      {"epsilon", abs_epsilon},
                                      {"n_ground", mdp.n_states()},
                                      {"n_abstract", map.n_abstract()},
                                      {"recheck_splits", stats.recheck_splits},
                                      {"k_bolt", number(k.k_bolt)},
                                      {"k_mult", number(k.k_mult)},
                                      {"eta", number(report.eta)},
                                      {"bound", number(report.bound)},
                                      {"vacuous", report.vacuous},
                                      {"measured_max_loss", report.measured_max_loss},
                                      {"slack", report.slack},
                                      {"satisfied", report.satisfied}};
            std::cout << summary.dump(2) << "\n";
            return report.satisfied ? 0 : 1;
        }

        if (*sweep_cmd) {
            sweep.family = parse_family(sweep_family);
            sweep.epsilon_grid = sweep_grid.empty() ? default_epsilon_grid(sweep.domain) : parse_grid(sweep_grid);
            sweep.n_trials = sweep_trials ? sweep_trials : default_trials(sweep.domain);
            sweep.solver = solver;
            const SweepResult result = run_sweep(sweep);
            io::write_text(sweep_out, to_csv(result));
            const auto summary = summarize(result);
            if (!sweep_summary.empty()) io::write_text(sweep_summary, summary_csv(summary));
            std::cerr << fmt::format("{} ({} states), {} rows\n", result.domain, result.n_ground, result.rows.size());
            std::cerr << summary_csv(summary);
            std::size_t failed = 0;
            for (const auto& r : result.rows) {
                if (!r.satisfied) {
                    ++failed;
                    std::cerr << fmt::format("bound check failed: epsilon {} trial {} {}\n", r.epsilon, r.trial,
                                             r.error);
                }
            }
            return failed == 0 ? 0 : 1;
        }

        if (*viz_cmd) {
            const TabularMdp mdp = io::mdp_from_json(io::read_json(viz_in));
            if (viz_map.empty()) {
                export_dot(mdp, nullptr, viz_out);
            } else {
                const AbstractionMap map = io::map_from_json(io::read_json(viz_map));
                export_dot(mdp, &map, viz_out);
            }
            return 0;
        }

        if (*selfcheck_cmd) {
            const auto report = oracle::selfcheck(check_instances);
            std::cout << fmt::format("oracle agreement: {} instances, max |V*_solver - V*_enum| = {:.3e} ({})\n",
                                     report.instances, report.max_value_gap,
                                     report.max_value_gap < 1e-6 ? "PASS" : "FAIL");
            std::cout << fmt::format("bound soundness: {} checks, {} failures ({})\n", report.bound_checks,
                                     report.bound_failures, report.bound_failures == 0 ? "PASS" : "FAIL");
            std::cout << (report.passed ? "selfcheck PASS\n" : "selfcheck FAIL\n");
            return report.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
