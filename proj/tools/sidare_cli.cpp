/*
 Copyright 2026 The sidare-control Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// sidare_cli: simulate, optimize, discretize and sweep from a JSON config.
//
// Exit codes: 0 success, 2 configuration or input error, 3 solver did not
// converge, 4 numerical divergence. Output files are only written once all
// computation has finished.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sidare/analysis.hpp"
#include "sidare/config.hpp"
#include "sidare/discretizer.hpp"
#include "sidare/errors.hpp"
#include "sidare/io.hpp"
#include "sidare/objective.hpp"
#include "sidare/pmp_solver.hpp"
#include "sidare/simulate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sidare;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;
constexpr int kDiverged = 4;

/// Files to write, in order, once a command has finished computing.
class Outputs {
public:
    void add(std::string name, std::string content) {
        files_.emplace_back(std::move(name), std::move(content));
    }

    void add_json(std::string name, const json& j) { add(std::move(name), j.dump(2) + "\n"); }

    void write(const std::string& dir) const {
        fs::create_directories(dir);
        for (const auto& [name, content] : files_) {
            const fs::path path = fs::path(dir) / name;
            std::ofstream out(path, std::ios::binary);
            out << content;
            if (!out) {
                throw std::runtime_error("cannot write " + path.string());
            }
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

json cost_json(const CostBreakdown& c) {
    return {{"intervention", c.intervention_cost},
            {"symptomatic", c.symptomatic_cost},
            {"death", c.death_cost},
            {"running", c.running()},
            {"total", c.total}};
}

json grid_json(const TimeGrid& g) {
    return {{"horizon", g.horizon()}, {"step", g.step()}, {"nodes", g.nodes()}};
}

Strategy load_strategy(const std::string& path, const RunConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read strategy file " + path);
    }
    return read_strategy(in, cfg.grid(), cfg.model.u_max);
}

std::string strategy_text(const Strategy& u, const TimeGrid& grid) {
    std::ostringstream out;
    write_strategy(out, u, grid);
    return out.str();
}

std::string trajectory_text(const Trajectory& traj) {
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    return out.str();
}

struct Peak {
    double value = 0.0;
    double time = 0.0;
};

template <class F>
Peak peak_of(const Trajectory& traj, F field) {
    Peak p{field(traj.states[0]), 0.0};
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        if (field(traj.states[k]) > p.value) {
            p = {field(traj.states[k]), traj.grid.time(k)};
        }
    }
    return p;
}

json trajectory_summary(const Trajectory& traj, const ModelParams& p) {
    const Peak a = peak_of(traj, [](const EpidemicState& x) { return x.a; });
    const Peak i = peak_of(traj, [](const EpidemicState& x) { return x.i; });
    json j;
    j["e_T"] = traj.final_state().e;
    j["peak_a"] = a.value;
    j["peak_a_time"] = a.time;
    j["peak_i"] = i.value;
    j["peak_i_time"] = i.time;
    // Below this susceptible fraction the uncontrolled i' is negative.
    const double threshold = p.beta > 0.0 ? (p.gamma_i + p.xi_i + p.nu) / p.beta : 0.0;
    j["s_threshold"] = threshold;
    j["s_threshold_time"] = nullptr;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (traj.states[k].s <= threshold) {
            j["s_threshold_time"] = traj.grid.time(k);
            break;
        }
    }
    return j;
}

int cmd_simulate(const RunConfig& cfg, const std::string& strategy_path, const std::string& out) {
    const Strategy u = load_strategy(strategy_path, cfg);
    const Trajectory traj = integrate_forward(cfg.initial, u, cfg.model, cfg.grid());
    const CostBreakdown cost = total_objective(u, traj, cfg.weights);

    json summary = trajectory_summary(traj, cfg.model);
    summary["r0"] = basic_reproduction_number(cfg.model, cfg.initial.s);
    summary["cost"] = cost_json(cost);
    summary["grid"] = grid_json(cfg.grid());

    Outputs files;
    files.add("trajectory.csv", trajectory_text(traj));
    files.add_json("summary.json", summary);
    files.write(out);
    return kOk;
}

int cmd_optimize(const RunConfig& cfg, const std::string& out) {
    const PmpSolution sol = solve(cfg.model, cfg.initial, cfg.weights, cfg.solver);

    json j;
    j["converged"] = sol.converged;
    j["iterations"] = sol.iterations;
    j["residual"] = pmp_residual(sol, cfg.model);
    j["weights"] = {{"theta_a", cfg.weights.theta_a}, {"theta_e", cfg.weights.theta_e}};
    j["cost"] = cost_json(sol.cost);
    j["summary"] = trajectory_summary(sol.trajectory, cfg.model);
    const Vec5& lambda_0 = sol.costate.lambdas.front();
    const Vec5& lambda_T = sol.costate.lambdas.back();
    j["costate_0"] = {lambda_0[kS], lambda_0[kI], lambda_0[kD], lambda_0[kA], lambda_0[kE]};
    j["costate_T"] = {lambda_T[kS], lambda_T[kI], lambda_T[kD], lambda_T[kA], lambda_T[kE]};
    j["grid"] = grid_json(cfg.grid());

    Outputs files;
    files.add("strategy.csv", strategy_text(sol.strategy, cfg.grid()));
    files.add("trajectory.csv", trajectory_text(sol.trajectory));
    files.add_json("solution.json", j);
    files.write(out);
    if (!sol.converged) {
        std::cerr << "warning: sweep did not converge after " << sol.iterations
                  << " iterations (residual " << sol.residual << ")\n";
        return kNotConverged;
    }
    return kOk;
}

int cmd_discretize(RunConfig cfg, const std::string& strategy_path, std::optional<std::size_t> levels,
                   std::optional<std::size_t> switches, const std::string& out) {
    if (levels) {
        cfg.discretize.n_levels = *levels;
    }
    if (switches) {
        cfg.discretize.n_switches = *switches;
    }
    try {
        cfg.discretize.validate(cfg.grid(), cfg.model.u_max);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(ex.what());
    }

    const Strategy u = load_strategy(strategy_path, cfg);
    const double j_cont = evaluate_strategy(cfg.initial, u, cfg.model, cfg.grid(), cfg.weights).total;
    const CostEvaluator evaluator =
        make_evaluator(cfg.initial, cfg.model, cfg.grid(), cfg.weights, cfg.discretize.catalog);
    const DiscretizeResult res = discretize(u, cfg.discretize, cfg.grid(), evaluator);

    json j;
    j["J_continuous"] = j_cont;
    j["J_discrete"] = res.optimized_cost;
    j["J_projection"] = res.projected_cost;
    j["J_pruned"] = res.pruned_cost;
    j["percent_gap"] = j_cont > 0.0 ? 100.0 * (res.optimized_cost - j_cont) / j_cont : 0.0;
    j["levels_used"] = res.optimized.used_levels().size();
    j["switch_count"] = res.optimized.switch_count();
    j["max_levels"] = cfg.discretize.n_levels;
    j["max_switches"] = cfg.discretize.n_switches;
    j["evaluations"] = res.trace.evaluations;
    j["accepted_level_moves"] = res.trace.moves.size();
    std::vector<double> values;
    for (std::size_t idx : res.optimized.levels) {
        values.push_back(cfg.discretize.catalog.level(idx));
    }
    std::vector<double> times;
    for (std::size_t node : res.optimized.switches) {
        times.push_back(cfg.grid().time(node));
    }
    j["levels"] = values;
    j["switch_times"] = times;

    std::ostringstream text;
    write_discrete_strategy(text, res.optimized, cfg.grid(), cfg.discretize.catalog);

    Outputs files;
    files.add("discrete_strategy.csv", text.str());
    files.add_json("comparison.json", j);
    files.write(out);
    return kOk;
}

std::string csv_flag(bool v) { return v ? "1" : "0"; }

int cmd_sweep_frontier(const RunConfig& cfg, const std::string& out) {
    const FrontierResult res = frontier(cfg.model, cfg.initial, cfg.solver, cfg.frontier);

    std::ostringstream csv;
    csv << "nu,h_bar,theta_a,theta_e,cost,basis,normalized_cost,e_T,peak_a,converged,iterations\n";
    json records = json::array();
    std::size_t failed = 0;
    for (const auto& r : res.records) {
        csv << format_csv_number(r.nu) << ',' << format_csv_number(r.h_bar) << ','
            << format_csv_number(r.theta_a) << ',' << format_csv_number(r.theta_e) << ','
            << format_csv_number(r.cost) << ',' << format_csv_number(r.basis) << ','
            << format_csv_number(r.normalized_cost) << ',' << format_csv_number(r.e_T) << ','
            << format_csv_number(r.peak_a) << ',' << csv_flag(r.converged) << ',' << r.iterations
            << '\n';
        records.push_back({{"nu", r.nu},
                           {"h_bar", r.h_bar},
                           {"theta_a", r.theta_a},
                           {"theta_e", r.theta_e},
                           {"cost", r.cost},
                           {"basis", r.basis},
                           {"normalized_cost", r.normalized_cost},
                           {"e_T", r.e_T},
                           {"peak_a", r.peak_a},
                           {"converged", r.converged},
                           {"iterations", r.iterations},
                           {"note", r.note}});
        failed += r.converged ? 0 : 1;
    }
    json j;
    j["mode"] = "frontier";
    j["cost_axis"] = cfg.frontier.axis == CostAxis::Running ? "running" : "intervention";
    j["basis_tolerance"] = cfg.frontier.basis_tolerance;
    j["grid"] = grid_json(cfg.grid());
    j["cells"] = res.records.size();
    j["unconverged_cells"] = failed;
    j["records"] = std::move(records);

    Outputs files;
    files.add("frontier.csv", csv.str());
    files.add_json("frontier.json", j);
    files.write(out);
    if (failed > 0) {
        std::cerr << "warning: " << failed << " frontier cells did not converge\n";
    }
    return kOk;
}

json uncertainty_record_json(const UncertaintyRecord& r) {
    return {{"r0", r.r0},     {"ifr", r.ifr},       {"beta", r.beta},
            {"mu", r.mu},     {"e_T", r.e_T},       {"peak_a", r.peak_a},
            {"cost", r.cost}, {"converged", r.converged}, {"note", r.note}};
}

int cmd_sweep_uncertainty(const RunConfig& cfg, const std::string& strategy_path, bool reoptimize,
                          const std::string& out) {
    Strategy frozen;
    json source;
    if (!strategy_path.empty()) {
        frozen = load_strategy(strategy_path, cfg);
        source = {{"kind", "file"}};
    } else {
        const PmpSolution sol = solve(cfg.model, cfg.initial, cfg.weights, cfg.solver);
        frozen = sol.strategy;
        source = {{"kind", "optimized at nominal parameters"},
                  {"converged", sol.converged},
                  {"iterations", sol.iterations},
                  {"e_T", sol.trajectory.final_state().e}};
    }
    const UncertaintyResult res = uncertainty_sweep(cfg.model, cfg.initial, frozen, cfg.weights,
                                                    cfg.solver, cfg.uncertainty, reoptimize,
                                                    cfg.threads);

    std::ostringstream csv;
    csv << "r0,ifr,beta,mu,e_T,peak_a,cost,converged\n";
    json records = json::array();
    for (const auto& r : res.records) {
        csv << format_csv_number(r.r0) << ',' << format_csv_number(r.ifr) << ','
            << format_csv_number(r.beta) << ',' << format_csv_number(r.mu) << ','
            << format_csv_number(r.e_T) << ',' << format_csv_number(r.peak_a) << ','
            << format_csv_number(r.cost) << ',' << csv_flag(r.converged) << '\n';
        records.push_back(uncertainty_record_json(r));
    }
    json j;
    j["mode"] = "uncertainty";
    j["reoptimize"] = reoptimize;
    j["strategy"] = source;
    j["weights"] = {{"theta_a", cfg.weights.theta_a}, {"theta_e", cfg.weights.theta_e}};
    j["grid"] = grid_json(cfg.grid());
    j["nominal"] = uncertainty_record_json(res.nominal);
    j["worst_case"] = uncertainty_record_json(res.records[res.worst_corner]);
    j["records"] = std::move(records);

    Outputs files;
    files.add("uncertainty.csv", csv.str());
    files.add_json("uncertainty.json", j);
    files.write(out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal and discrete intervention strategies for the SIDARE epidemic model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string strategy_path;
    std::string out_dir;
    std::string mode;
    bool reoptimize = false;
    std::optional<std::size_t> levels;
    std::optional<std::size_t> switches;

    auto* simulate = app.add_subcommand("simulate", "Simulate a strategy file");
    simulate->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    simulate->add_option("--strategy", strategy_path, "Strategy file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_dir, "Output directory");

    auto* optimize = app.add_subcommand("optimize", "Solve for the optimal continuous strategy");
    optimize->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    optimize->add_option("--out", out_dir, "Output directory");

    auto* disc = app.add_subcommand("discretize", "Turn a continuous strategy into a discrete schedule");
    disc->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    disc->add_option("--strategy", strategy_path, "Continuous strategy file")->required()->check(CLI::ExistingFile);
    disc->add_option("--levels", levels, "Maximum number of distinct policy levels");
    disc->add_option("--switches", switches, "Maximum number of policy changes");
    disc->add_option("--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Frontier or parametric-uncertainty sweep");
    sweep->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    sweep->add_option("--mode", mode, "frontier or uncertainty")
        ->required()
        ->check(CLI::IsMember({"frontier", "uncertainty"}));
    sweep->add_flag("--reoptimize", reoptimize, "Re-solve every uncertainty cell");
    sweep->add_option("--strategy", strategy_path, "Frozen strategy for the uncertainty sweep")
        ->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
        if (*simulate) {
            return cmd_simulate(cfg, strategy_path, out);
        }
        if (*optimize) {
            return cmd_optimize(cfg, out);
        }
        if (*disc) {
            return cmd_discretize(cfg, strategy_path, levels, switches, out);
        }
        if (mode == "frontier") {
            return cmd_sweep_frontier(cfg, out);
        }
        return cmd_sweep_uncertainty(cfg, strategy_path, reoptimize, out);
    } catch (const IntegrationDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDiverged;
    } catch (const BracketError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kConfigError;
    } catch (const UsageError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
