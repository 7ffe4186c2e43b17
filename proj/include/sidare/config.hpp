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

#pragma once

#include <iosfwd>
#include <string>

#include "sidare/analysis.hpp"
#include "sidare/discretizer.hpp"
#include "sidare/model.hpp"
#include "sidare/pmp_solver.hpp"
#include "sidare/types.hpp"

namespace sidare {

/// Everything a CLI run needs. Defaults are the reference parameter set.
///
/// JSON layout (every section and key optional, unknown keys rejected):
///
///     {
///       "model":         {"beta", "gamma_i", "gamma_d", "gamma_a", "nu", "xi_i",
///                         "xi_d", "mu", "mu_hat", "h_bar", "u_max"},
///       "initial_state": {"s", "i", "d", "a", "e"},
///       "grid":          {"horizon", "step"},
///       "weights":       {"theta_a", "theta_e"},
///       "solver":        {"max_iterations", "convergence_tol", "damping",
///                         "safeguard", "polish_band", "start_fractions"},
///       "discretize":    {"levels", "switches", "delta", "catalog_step",
///                         "catalog", "rescore_prune"},
///       "frontier":      {"nu", "h_bar", "theta_a", "theta_e", "theta_e_points",
///                         "theta_e_max", "cost_axis", "basis_tolerance",
///                         "allow_extended"},
///       "uncertainty":   {"r0_min", "r0_max", "r0_points", "ifr_min", "ifr_max",
///                         "ifr_points", "nominal_r0", "nominal_ifr"},
///       "threads": 0,
///       "output_dir": "out"
///     }
///
/// mu_hat defaults to 5 mu when mu is given without it; r is implied by the
/// other initial fractions.
struct RunConfig {
    ModelParams model;
    EpidemicState initial = default_initial_state();
    CostWeights weights;
    SweepConfig solver;
    DiscretizeConfig discretize;
    FrontierSettings frontier;
    UncertaintyGrid uncertainty;
    std::size_t threads = 0;
    std::string output_dir = "out";

    const TimeGrid& grid() const noexcept { return solver.grid; }

    /// Cross-module checks; throws ConfigError.
    void validate() const;
};

/// Parses and validates; throws ConfigError with the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical JSON of a config (all keys), as written next to run outputs.
std::string dump_config(const RunConfig& cfg);

}  // namespace sidare
