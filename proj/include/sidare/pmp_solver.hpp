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

#include <cstddef>
#include <optional>
#include <vector>

#include "sidare/objective.hpp"
#include "sidare/simulate.hpp"

namespace sidare {

/// Forward-backward sweep settings.
///
/// Each iteration proposes u_prop = clamp_control(lambda, x) on the current
/// forward/backward pair and moves u <- u + step (u_prop - u), starting from
/// step = 1 - damping. With `safeguard` on, a step is only taken if it lowers
/// J (halving the step otherwise, growing it by 1.5 after a success). Once no
/// step lowers J, a polishing phase accepts steps that reduce the fixed-point
/// residual while keeping J within `polish_band` (relative) of its value.
/// With `safeguard` off the plain damped sweep is run.
struct SweepConfig {
    std::size_t max_iterations = 2000;
    /// Converged once max_t |u_prop - u| / max(|u_prop|_inf, 1e-6) is below
    /// this, or the safeguarded search can no longer move u and the residual
    /// is below 10 * convergence_tol.
    double convergence_tol = 1e-4;
    double damping = 0.5;
    TimeGrid grid{};
    bool safeguard = true;
    double polish_band = 1e-7;
    /// Additional constant initial strategies as fractions of u_max. u = 0 is
    /// always tried first; the lowest-cost result wins, ties to the earlier start.
    std::vector<double> extra_start_fractions{1.0};

    void validate() const;
};

struct PmpSolution {
    Strategy strategy;
    Trajectory trajectory;
    Costate costate;
    CostBreakdown cost;
    std::size_t iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

/// Minimizer of the Hamiltonian in u: beta s i (lambda_i - lambda_s)
/// projected onto [0, u_max].
double clamp_control(const Vec5& lambda, const EpidemicState& x, const ModelParams& p);

/// Solves the continuous problem from every configured start.
/// Non-convergence is reported through `converged`, not thrown; integration
/// failures propagate.
PmpSolution solve(const ModelParams& p, const EpidemicState& x0, const CostWeights& w,
                  const SweepConfig& cfg);

/// Single sweep from a given initial strategy.
PmpSolution solve_from(const ModelParams& p, const EpidemicState& x0, const CostWeights& w,
                       const SweepConfig& cfg, Strategy initial);

/// max over nodes of |u - clamp_control(lambda, x)| on the solution's own
/// trajectory and costate.
double pmp_residual(const PmpSolution& sol, const ModelParams& p);

}  // namespace sidare
