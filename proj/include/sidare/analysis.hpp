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
#include <functional>
#include <string>
#include <vector>

#include "sidare/model.hpp"
#include "sidare/objective.hpp"
#include "sidare/pmp_solver.hpp"

namespace sidare {

/// Which part of the running cost goes on the frontier's cost axis.
enum class CostAxis {
    Running,       ///< 1/2 u^2 + theta_a/2 a^2 integrated
    Intervention,  ///< 1/2 u^2 integrated
};

double cost_on_axis(const CostBreakdown& c, CostAxis axis);

/// theta_e = 0 followed by `points` log-spaced values in [1, max].
std::vector<double> default_theta_e_grid(std::size_t points = 40, double max = 2.5e4);

struct ScenarioGrid {
    std::vector<double> nu{0.0, 0.05, 0.10};
    std::vector<double> h_bar{0.00222, 0.00333, 0.00444};
    std::vector<double> theta_a{0.0, 5e4, 1e5};
    std::vector<double> theta_e = default_theta_e_grid();
    /// Permit values outside nu in [0, 0.1], h_bar in [0.00222, 0.00444],
    /// theta_a in [0, 1e5], theta_e in [0, 2.5e4].
    bool allow_extended = false;

    void validate() const;
    std::size_t cell_count() const noexcept {
        return nu.size() * h_bar.size() * theta_a.size() * theta_e.size();
    }
};

struct FrontierSettings {
    ScenarioGrid grid;
    CostAxis axis = CostAxis::Running;
    /// Death fraction of the no-testing strategy whose cost is the basis.
    double basis_tolerance = 1e-4;
    /// 0 picks SIDARE_THREADS or the hardware concurrency.
    std::size_t threads = 0;
};

struct FrontierRecord {
    double nu = 0.0;
    double h_bar = 0.0;
    double theta_a = 0.0;
    double theta_e = 0.0;
    double cost = 0.0;             ///< on the configured axis
    double basis = 0.0;
    double normalized_cost = 0.0;  ///< percent of basis
    double e_T = 0.0;
    double peak_a = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::string note;              ///< empty, or the error that stopped the cell
};

struct FrontierResult {
    /// Ordered by (nu, h_bar, theta_a, theta_e) in grid order.
    std::vector<FrontierRecord> records;
};

/// Runs the solver on every cell of the grid. Cell failures are recorded.
FrontierResult frontier(const ModelParams& base, const EpidemicState& x0, const SweepConfig& solver,
                        const FrontierSettings& settings);

struct WeightSearch {
    double theta_e = 0.0;
    PmpSolution solution;
    std::size_t solves = 0;
};

/// Bisection on theta_e in [lo, hi] for e(T) = target_e with p (nu, h_bar)
/// and theta_a fixed. Stops within 5% relative of the target or once the
/// bracket is narrower than 1. Throws BracketError when the target lies
/// outside [e(hi), e(lo)].
WeightSearch find_weight_for_tolerance(double target_e, const ModelParams& p,
                                       const EpidemicState& x0, double theta_a, double lo,
                                       double hi, const SweepConfig& solver);

/// mu such that xi_i/(gamma_i + xi_i) * mu/(gamma_a + mu) = ifr.
double mu_from_ifr(double ifr, const ModelParams& p);
/// Forward map of mu_from_ifr.
double ifr_from_mu(double mu, const ModelParams& p);

struct UncertaintyGrid {
    double r0_min = 3.17;
    double r0_max = 3.38;
    std::size_t r0_points = 8;
    double ifr_min = 0.0039;
    double ifr_max = 0.0133;
    std::size_t ifr_points = 8;
    double nominal_r0 = 3.27;
    double nominal_ifr = 0.0066;

    void validate() const;
    std::vector<double> r0_values() const;
    std::vector<double> ifr_values() const;
};

struct UncertaintyRecord {
    double r0 = 0.0;
    double ifr = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double e_T = 0.0;
    double peak_a = 0.0;
    double cost = 0.0;  ///< J of the simulated (or re-optimized) strategy
    bool converged = true;
    std::string note;
};

struct UncertaintyResult {
    /// Ordered by (r0, ifr) in grid order.
    std::vector<UncertaintyRecord> records;
    UncertaintyRecord nominal;
    /// Index of the (max r0, max ifr) corner.
    std::size_t worst_corner = 0;
};

/// Parameters of one uncertainty cell: beta from r0 (nu taken as 0), mu from
/// ifr, mu_hat keeping the base mu_hat/mu ratio.
ModelParams perturbed_params(const ModelParams& base, const EpidemicState& x0, double r0,
                             double ifr);

/// Re-simulates `frozen` on every cell, or re-solves each cell when
/// `reoptimize` is set.
UncertaintyResult uncertainty_sweep(const ModelParams& base, const EpidemicState& x0,
                                    const Strategy& frozen, const CostWeights& w,
                                    const SweepConfig& solver, const UncertaintyGrid& grid,
                                    bool reoptimize = false, std::size_t threads = 0);

/// Worker count: `requested` if non-zero, else SIDARE_THREADS if set, else
/// the hardware concurrency (at least 1).
std::size_t resolve_workers(std::size_t requested);

/// Calls task(k) for k in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace sidare
