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

#include "sidare/simulate.hpp"
#include "sidare/types.hpp"

namespace sidare {

struct CostBreakdown {
    double intervention_cost = 0.0;  ///< integral of u^2 / 2
    double symptomatic_cost = 0.0;   ///< theta_a * integral of a^2 / 2
    double death_cost = 0.0;         ///< theta_e * e(T)
    double total = 0.0;

    /// The part reported on the cost axis of frontier plots.
    double running() const { return intervention_cost + symptomatic_cost; }
};

/// Trapezoidal quadrature of u^2/2 and theta_a a^2/2 over the grid.
/// death_cost is left at zero.
CostBreakdown running_cost(const Strategy& u, const Trajectory& traj, const CostWeights& w);

/// running_cost plus theta_e * e(T).
CostBreakdown total_objective(const Strategy& u, const Trajectory& traj, const CostWeights& w);

/// 100 * raw / basis. Throws DomainError for a non-positive basis.
double normalize_cost(double raw, double basis);

/// Simulates `u` from x0 and returns the full cost breakdown.
CostBreakdown evaluate_strategy(const EpidemicState& x0, const Strategy& u, const ModelParams& p,
                                const TimeGrid& grid, const CostWeights& w);

}  // namespace sidare
