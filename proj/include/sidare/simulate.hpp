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

#include <vector>

#include "sidare/model.hpp"
#include "sidare/types.hpp"

namespace sidare {

struct Trajectory {
    TimeGrid grid;
    std::vector<EpidemicState> states;

    const EpidemicState& final_state() const { return states.back(); }
};

/// Pontryagin costate (lambda_s, lambda_i, lambda_d, lambda_a, lambda_e) per node.
struct Costate {
    TimeGrid grid;
    std::vector<Vec5> lambdas;
};

/// Components within this distance outside [0, 1] are clamped back; anything
/// further out raises IntegrationDiverged.
inline constexpr double kClampTolerance = 1e-9;

/// Classical RK4 over the controlled field, control held at the cell's left
/// node for all four stages. r is recomputed from conservation at each node.
Trajectory integrate_forward(const EpidemicState& x0, const Strategy& u, const ModelParams& p,
                             const TimeGrid& grid);

/// Integrates lambda' = -dH/dx backward from (0, 0, 0, 0, theta_e) with RK4.
/// States between nodes come from cubic Hermite interpolation of the forward
/// trajectory, which keeps the scheme fourth order inside each cell.
Costate integrate_costate_backward(const Trajectory& traj, const Strategy& u, const ModelParams& p,
                                   const CostWeights& w);

/// -dH/dx at one state: the costate right-hand side.
Vec5 costate_rate(const Vec5& x, const Vec5& lambda, double u, const ModelParams& p,
                  const CostWeights& w);

}  // namespace sidare
