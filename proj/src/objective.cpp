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

#include "sidare/objective.hpp"

#include "sidare/errors.hpp"

namespace sidare {

CostBreakdown running_cost(const Strategy& u, const Trajectory& traj, const CostWeights& w) {
    const TimeGrid& grid = traj.grid;
    if (u.size() != grid.nodes() || traj.states.size() != grid.nodes()) {
        throw UsageError("strategy and trajectory are not on the same grid");
    }
    w.validate();

    double control_sum = 0.0;
    double acute_sum = 0.0;
    const std::size_t last = grid.cells();
    for (std::size_t k = 0; k <= last; ++k) {
        const double weight = (k == 0 || k == last) ? 0.5 : 1.0;
        const double a = traj.states[k].a;
        control_sum += weight * u.u[k] * u.u[k];
        acute_sum += weight * a * a;
    }

    CostBreakdown out;
    out.intervention_cost = 0.5 * grid.step() * control_sum;
    out.symptomatic_cost = w.theta_a * 0.5 * grid.step() * acute_sum;
    out.total = out.intervention_cost + out.symptomatic_cost;
    return out;
}

CostBreakdown total_objective(const Strategy& u, const Trajectory& traj, const CostWeights& w) {
    CostBreakdown out = running_cost(u, traj, w);
    out.death_cost = w.theta_e * traj.final_state().e;
    out.total = out.intervention_cost + out.symptomatic_cost + out.death_cost;
    return out;
}

double normalize_cost(double raw, double basis) {
    if (!(basis > 0.0)) {
        throw DomainError("normalization basis must be positive");
    }
    return 100.0 * raw / basis;
}

CostBreakdown evaluate_strategy(const EpidemicState& x0, const Strategy& u, const ModelParams& p,
                                const TimeGrid& grid, const CostWeights& w) {
    return total_objective(u, integrate_forward(x0, u, p, grid), w);
}

}  // namespace sidare
