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

#include "sidare/pmp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "sidare/errors.hpp"

namespace sidare {

void SweepConfig::validate() const {
    if (max_iterations < 1) {
        throw ConfigError("sweep max_iterations must be at least 1");
    }
    if (!(convergence_tol > 0.0)) {
        throw ConfigError("sweep convergence_tol must be positive");
    }
    if (!(damping >= 0.0 && damping < 1.0)) {
        throw ConfigError("sweep damping must lie in [0, 1)");
    }
    if (!(polish_band >= 0.0)) {
        throw ConfigError("sweep polish_band must be non-negative");
    }
    for (double f : extra_start_fractions) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw ConfigError("sweep start fractions must lie in [0, 1]");
        }
    }
}

double clamp_control(const Vec5& lambda, const EpidemicState& x, const ModelParams& p) {
    const double unconstrained = p.beta * x.s * x.i * (lambda[kI] - lambda[kS]);
    return std::clamp(unconstrained, 0.0, p.u_max);
}

namespace {

constexpr double kScaleFloor = 1e-6;
constexpr double kMinStep = 1e-9;

/// One forward/backward evaluation of a candidate strategy.
struct Iterate {
    Strategy u;
    Trajectory traj;
    Costate costate;
    Strategy proposal;
    double cost = 0.0;
    double residual = 0.0;   ///< max |proposal - u|
    double relative = 0.0;   ///< residual / max(|proposal|_inf, floor)
};

Iterate evaluate(Strategy u, const ModelParams& p, const EpidemicState& x0, const CostWeights& w,
                 const TimeGrid& grid) {
    Iterate it;
    it.traj = integrate_forward(x0, u, p, grid);
    it.costate = integrate_costate_backward(it.traj, u, p, w);
    it.cost = total_objective(u, it.traj, w).total;
    it.proposal.u.resize(u.size());
    double scale = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double target = clamp_control(it.costate.lambdas[k], it.traj.states[k], p);
        it.proposal.u[k] = target;
        it.residual = std::max(it.residual, std::abs(target - u.u[k]));
        scale = std::max(scale, target);
    }
    it.relative = it.residual / std::max(scale, kScaleFloor);
    it.u = std::move(u);
    return it;
}

Strategy blend(const Iterate& cur, double step, double u_max) {
    Strategy next = cur.u;
    for (std::size_t k = 0; k < next.u.size(); ++k) {
        next.u[k] = std::clamp(cur.u.u[k] + step * (cur.proposal.u[k] - cur.u.u[k]), 0.0, u_max);
    }
    return next;
}

PmpSolution finish(Iterate&& cur, const CostWeights& w, std::size_t iterations, bool converged) {
    PmpSolution sol;
    sol.cost = total_objective(cur.u, cur.traj, w);
    sol.residual = cur.residual;
    sol.iterations = iterations;
    sol.converged = converged;
    sol.strategy = std::move(cur.u);
    sol.trajectory = std::move(cur.traj);
    sol.costate = std::move(cur.costate);
    return sol;
}

PmpSolution plain_sweep(Iterate cur, const ModelParams& p, const EpidemicState& x0,
                        const CostWeights& w, const SweepConfig& cfg) {
    std::size_t iter = 0;
    bool converged = false;
    while (iter < cfg.max_iterations) {
        ++iter;
        Strategy next = blend(cur, 1.0 - cfg.damping, p.u_max);
        double change = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < next.u.size(); ++k) {
            change = std::max(change, std::abs(next.u[k] - cur.u.u[k]));
            scale = std::max(scale, next.u[k]);
        }
        cur = evaluate(std::move(next), p, x0, w, cfg.grid);
        if (change / std::max(scale, kScaleFloor) < cfg.convergence_tol) {
            converged = true;
            break;
        }
    }
    return finish(std::move(cur), w, iter, converged);
}

PmpSolution safeguarded_sweep(Iterate cur, const ModelParams& p, const EpidemicState& x0,
                              const CostWeights& w, const SweepConfig& cfg) {
    const double initial_step = 1.0 - cfg.damping;
    double step = initial_step;
    bool polishing = false;
    double anchor = 0.0;
    bool stalled = false;
    std::size_t iter = 0;

    while (iter < cfg.max_iterations && cur.relative >= cfg.convergence_tol) {
        ++iter;
        bool moved = false;
        while (step >= kMinStep) {
            Iterate cand = evaluate(blend(cur, step, p.u_max), p, x0, w, cfg.grid);
            const bool accept = polishing
                                    ? (cand.residual < cur.residual &&
                                       cand.cost <= anchor + cfg.polish_band * std::abs(anchor))
                                    : cand.cost < cur.cost;
            if (accept) {
                cur = std::move(cand);
                step = std::min(1.0, 1.5 * step);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (moved) {
            continue;
        }
        if (!polishing) {
            polishing = true;
            anchor = cur.cost;
            step = initial_step;
            continue;
        }
        stalled = true;
        break;
    }

    const bool converged = cur.relative < cfg.convergence_tol ||
                           (stalled && cur.residual < 10.0 * cfg.convergence_tol);
    return finish(std::move(cur), w, iter, converged);
}

}  // namespace

PmpSolution solve_from(const ModelParams& p, const EpidemicState& x0, const CostWeights& w,
                       const SweepConfig& cfg, Strategy initial) {
    p.validate();
    w.validate();
    cfg.validate();
    if (initial.size() != cfg.grid.nodes()) {
        throw UsageError("initial strategy does not match the sweep grid");
    }
    Iterate start = evaluate(std::move(initial), p, x0, w, cfg.grid);
    return cfg.safeguard ? safeguarded_sweep(std::move(start), p, x0, w, cfg)
                         : plain_sweep(std::move(start), p, x0, w, cfg);
}

PmpSolution solve(const ModelParams& p, const EpidemicState& x0, const CostWeights& w,
                  const SweepConfig& cfg) {
    PmpSolution best = solve_from(p, x0, w, cfg, Strategy::constant(cfg.grid, 0.0));
    for (double fraction : cfg.extra_start_fractions) {
        PmpSolution other =
            solve_from(p, x0, w, cfg, Strategy::constant(cfg.grid, fraction * p.u_max));
        if (other.cost.total < best.cost.total) {
            best = std::move(other);
        }
    }
    return best;
}

double pmp_residual(const PmpSolution& sol, const ModelParams& p) {
    const TimeGrid& grid = sol.trajectory.grid;
    if (sol.strategy.size() != grid.nodes() || sol.costate.lambdas.size() != grid.nodes() ||
        sol.trajectory.states.size() != grid.nodes()) {
        throw UsageError("solution components are not on the same grid");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        const double target = clamp_control(sol.costate.lambdas[k], sol.trajectory.states[k], p);
        worst = std::max(worst, std::abs(sol.strategy.u[k] - target));
    }
    return worst;
}

}  // namespace sidare
