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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sidare/errors.hpp"
#include "sidare/pmp_solver.hpp"

using namespace sidare;

TEST_CASE("pointwise control minimizer") {
    const ModelParams p;
    const EpidemicState x{0.6, 0.1, 0, 0, 0.3, 0};
    // beta s i = 0.01506
    CHECK(clamp_control({10, 30, 0, 0, 0}, x, p) == doctest::Approx(0.01506 * 20).epsilon(1e-12));
    CHECK(clamp_control({30, 10, 0, 0, 0}, x, p) == 0.0);
    CHECK(clamp_control({0, 1e4, 0, 0, 0}, x, p) == p.u_max);
}

TEST_CASE("zero weights give no intervention") {
    const ModelParams p;
    const SweepConfig cfg;
    const PmpSolution sol = solve(p, default_initial_state(), CostWeights{}, cfg);
    CHECK(sol.converged);
    CHECK(*std::max_element(sol.strategy.u.begin(), sol.strategy.u.end()) == 0.0);
    CHECK(sol.cost.total == 0.0);
}

TEST_CASE("reference scenario converges to a fixed point") {
    const ModelParams p;
    const SweepConfig cfg;
    const CostWeights w{0.0, 1600.0};
    const PmpSolution sol = solve(p, default_initial_state(), w, cfg);
    CHECK(sol.converged);
    CHECK(pmp_residual(sol, p) < 1e-3);
    CHECK(sol.residual == doctest::Approx(pmp_residual(sol, p)));
    const Vec5 terminal{0, 0, 0, 0, 1600.0};
    CHECK(sol.costate.lambdas.back() == terminal);
    CHECK(sol.trajectory.final_state().e == doctest::Approx(0.01).epsilon(0.3));
    for (double v : sol.strategy.u) {
        CHECK(v >= 0.0);
        CHECK(v <= p.u_max);
    }

    // Same control on a grid with half the step: lambda(0) must agree.
    const TimeGrid fine(365.0, 0.05);
    Strategy u_fine = Strategy::constant(fine, 0.0);
    for (std::size_t k = 0; k < fine.nodes(); ++k) u_fine.u[k] = sol.strategy.u[k / 2];
    const Trajectory traj_fine = integrate_forward(default_initial_state(), u_fine, p, fine);
    const Costate lam_fine = integrate_costate_backward(traj_fine, u_fine, p, w);
    for (std::size_t c = 0; c < 5; ++c) {
        CHECK(sol.costate.lambdas.front()[c] ==
              doctest::Approx(lam_fine.lambdas.front()[c]).epsilon(1e-4));
    }
}

TEST_CASE("every start ends no better than the multi-start result") {
    const ModelParams p;
    const SweepConfig cfg;
    const CostWeights w{0.0, 1600.0};
    const EpidemicState x0 = default_initial_state();
    const PmpSolution best = solve(p, x0, w, cfg);
    for (double f : {0.0, 1.0}) {
        const PmpSolution one = solve_from(p, x0, w, cfg, Strategy::constant(cfg.grid, f * p.u_max));
        CHECK(best.cost.total <= one.cost.total);
    }
}

TEST_CASE("deaths fall as the death weight rises") {
    const ModelParams p;
    const SweepConfig cfg;
    double previous = 1.0;
    for (double te : {200.0, 800.0, 1600.0, 3200.0}) {
        const double e = solve(p, default_initial_state(), CostWeights{0.0, te}, cfg).trajectory.final_state().e;
        CHECK(e <= previous);
        previous = e;
    }
}

TEST_CASE("plain damped sweep reports non-convergence without throwing") {
    const ModelParams p;
    SweepConfig cfg;
    cfg.safeguard = false;
    cfg.max_iterations = 5;
    const PmpSolution sol = solve_from(p, default_initial_state(), CostWeights{0.0, 1600.0}, cfg,
                                       Strategy::constant(cfg.grid, 0.0));
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 5);
}

TEST_CASE("sweep configuration checks") {
    const ModelParams p;
    const EpidemicState x0 = default_initial_state();
    SweepConfig cfg;
    cfg.damping = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SweepConfig{};
    cfg.convergence_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SweepConfig{};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SweepConfig{};
    cfg.extra_start_fractions = {1.5};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = SweepConfig{};
    CHECK_THROWS_AS(solve_from(p, x0, CostWeights{}, cfg, Strategy::constant(TimeGrid(10, 1), 0.0)), UsageError);
    CHECK_THROWS_AS(solve(p, x0, CostWeights{-1.0, 0.0}, cfg), DomainError);
}
