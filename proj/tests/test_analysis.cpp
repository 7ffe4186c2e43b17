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
#include <random>

#include "doctest.h"
#include "sidare/analysis.hpp"
#include "sidare/errors.hpp"

using namespace sidare;

TEST_CASE("fatality rate mapping") {
    const ModelParams p;
    // P(acute | infected) = 0.0053 / (1/14 + 0.0053) = 0.06909
    const double acute = 0.0053 / (1.0 / 14.0 + 0.0053);
    const double expected = 0.0066 * (1.0 / 12.4) / (acute - 0.0066);
    CHECK(mu_from_ifr(0.0066, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mu_from_ifr(0.0066, p) == doctest::Approx(0.0085).epsilon(0.02));
    CHECK(mu_from_ifr(0.0, p) == 0.0);
    // Close to linear for small rates: doubling the rate roughly doubles mu.
    const double ratio = mu_from_ifr(0.0133, p) / mu_from_ifr(0.0066, p);
    CHECK(ratio > 1.9);
    CHECK(ratio < 2.3);

    CHECK_THROWS_AS(mu_from_ifr(acute, p), DomainError);
    CHECK_THROWS_AS(mu_from_ifr(-0.01, p), DomainError);

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unit(0.0, acute * 0.99);
    for (int n = 0; n < 200; ++n) {
        const double ifr = unit(rng);
        CHECK(std::abs(ifr_from_mu(mu_from_ifr(ifr, p), p) - ifr) < 1e-9);
    }
    CHECK(ifr_from_mu(0.0085, p) == doctest::Approx(0.00659).epsilon(2e-3));
}

TEST_CASE("perturbed parameters") {
    const ModelParams base;
    const EpidemicState x0 = default_initial_state();
    const ModelParams p = perturbed_params(base, x0, 3.38, 0.0133);
    CHECK(basic_reproduction_number(p, x0.s) == doctest::Approx(3.38).epsilon(1e-12));
    CHECK(p.mu_hat == doctest::Approx(5.0 * p.mu).epsilon(1e-12));
    CHECK(ifr_from_mu(p.mu, p) == doctest::Approx(0.0133).epsilon(1e-12));
    CHECK(p.gamma_a == base.gamma_a);
    CHECK(p.h_bar == base.h_bar);
}

TEST_CASE("uncertainty grid") {
    UncertaintyGrid g;
    CHECK_NOTHROW(g.validate());
    const auto r0 = g.r0_values();
    REQUIRE(r0.size() == 8);
    CHECK(r0.front() == 3.17);
    CHECK(r0.back() == 3.38);
    CHECK(g.ifr_values().back() == 0.0133);

    g.nominal_r0 = 3.5;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = UncertaintyGrid{};
    g.ifr_max = g.ifr_min;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = UncertaintyGrid{};
    g.r0_points = 1;
    CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("frozen-strategy uncertainty sweep") {
    const ModelParams p;
    const EpidemicState x0 = default_initial_state();
    const SweepConfig solver;
    const CostWeights w{0.0, 1600.0};
    const PmpSolution sol = solve(p, x0, w, solver);

    UncertaintyGrid grid;
    grid.r0_points = 3;
    grid.ifr_points = 4;
    const UncertaintyResult res = uncertainty_sweep(p, x0, sol.strategy, w, solver, grid, false, 2);
    REQUIRE(res.records.size() == 12);
    CHECK(res.worst_corner == 11);
    CHECK(res.records[11].r0 == 3.38);
    CHECK(res.records[11].ifr == 0.0133);
    CHECK(res.nominal.e_T == doctest::Approx(0.01).epsilon(0.1));

    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            const auto& r = res.records[a * 4 + b];
            CHECK(r.converged);
            CHECK(r.e_T >= 0.0);
            CHECK(r.e_T <= 1.0);
            if (b > 0) CHECK(r.e_T >= res.records[a * 4 + b - 1].e_T);
            if (a > 0) CHECK(r.e_T >= res.records[(a - 1) * 4 + b].e_T);
        }
    }
    const auto worst = std::max_element(res.records.begin(), res.records.end(),
                                        [](const auto& l, const auto& r) { return l.e_T < r.e_T; });
    CHECK(worst - res.records.begin() == 11);

    const UncertaintyResult serial = uncertainty_sweep(p, x0, sol.strategy, w, solver, grid, false, 1);
    for (std::size_t k = 0; k < res.records.size(); ++k) {
        CHECK(serial.records[k].e_T == res.records[k].e_T);
    }

    CHECK_THROWS_AS(uncertainty_sweep(p, x0, Strategy::constant(TimeGrid(10, 1), 0.0), w, solver, grid),
                    UsageError);
}

TEST_CASE("weight search for a death target") {
    const ModelParams p;
    const EpidemicState x0 = default_initial_state();
    const SweepConfig solver;

    const WeightSearch ws = find_weight_for_tolerance(0.01, p, x0, 0.0, 0.0, 2.5e4, solver);
    CHECK(ws.solution.trajectory.final_state().e == doctest::Approx(0.01).epsilon(0.05));
    CHECK(ws.theta_e > 1000.0);
    CHECK(ws.theta_e < 2500.0);

    // Above the uncontrolled outcome nothing in the bracket can reach it.
    try {
        find_weight_for_tolerance(0.05, p, x0, 0.0, 0.0, 2.5e4, solver);
        FAIL("expected a bracketing error");
    } catch (const BracketError& e) {
        CHECK(e.achievable_high() == doctest::Approx(0.0163).epsilon(0.01));
        CHECK(e.achievable_low() < 1e-3);
    }
    CHECK_THROWS_AS(find_weight_for_tolerance(0.0, p, x0, 0.0, 0.0, 10.0, solver), DomainError);
    CHECK_THROWS_AS(find_weight_for_tolerance(0.01, p, x0, 0.0, 10.0, 5.0, solver), DomainError);
}

TEST_CASE("theta_e grid and scenario checks") {
    const auto te = default_theta_e_grid();
    REQUIRE(te.size() == 41);
    CHECK(te.front() == 0.0);
    CHECK(te[1] == 1.0);
    CHECK(te.back() == 2.5e4);
    for (std::size_t k = 2; k < te.size(); ++k) CHECK(te[k] > te[k - 1]);

    ScenarioGrid g;
    CHECK_NOTHROW(g.validate());
    g.nu = {0.2};
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g.allow_extended = true;
    CHECK_NOTHROW(g.validate());
    g.nu = {};
    CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t k) {
                        if (k == 7) throw UsageError("boom");
                    }),
                    UsageError);
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
}
