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

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "sidare/errors.hpp"
#include "sidare/model.hpp"

using namespace sidare;

namespace {

EpidemicState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double w[6];
    double total = 0.0;
    for (double& v : w) {
        v = unit(rng);
        total += v;
    }
    EpidemicState x{w[0] / total, w[1] / total, w[2] / total, w[3] / total, 0.0, w[5] / total};
    x.r = 1.0 - x.s - x.i - x.d - x.a - x.e;
    return x;
}

}  // namespace

TEST_CASE("capacity mortality branches") {
    const ModelParams p;
    CHECK(capacity_mortality(0.0, p) == 0.0);
    // Both branches give mu * h_bar at the kink.
    CHECK(capacity_mortality(p.h_bar, p) == doctest::Approx(0.0085 * 0.00333).epsilon(1e-14));
    CHECK(p.mu * p.h_bar + p.mu_hat * (p.h_bar - p.h_bar) == doctest::Approx(capacity_mortality(p.h_bar, p)));
    // 0.00333 * (0.0085 + 0.0425)
    CHECK(capacity_mortality(2.0 * 0.00333, p) == doctest::Approx(1.6983e-4).epsilon(1e-12));
    CHECK_THROWS_AS(capacity_mortality(-1e-3, p), DomainError);
    CHECK_THROWS_AS(capacity_mortality(1.5, p), DomainError);
}

TEST_CASE("capacity mortality is monotone and mu_hat-Lipschitz") {
    const ModelParams p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 0.02);
    for (int n = 0; n < 1000; ++n) {
        const double a1 = unit(rng);
        const double a2 = unit(rng);
        const double lo = std::min(a1, a2);
        const double hi = std::max(a1, a2);
        CHECK(capacity_mortality(lo, p) <= capacity_mortality(hi, p));
        CHECK(std::abs(capacity_mortality(a1, p) - capacity_mortality(a2, p)) <=
              p.mu_hat * std::abs(a1 - a2) + 1e-18);
    }
}

TEST_CASE("vector field reference values") {
    const ModelParams p;
    SUBCASE("disease-free state is at rest") {
        const Vec5 f = vector_field(EpidemicState{1, 0, 0, 0, 0, 0}, 0.3, p);
        for (double v : f) {
            CHECK(v == 0.0);
        }
    }
    SUBCASE("full suppression stops infection") {
        ModelParams q = p;
        q.u_max = 1.0;
        const Vec5 f = vector_field(EpidemicState{0.6, 0.3, 0.05, 0.05, 0, 0}, 1.0, q);
        CHECK(f[kS] == 0.0);
    }
    SUBCASE("hand-evaluated early outbreak") {
        const Vec5 f = vector_field(EpidemicState{0.99, 0.01, 0, 0, 0, 0}, 0.0, p);
        const double infection = 0.251 * 0.99 * 0.01;
        CHECK(f[kS] == doctest::Approx(-2.48490e-3).epsilon(1e-12));
        CHECK(f[kS] == doctest::Approx(-infection));
        CHECK(f[kI] == doctest::Approx(infection - (1.0 / 14.0 + 0.0053) * 0.01).epsilon(1e-12));
        CHECK(f[kI] == doctest::Approx(1.718e-3).epsilon(1e-3));
    }
    SUBCASE("control outside the admissible set") {
        CHECK_THROWS_AS(vector_field(default_initial_state(), -0.1, p), DomainError);
        CHECK_THROWS_AS(vector_field(default_initial_state(), 0.81, p), DomainError);
    }
}

TEST_CASE("vector field conserves population") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ModelParams p;
    p.nu = 0.05;
    for (int n = 0; n < 500; ++n) {
        const EpidemicState x = random_state(rng);
        const double u = unit(rng) * p.u_max;
        const Vec5 f = vector_field(x, u, p);
        const double sum = f[kS] + f[kI] + f[kD] + f[kA] + f[kE] + recovery_rate(x, p);
        CHECK(std::abs(sum) < 1e-14);
    }
}

TEST_CASE("empty compartments do not flow negative") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ModelParams p;
    p.nu = 0.1;
    for (int n = 0; n < 200; ++n) {
        for (std::size_t c = 0; c < 5; ++c) {
            EpidemicState x = random_state(rng);
            double* fields[] = {&x.s, &x.i, &x.d, &x.a, &x.e};
            x.r += *fields[c];
            *fields[c] = 0.0;
            const Vec5 f = vector_field(x, unit(rng) * p.u_max, p);
            CHECK(f[c] >= 0.0);
        }
        EpidemicState x = random_state(rng);
        x.s += x.r;
        x.r = 0.0;
        CHECK(recovery_rate(x, p) >= 0.0);
    }
}

TEST_CASE("points without infection are equilibria") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ModelParams p;
    for (int n = 0; n < 100; ++n) {
        const double s = unit(rng);
        const double e = unit(rng) * (1.0 - s);
        const EpidemicState x{s, 0, 0, 0, 1.0 - s - e, e};
        for (double v : vector_field(x, unit(rng) * p.u_max, p)) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("basic reproduction number") {
    ModelParams p;
    const double s0 = 1.0 - 1e-5;
    CHECK(basic_reproduction_number(p, s0) == doctest::Approx(3.27).epsilon(0.005));
    CHECK(basic_reproduction_number(p, s0) == doctest::Approx(0.251 * s0 / (1.0 / 14.0 + 0.0053)));

    p.nu = 0.10;
    CHECK(basic_reproduction_number(p, 1.0) == doctest::Approx(1.420).epsilon(1e-3));

    p.beta = 0.0;
    CHECK(basic_reproduction_number(p, s0) == 0.0);

    ModelParams closed;
    closed.gamma_i = 0.0;
    closed.xi_i = 0.0;
    closed.nu = 0.0;
    CHECK_THROWS_AS(basic_reproduction_number(closed, s0), DomainError);
}

TEST_CASE("beta from reproduction number") {
    ModelParams p;
    const double s0 = 1.0 - 1e-5;
    CHECK(beta_from_r0(3.27, p, s0) == doctest::Approx(0.251).epsilon(1e-3));
    CHECK(beta_from_r0(3.38, p, s0) == doctest::Approx(0.2594).epsilon(1e-3));

    p.beta = beta_from_r0(3.38, p, s0);
    CHECK(std::abs(basic_reproduction_number(p, s0) - 3.38) < 1e-12);

    // beta equal to the outflow rate at s0 = 1 means r0 = 1.
    CHECK(beta_from_r0(1.0, p, 1.0) == doctest::Approx(p.gamma_i + p.xi_i).epsilon(1e-15));

    // Testing rate is ignored.
    ModelParams tested = p;
    tested.nu = 0.1;
    CHECK(beta_from_r0(3.0, tested, s0) == beta_from_r0(3.0, p, s0));

    CHECK_THROWS_AS(beta_from_r0(0.0, p, s0), DomainError);
    CHECK_THROWS_AS(beta_from_r0(3.0, p, 0.0), DomainError);
}

TEST_CASE("equilibrium classification") {
    ModelParams p;
    const double threshold = (p.gamma_i + p.xi_i + p.nu) / p.beta;

    const EquilibriumClass onset = classify_equilibrium(1.0, p);
    CHECK(onset.stability == Stability::Unstable);
    CHECK(onset.threshold == doctest::Approx(0.306).epsilon(2e-3));
    CHECK(onset.eigenvalues[0] == doctest::Approx(-(1.0 / 14.0 + 0.0053)));
    CHECK(onset.eigenvalues[1] == doctest::Approx(-(1.0 / 12.4 + 0.0085)));
    CHECK(onset.eigenvalues[2] == doctest::Approx(0.251 - (1.0 / 14.0 + 0.0053)));

    CHECK(classify_equilibrium(0.2, p).stability == Stability::LocallyStable);
    CHECK(classify_equilibrium(threshold, p).stability == Stability::Marginal);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const double s = unit(rng);
        const double growth = p.beta * s - p.gamma_i - p.xi_i - p.nu;
        const Stability expected = growth < 0.0 ? Stability::LocallyStable : Stability::Unstable;
        CHECK(classify_equilibrium(s, p).stability == expected);
    }

    ModelParams inert;
    inert.beta = 0.0;
    const EquilibriumClass c = classify_equilibrium(1.0, inert);
    CHECK(c.stability == Stability::LocallyStable);
    CHECK(std::isinf(c.threshold));

    CHECK_THROWS_AS(classify_equilibrium(1.2, p), DomainError);
}

TEST_CASE("parameter and state validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());

    ModelParams bad = p;
    bad.mu_hat = bad.mu;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = p;
    bad.u_max = 1.2;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = p;
    bad.h_bar = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = p;
    bad.gamma_a = -0.1;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    const EpidemicState x0 = default_initial_state();
    CHECK(x0.s == 1.0 - 1e-5);
    CHECK(x0.i == 1e-5);
    CHECK(x0.total() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_NOTHROW(x0.validate());
    CHECK_THROWS_AS((EpidemicState{0.5, 0.6, 0, 0, -0.1, 0}.validate()), DomainError);
    CHECK_THROWS_AS((EpidemicState{0.5, 0.1, 0, 0, 0, 0}.validate()), DomainError);

    const EpidemicState round = EpidemicState::from_reduced({0.5, 0.1, 0.05, 0.02, 0.03});
    CHECK(round.r == doctest::Approx(0.3));
}
