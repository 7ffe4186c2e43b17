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

#include <array>
#include <cstddef>

namespace sidare {

/// Reduced state (s, i, d, a, e). The recovered fraction r is implied by
/// conservation and never carried in vector form.
using Vec5 = std::array<double, 5>;

enum Compartment : std::size_t { kS = 0, kI = 1, kD = 2, kA = 3, kE = 4 };

/// Population fractions of the six SIDARE compartments.
struct EpidemicState {
    double s = 1.0;
    double i = 0.0;
    double d = 0.0;
    double a = 0.0;
    double r = 0.0;
    double e = 0.0;

    Vec5 reduced() const { return {s, i, d, a, e}; }

    /// Builds a full state from (s, i, d, a, e); r = 1 - s - i - d - a - e.
    static EpidemicState from_reduced(const Vec5& x);

    double total() const { return s + i + d + a + r + e; }

    /// Throws DomainError if a compartment is outside [-tol, 1 + tol] or the
    /// total deviates from 1 by more than tol.
    void validate(double tol = 1e-9) const;

    bool operator==(const EpidemicState&) const = default;
};

/// Rates are per day; h_bar and u_max are dimensionless.
struct ModelParams {
    double beta = 0.251;
    double gamma_i = 1.0 / 14.0;
    double gamma_d = 1.0 / 14.0;
    double gamma_a = 1.0 / 12.4;
    double nu = 0.0;
    double xi_i = 0.0053;
    double xi_d = 0.0053;
    double mu = 0.0085;
    double mu_hat = 5.0 * 0.0085;
    double h_bar = 0.00333;
    double u_max = 0.8;

    /// Throws DomainError on negative rates, mu >= mu_hat, h_bar outside
    /// (0, 1) or u_max outside (0, 1].
    void validate() const;
};

/// Onset conditions: 0.001% infected, nobody detected, acute, recovered or dead.
EpidemicState default_initial_state();

/// Deaths per day from the acute compartment. Linear up to the capacity
/// h_bar, then the excess dies at the overload rate mu_hat. The a <= h_bar
/// branch is used at the kink.
double capacity_mortality(double a, const ModelParams& p);

/// Slope of capacity_mortality; returns mu (left branch) at a == h_bar.
double capacity_mortality_slope(double a, const ModelParams& p);

/// Time derivative of (s, i, d, a, e) under intervention u in [0, u_max].
Vec5 vector_field(const EpidemicState& x, double u, const ModelParams& p);

/// Same field evaluated on a reduced vector. No domain checks; used inside
/// integrators where the state is validated per node instead.
Vec5 vector_field_unchecked(const Vec5& x, double u, const ModelParams& p);

/// Recovery inflow gamma_i i + gamma_d d + gamma_a a, i.e. dr/dt.
double recovery_rate(const EpidemicState& x, const ModelParams& p);

/// beta s0 / (gamma_i + xi_i + nu).
double basic_reproduction_number(const ModelParams& p, double s0);

/// Inverse of the reproduction number relation with the testing rate taken
/// as zero at onset: beta = r0 (gamma_i + xi_i) / s0.
double beta_from_r0(double r0, const ModelParams& p, double s0);

enum class Stability { LocallyStable, Unstable, Marginal };

struct EquilibriumClass {
    Stability stability;
    /// (gamma_i + xi_i + nu) / beta; +inf when beta == 0.
    double threshold;
    /// Nontrivial Jacobian eigenvalues at (s*, 0, 0, 0, e*):
    /// -gamma_d - xi_d, -gamma_a - mu, beta s* - gamma_i - xi_i - nu.
    std::array<double, 3> eigenvalues;
};

/// Classifies a disease-free equilibrium with susceptible fraction s_star.
/// With beta == 0 every s_star is below the (infinite) threshold and is
/// reported LocallyStable.
EquilibriumClass classify_equilibrium(double s_star, const ModelParams& p);

}  // namespace sidare
