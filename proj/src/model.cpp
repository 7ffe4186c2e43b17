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

#include "sidare/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sidare/errors.hpp"

namespace sidare {

namespace {

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0)) {
        throw DomainError(std::string("model parameter ") + name + " must be non-negative");
    }
}

}  // namespace

EpidemicState EpidemicState::from_reduced(const Vec5& x) {
    EpidemicState out;
    out.s = x[kS];
    out.i = x[kI];
    out.d = x[kD];
    out.a = x[kA];
    out.e = x[kE];
    out.r = 1.0 - out.s - out.i - out.d - out.a - out.e;
    return out;
}

void EpidemicState::validate(double tol) const {
    const double parts[] = {s, i, d, a, r, e};
    for (double v : parts) {
        if (!(v >= -tol && v <= 1.0 + tol)) {
            throw DomainError("compartment fraction outside [0, 1]: " + std::to_string(v));
        }
    }
    if (std::abs(total() - 1.0) > tol) {
        throw DomainError("compartments do not sum to one");
    }
}

void ModelParams::validate() const {
    require_non_negative(beta, "beta");
    require_non_negative(gamma_i, "gamma_i");
    require_non_negative(gamma_d, "gamma_d");
    require_non_negative(gamma_a, "gamma_a");
    require_non_negative(nu, "nu");
    require_non_negative(xi_i, "xi_i");
    require_non_negative(xi_d, "xi_d");
    require_non_negative(mu, "mu");
    require_non_negative(mu_hat, "mu_hat");
    if (!(mu < mu_hat)) {
        throw DomainError("overload mortality mu_hat must exceed mu");
    }
    if (!(h_bar > 0.0 && h_bar < 1.0)) {
        throw DomainError("healthcare capacity h_bar must lie in (0, 1)");
    }
    if (!(u_max > 0.0 && u_max <= 1.0)) {
        throw DomainError("control bound u_max must lie in (0, 1]");
    }
}

EpidemicState default_initial_state() {
    return EpidemicState::from_reduced({1.0 - 1e-5, 1e-5, 0.0, 0.0, 0.0});
}

double capacity_mortality(double a, const ModelParams& p) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw DomainError("acute fraction outside [0, 1]");
    }
    if (a <= p.h_bar) {
        return p.mu * a;
    }
    return p.mu * p.h_bar + p.mu_hat * (a - p.h_bar);
}

double capacity_mortality_slope(double a, const ModelParams& p) {
    return a <= p.h_bar ? p.mu : p.mu_hat;
}

Vec5 vector_field_unchecked(const Vec5& x, double u, const ModelParams& p) {
    const double s = x[kS];
    const double i = x[kI];
    const double d = x[kD];
    const double a = x[kA];
    const double infection = p.beta * (1.0 - u) * s * i;
    const double deaths = a <= p.h_bar ? p.mu * a : p.mu * p.h_bar + p.mu_hat * (a - p.h_bar);
    return {
        -infection,
        infection - (p.gamma_i + p.xi_i + p.nu) * i,
        p.nu * i - (p.gamma_d + p.xi_d) * d,
        p.xi_i * i + p.xi_d * d - p.gamma_a * a - deaths,
        deaths,
    };
}

Vec5 vector_field(const EpidemicState& x, double u, const ModelParams& p) {
    if (!(u >= 0.0 && u <= p.u_max)) {
        throw DomainError("control outside [0, u_max]");
    }
    x.validate();
    return vector_field_unchecked(x.reduced(), u, p);
}

double recovery_rate(const EpidemicState& x, const ModelParams& p) {
    return p.gamma_i * x.i + p.gamma_d * x.d + p.gamma_a * x.a;
}

double basic_reproduction_number(const ModelParams& p, double s0) {
    const double outflow = p.gamma_i + p.xi_i + p.nu;
    if (!(outflow > 0.0)) {
        throw DomainError("gamma_i + xi_i + nu must be positive");
    }
    return p.beta * s0 / outflow;
}

double beta_from_r0(double r0, const ModelParams& p, double s0) {
    if (!(r0 > 0.0) || !(s0 > 0.0)) {
        throw DomainError("r0 and s0 must be positive");
    }
    return r0 * (p.gamma_i + p.xi_i) / s0;
}

EquilibriumClass classify_equilibrium(double s_star, const ModelParams& p) {
    if (!(s_star >= 0.0 && s_star <= 1.0)) {
        throw DomainError("s_star outside [0, 1]");
    }
    const double outflow = p.gamma_i + p.xi_i + p.nu;
    EquilibriumClass out{};
    out.threshold = p.beta > 0.0 ? outflow / p.beta : std::numeric_limits<double>::infinity();
    out.eigenvalues = {-p.gamma_d - p.xi_d, -p.gamma_a - p.mu, p.beta * s_star - outflow};
    if (s_star < out.threshold) {
        out.stability = Stability::LocallyStable;
    } else if (s_star > out.threshold) {
        out.stability = Stability::Unstable;
    } else {
        out.stability = Stability::Marginal;
    }
    return out;
}

}  // namespace sidare
