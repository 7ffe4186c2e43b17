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

#include "sidare/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sidare/errors.hpp"

namespace sidare {

TimeGrid::TimeGrid(double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0)) {
        throw DomainError("time grid needs a positive horizon and step");
    }
    const double ratio = horizon / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0) {
        throw DomainError("horizon must be an integer multiple of the step");
    }
    horizon_ = horizon;
    step_ = step;
    cells_ = static_cast<std::size_t>(rounded);
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = t / step_;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-6 || rounded < 0.0 || rounded > static_cast<double>(cells_)) {
        std::ostringstream msg;
        msg << "time " << t << " is not a node of the grid";
        throw DomainError(msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

void CostWeights::validate() const {
    if (!(theta_a >= 0.0) || !(theta_e >= 0.0)) {
        throw DomainError("cost weights must be non-negative");
    }
}

namespace {

Vec5 axpy(const Vec5& x, double h, const Vec5& k) {
    return {x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2], x[3] + h * k[3], x[4] + h * k[4]};
}

Vec5 rk4_combine(const Vec5& x, double h, const Vec5& k1, const Vec5& k2, const Vec5& k3,
                 const Vec5& k4) {
    Vec5 out;
    for (std::size_t c = 0; c < 5; ++c) {
        out[c] = x[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    return out;
}

double clamp_component(double v, std::size_t node) {
    if (v < 0.0) {
        if (v < -kClampTolerance) {
            std::ostringstream msg;
            msg << "integration diverged at node " << node << " (value " << v
                << "); reduce the step";
            throw IntegrationDiverged(msg.str());
        }
        return 0.0;
    }
    if (v > 1.0) {
        if (v > 1.0 + kClampTolerance) {
            std::ostringstream msg;
            msg << "integration diverged at node " << node << " (value " << v
                << "); reduce the step";
            throw IntegrationDiverged(msg.str());
        }
        return 1.0;
    }
    return v;
}

void check_strategy(const Strategy& u, const ModelParams& p, const TimeGrid& grid) {
    if (u.size() != grid.nodes()) {
        throw UsageError("strategy length does not match the time grid");
    }
    for (double v : u.u) {
        if (!(v >= 0.0 && v <= p.u_max)) {
            throw DomainError("strategy value outside [0, u_max]");
        }
    }
}

Vec5 costate_rate_with_slope(const Vec5& x, const Vec5& lambda, double u, const ModelParams& p,
                              const CostWeights& w, double slope) {
    const double s = x[kS];
    const double i = x[kI];
    const double a = x[kA];
    const double b = p.beta * (1.0 - u);
    const double spread = lambda[kI] - lambda[kS];

    // dH/dx, with H = u^2/2 + theta_a a^2/2 + lambda . f(x, u)
    const double h_s = b * i * spread;
    const double h_i = b * s * spread - (p.gamma_i + p.xi_i + p.nu) * lambda[kI] +
                       p.nu * lambda[kD] + p.xi_i * lambda[kA];
    const double h_d = -(p.gamma_d + p.xi_d) * lambda[kD] + p.xi_d * lambda[kA];
    const double h_a = w.theta_a * a - p.gamma_a * lambda[kA] + slope * (lambda[kE] - lambda[kA]);
    return {-h_s, -h_i, -h_d, -h_a, 0.0};
}

// Cubic Hermite state on one cell, parameterized by tau in [0, 1].
struct CellInterpolant {
    Vec5 left;
    Vec5 right;
    Vec5 f_left;
    Vec5 f_right;
    double h;

    CellInterpolant(const Vec5& l, const Vec5& r, double u, const ModelParams& p, double step)
        : left(l), right(r), f_left(vector_field_unchecked(l, u, p)),
          f_right(vector_field_unchecked(r, u, p)), h(step) {}

    Vec5 at(double tau) const {
        const double t2 = tau * tau;
        const double t3 = t2 * tau;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + tau;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        Vec5 x;
        for (std::size_t c = 0; c < 5; ++c) {
            x[c] = h00 * left[c] + h10 * h * f_left[c] + h01 * right[c] + h11 * h * f_right[c];
        }
        return x;
    }

    // Root of a(tau) = level, given a sign change between the endpoints.
    double crossing(double level) const {
        double lo = 0.0;
        double hi = 1.0;
        const bool rising = left[kA] < level;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((at(mid)[kA] < level) == rising) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
};

// One backward RK4 step from tau1 down to tau0.
Vec5 costate_substep(const CellInterpolant& cell, const Vec5& lambda, double tau0, double tau1,
                     double u, const ModelParams& p, const CostWeights& w, double slope) {
    const double dt = (tau1 - tau0) * cell.h;
    if (dt <= 0.0) {
        return lambda;
    }
    const Vec5 x_hi = tau1 == 1.0 ? cell.right : cell.at(tau1);
    const Vec5 x_mid = cell.at(0.5 * (tau0 + tau1));
    const Vec5 x_lo = tau0 == 0.0 ? cell.left : cell.at(tau0);
    const Vec5 k1 = costate_rate_with_slope(x_hi, lambda, u, p, w, slope);
    const Vec5 k2 = costate_rate_with_slope(x_mid, axpy(lambda, -0.5 * dt, k1), u, p, w, slope);
    const Vec5 k3 = costate_rate_with_slope(x_mid, axpy(lambda, -0.5 * dt, k2), u, p, w, slope);
    const Vec5 k4 = costate_rate_with_slope(x_lo, axpy(lambda, -dt, k3), u, p, w, slope);
    return rk4_combine(lambda, -dt, k1, k2, k3, k4);
}

// Field with the mortality branch fixed: the capacity formula on one side of
// h_bar, continued linearly across it.
Vec5 branch_field(const Vec5& x, double u, const ModelParams& p, bool overloaded) {
    Vec5 f = vector_field_unchecked(x, u, p);
    const double a = x[kA];
    const double deaths = overloaded ? p.mu * p.h_bar + p.mu_hat * (a - p.h_bar) : p.mu * a;
    const double natural = f[kE];
    f[kA] += natural - deaths;
    f[kE] = deaths;
    return f;
}

Vec5 rk4_step(const Vec5& x, double h, double u, const ModelParams& p, bool overloaded) {
    const Vec5 k1 = branch_field(x, u, p, overloaded);
    const Vec5 k2 = branch_field(axpy(x, 0.5 * h, k1), u, p, overloaded);
    const Vec5 k3 = branch_field(axpy(x, 0.5 * h, k2), u, p, overloaded);
    const Vec5 k4 = branch_field(axpy(x, h, k3), u, p, overloaded);
    return rk4_combine(x, h, k1, k2, k3, k4);
}

// One forward cell. If a crosses h_bar, the cell is split at the crossing so
// that neither piece integrates across the kink in the mortality term.
Vec5 forward_cell(const Vec5& x, double h, double u, const ModelParams& p) {
    const bool over_left = x[kA] > p.h_bar;
    Vec5 next = rk4_step(x, h, u, p, over_left);
    if ((next[kA] > p.h_bar) == over_left) {
        return next;
    }
    const CellInterpolant cell{x, next, u, p, h};
    const double cross = cell.crossing(p.h_bar);
    const Vec5 mid = rk4_step(x, cross * h, u, p, over_left);
    return rk4_step(mid, (1.0 - cross) * h, u, p, !over_left);
}

}  // namespace

Trajectory integrate_forward(const EpidemicState& x0, const Strategy& u, const ModelParams& p,
                             const TimeGrid& grid) {
    x0.validate();
    check_strategy(u, p, grid);

    Trajectory traj{grid, {}};
    traj.states.reserve(grid.nodes());
    traj.states.push_back(x0);

    const double h = grid.step();
    Vec5 x = x0.reduced();
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        x = forward_cell(x, h, u.u[k], p);
        for (double& c : x) {
            c = clamp_component(c, k + 1);
        }
        EpidemicState next = EpidemicState::from_reduced(x);
        next.r = clamp_component(next.r, k + 1);
        traj.states.push_back(next);
    }
    return traj;
}

Vec5 costate_rate(const Vec5& x, const Vec5& lambda, double u, const ModelParams& p,
                  const CostWeights& w) {
    return costate_rate_with_slope(x, lambda, u, p, w, capacity_mortality_slope(x[kA], p));
}

Costate integrate_costate_backward(const Trajectory& traj, const Strategy& u, const ModelParams& p,
                                   const CostWeights& w) {
    const TimeGrid& grid = traj.grid;
    if (traj.states.size() != grid.nodes() || u.size() != grid.nodes()) {
        throw UsageError("trajectory and strategy are not on the same grid");
    }

    Costate out{grid, std::vector<Vec5>(grid.nodes())};
    const double h = grid.step();
    Vec5 lambda{0.0, 0.0, 0.0, 0.0, w.theta_e};
    out.lambdas[grid.cells()] = lambda;

    for (std::size_t k = grid.cells(); k-- > 0;) {
        const double uk = u.u[k];
        const CellInterpolant cell{traj.states[k].reduced(), traj.states[k + 1].reduced(), uk, p, h};
        const double a_left = cell.left[kA] - p.h_bar;
        const double a_right = cell.right[kA] - p.h_bar;
        if ((a_left < 0.0) != (a_right < 0.0) && a_left != 0.0 && a_right != 0.0) {
            // The mortality slope jumps where a crosses h_bar; integrate each
            // side separately so RK4 never steps across the jump.
            const double cross = cell.crossing(p.h_bar);
            lambda = costate_substep(cell, lambda, cross, 1.0, uk, p, w,
                                     capacity_mortality_slope(cell.right[kA], p));
            lambda = costate_substep(cell, lambda, 0.0, cross, uk, p, w,
                                     capacity_mortality_slope(cell.left[kA], p));
        } else {
            const double slope = capacity_mortality_slope(cell.at(0.5)[kA], p);
            lambda = costate_substep(cell, lambda, 0.0, 1.0, uk, p, w, slope);
        }
        out.lambdas[k] = lambda;
    }
    return out;
}

}  // namespace sidare
