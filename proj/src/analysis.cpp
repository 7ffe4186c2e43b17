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

#include "sidare/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

#include "sidare/errors.hpp"
#include "sidare/simulate.hpp"

namespace sidare {

double cost_on_axis(const CostBreakdown& c, CostAxis axis) {
    return axis == CostAxis::Running ? c.running() : c.intervention_cost;
}

std::vector<double> default_theta_e_grid(std::size_t points, double max) {
    if (points < 2 || !(max > 1.0)) {
        throw UsageError("theta_e grid needs at least two points and max > 1");
    }
    std::vector<double> out{0.0};
    const double log_max = std::log10(max);
    for (std::size_t k = 0; k < points; ++k) {
        const double exponent = log_max * static_cast<double>(k) / static_cast<double>(points - 1);
        out.push_back(k + 1 == points ? max : std::pow(10.0, exponent));
    }
    return out;
}

namespace {

void check_list(const std::vector<double>& values, const char* name, double lo, double hi,
                bool extended) {
    if (values.empty()) {
        throw ConfigError(std::string("frontier list '") + name + "' is empty");
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError(std::string("frontier list '") + name + "' has a negative value");
        }
        if (!extended && (v < lo - 1e-12 || v > hi + 1e-12)) {
            std::ostringstream msg;
            msg << "frontier value " << v << " for '" << name << "' is outside [" << lo << ", "
                << hi << "]; set allow_extended to use it";
            throw ConfigError(msg.str());
        }
    }
}

double peak_acute(const Trajectory& traj) {
    double peak = 0.0;
    for (const auto& x : traj.states) {
        peak = std::max(peak, x.a);
    }
    return peak;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    if (n > 1) {
        out.back() = hi;
    }
    return out;
}

}  // namespace

void ScenarioGrid::validate() const {
    check_list(nu, "nu", 0.0, 0.10, allow_extended);
    check_list(h_bar, "h_bar", 0.00222, 0.00444, allow_extended);
    check_list(theta_a, "theta_a", 0.0, 1e5, allow_extended);
    check_list(theta_e, "theta_e", 0.0, 2.5e4, allow_extended);
    for (double h : h_bar) {
        if (!(h > 0.0 && h < 1.0)) {
            throw ConfigError("frontier h_bar values must lie in (0, 1)");
        }
    }
}

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("SIDARE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
    workers = std::min(std::max<std::size_t>(workers, 1), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            task(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count && !failed; k = next++) {
                try {
                    task(k);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

WeightSearch find_weight_for_tolerance(double target_e, const ModelParams& p,
                                       const EpidemicState& x0, double theta_a, double lo,
                                       double hi, const SweepConfig& solver) {
    if (!(target_e > 0.0 && target_e < 1.0)) {
        throw DomainError("target death fraction must lie in (0, 1)");
    }
    if (!(lo >= 0.0 && hi > lo)) {
        throw DomainError("theta_e bracket must satisfy 0 <= lo < hi");
    }
    constexpr double kRelTol = 0.05;
    auto close = [&](double e) { return std::abs(e - target_e) < kRelTol * target_e; };

    WeightSearch out;
    auto run = [&](double theta_e) {
        ++out.solves;
        return solve(p, x0, CostWeights{theta_a, theta_e}, solver);
    };

    PmpSolution at_lo = run(lo);
    const double e_lo = at_lo.trajectory.final_state().e;
    if (close(e_lo)) {
        out.theta_e = lo;
        out.solution = std::move(at_lo);
        return out;
    }
    PmpSolution at_hi = run(hi);
    const double e_hi = at_hi.trajectory.final_state().e;
    if (close(e_hi)) {
        out.theta_e = hi;
        out.solution = std::move(at_hi);
        return out;
    }
    if (target_e > e_lo || target_e < e_hi) {
        std::ostringstream msg;
        msg << "target e(T) = " << target_e << " is outside the achievable range [" << e_hi
            << ", " << e_lo << "] for theta_e in [" << lo << ", " << hi << "]";
        throw BracketError(msg.str(), e_hi, e_lo);
    }

    // Keep the candidate nearest to the target in case the bracket closes first.
    double best_theta = std::abs(e_lo - target_e) <= std::abs(e_hi - target_e) ? lo : hi;
    PmpSolution best = best_theta == lo ? std::move(at_lo) : std::move(at_hi);
    double best_gap = std::abs(best.trajectory.final_state().e - target_e);

    while (hi - lo >= 1.0) {
        const double mid = 0.5 * (lo + hi);
        PmpSolution at_mid = run(mid);
        const double e_mid = at_mid.trajectory.final_state().e;
        const double gap = std::abs(e_mid - target_e);
        const bool done = close(e_mid);
        if (gap < best_gap) {
            best_gap = gap;
            best_theta = mid;
            best = std::move(at_mid);
        }
        if (done) {
            break;
        }
        // e(T) falls as theta_e grows.
        if (e_mid > target_e) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.theta_e = best_theta;
    out.solution = std::move(best);
    return out;
}

FrontierResult frontier(const ModelParams& base, const EpidemicState& x0, const SweepConfig& solver,
                        const FrontierSettings& settings) {
    const ScenarioGrid& g = settings.grid;
    g.validate();
    base.validate();
    solver.validate();
    const std::size_t workers = resolve_workers(settings.threads);

    FrontierResult result;
    result.records.resize(g.cell_count());
    std::size_t k = 0;
    for (double nu : g.nu) {
        for (double h : g.h_bar) {
            for (double ta : g.theta_a) {
                for (double te : g.theta_e) {
                    FrontierRecord& r = result.records[k++];
                    r.nu = nu;
                    r.h_bar = h;
                    r.theta_a = ta;
                    r.theta_e = te;
                }
            }
        }
    }

    parallel_for(result.records.size(), workers, [&](std::size_t c) {
        FrontierRecord& r = result.records[c];
        ModelParams p = base;
        p.nu = r.nu;
        p.h_bar = r.h_bar;
        try {
            PmpSolution sol = solve(p, x0, CostWeights{r.theta_a, r.theta_e}, solver);
            r.cost = cost_on_axis(sol.cost, settings.axis);
            r.e_T = sol.trajectory.final_state().e;
            r.peak_a = peak_acute(sol.trajectory);
            r.converged = sol.converged;
            r.iterations = sol.iterations;
        } catch (const std::exception& ex) {
            r.converged = false;
            r.note = ex.what();
        }
    });

    // Basis per (h_bar, theta_a): cost of the no-testing strategy that meets
    // the basis tolerance.
    std::vector<std::pair<double, double>> pairs;
    for (double h : g.h_bar) {
        for (double ta : g.theta_a) {
            pairs.emplace_back(h, ta);
        }
    }
    const double theta_max = std::max(2.5e4, *std::max_element(g.theta_e.begin(), g.theta_e.end()));
    std::vector<double> bases(pairs.size(), std::numeric_limits<double>::quiet_NaN());
    parallel_for(pairs.size(), workers, [&](std::size_t c) {
        ModelParams p = base;
        p.nu = 0.0;
        p.h_bar = pairs[c].first;
        try {
            WeightSearch ws = find_weight_for_tolerance(settings.basis_tolerance, p, x0,
                                                        pairs[c].second, 0.0, theta_max, solver);
            bases[c] = cost_on_axis(ws.solution.cost, settings.axis);
        } catch (const BracketError&) {
            // Fall back below to the grid cell nearest the tolerance.
        }
    });

    for (std::size_t c = 0; c < pairs.size(); ++c) {
        if (!std::isnan(bases[c])) {
            continue;
        }
        double best_gap = std::numeric_limits<double>::infinity();
        for (const auto& r : result.records) {
            if (r.nu == 0.0 && r.h_bar == pairs[c].first && r.theta_a == pairs[c].second &&
                r.note.empty()) {
                const double gap = std::abs(r.e_T - settings.basis_tolerance);
                if (gap < best_gap) {
                    best_gap = gap;
                    bases[c] = r.cost;
                }
            }
        }
        if (std::isnan(bases[c])) {
            ModelParams p = base;
            p.nu = 0.0;
            p.h_bar = pairs[c].first;
            bases[c] = cost_on_axis(solve(p, x0, CostWeights{pairs[c].second, theta_max}, solver).cost,
                                    settings.axis);
        }
    }

    for (auto& r : result.records) {
        const auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(r.h_bar, r.theta_a));
        r.basis = bases[static_cast<std::size_t>(it - pairs.begin())];
        if (r.basis > 0.0 && r.note.empty()) {
            r.normalized_cost = normalize_cost(r.cost, r.basis);
        }
    }
    return result;
}

double mu_from_ifr(double ifr, const ModelParams& p) {
    if (!(ifr >= 0.0 && ifr < 1.0)) {
        throw DomainError("infection fatality rate must lie in [0, 1)");
    }
    const double acute = p.xi_i / (p.gamma_i + p.xi_i);
    if (ifr >= acute) {
        std::ostringstream msg;
        msg << "infection fatality rate " << ifr << " needs P(death | acute) >= 1 (limit "
            << acute << ")";
        throw DomainError(msg.str());
    }
    return ifr * p.gamma_a / (acute - ifr);
}

double ifr_from_mu(double mu, const ModelParams& p) {
    if (!(mu >= 0.0)) {
        throw DomainError("mortality rate must be non-negative");
    }
    return p.xi_i / (p.gamma_i + p.xi_i) * mu / (p.gamma_a + mu);
}

void UncertaintyGrid::validate() const {
    if (!(r0_min > 0.0 && r0_max > r0_min)) {
        throw ConfigError("uncertainty r0 range must satisfy 0 < min < max");
    }
    if (!(ifr_min > 0.0 && ifr_max > ifr_min && ifr_max < 1.0)) {
        throw ConfigError("uncertainty ifr range must satisfy 0 < min < max < 1");
    }
    if (r0_points < 2 || ifr_points < 2) {
        throw ConfigError("uncertainty grid needs at least two points per axis");
    }
    if (nominal_r0 < r0_min || nominal_r0 > r0_max || nominal_ifr < ifr_min ||
        nominal_ifr > ifr_max) {
        throw ConfigError("nominal (r0, ifr) must lie inside the uncertainty ranges");
    }
}

std::vector<double> UncertaintyGrid::r0_values() const { return linspace(r0_min, r0_max, r0_points); }

std::vector<double> UncertaintyGrid::ifr_values() const {
    return linspace(ifr_min, ifr_max, ifr_points);
}

ModelParams perturbed_params(const ModelParams& base, const EpidemicState& x0, double r0,
                             double ifr) {
    ModelParams p = base;
    p.beta = beta_from_r0(r0, base, x0.s);
    const double ratio = base.mu > 0.0 ? base.mu_hat / base.mu : 5.0;
    p.mu = mu_from_ifr(ifr, base);
    p.mu_hat = ratio * p.mu;
    return p;
}

UncertaintyResult uncertainty_sweep(const ModelParams& base, const EpidemicState& x0,
                                    const Strategy& frozen, const CostWeights& w,
                                    const SweepConfig& solver, const UncertaintyGrid& grid,
                                    bool reoptimize, std::size_t threads) {
    grid.validate();
    base.validate();
    w.validate();
    if (!reoptimize && frozen.size() != solver.grid.nodes()) {
        throw UsageError("frozen strategy does not match the grid");
    }

    auto evaluate = [&](UncertaintyRecord& r) {
        try {
            const ModelParams p = perturbed_params(base, x0, r.r0, r.ifr);
            r.beta = p.beta;
            r.mu = p.mu;
            if (reoptimize) {
                PmpSolution sol = solve(p, x0, w, solver);
                r.e_T = sol.trajectory.final_state().e;
                r.peak_a = peak_acute(sol.trajectory);
                r.cost = sol.cost.total;
                r.converged = sol.converged;
            } else {
                const Trajectory traj = integrate_forward(x0, frozen, p, solver.grid);
                r.e_T = traj.final_state().e;
                r.peak_a = peak_acute(traj);
                r.cost = total_objective(frozen, traj, w).total;
            }
        } catch (const std::exception& ex) {
            r.converged = false;
            r.note = ex.what();
        }
    };

    UncertaintyResult result;
    const auto r0s = grid.r0_values();
    const auto ifrs = grid.ifr_values();
    for (double r0 : r0s) {
        for (double ifr : ifrs) {
            UncertaintyRecord r;
            r.r0 = r0;
            r.ifr = ifr;
            result.records.push_back(r);
        }
    }
    result.worst_corner = result.records.size() - 1;
    result.nominal.r0 = grid.nominal_r0;
    result.nominal.ifr = grid.nominal_ifr;

    parallel_for(result.records.size() + 1, resolve_workers(threads), [&](std::size_t k) {
        evaluate(k < result.records.size() ? result.records[k] : result.nominal);
    });
    return result;
}

}  // namespace sidare
