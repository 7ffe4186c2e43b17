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

#include "sidare/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "sidare/errors.hpp"

namespace sidare {

PolicyCatalog::PolicyCatalog(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) {
        throw UsageError("policy catalog is empty");
    }
    for (std::size_t k = 1; k < levels_.size(); ++k) {
        if (!(levels_[k] > levels_[k - 1])) {
            throw UsageError("policy catalog levels must be strictly increasing");
        }
    }
}

PolicyCatalog PolicyCatalog::uniform(double u_max, double step) {
    if (!(step > 0.0) || !(u_max > 0.0)) {
        throw UsageError("uniform catalog needs positive u_max and step");
    }
    std::vector<double> levels;
    const auto count = static_cast<std::size_t>(std::floor(u_max / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) {
        levels.push_back(std::min(u_max, static_cast<double>(k) * step));
    }
    if (u_max - levels.back() > 1e-12) {
        levels.push_back(u_max);
    } else {
        levels.back() = u_max;
    }
    return PolicyCatalog(std::move(levels));
}

std::size_t PolicyCatalog::nearest(double value) const {
    if (levels_.empty()) {
        throw UsageError("policy catalog is empty");
    }
    std::size_t best = 0;
    double best_gap = std::abs(levels_[0] - value);
    for (std::size_t k = 1; k < levels_.size(); ++k) {
        const double gap = std::abs(levels_[k] - value);
        if (gap < best_gap) {
            best = k;
            best_gap = gap;
        }
    }
    return best;
}

std::size_t PolicyCatalog::index_of(double value) const {
    const std::size_t k = nearest(value);
    if (std::abs(levels_[k] - value) > 1e-12) {
        throw UsageError("value is not a catalog level");
    }
    return k;
}

void PolicyCatalog::validate(double u_max) const {
    if (levels_.empty()) {
        throw ConfigError("policy catalog is empty");
    }
    if (levels_.front() < 0.0 || levels_.back() > u_max) {
        throw ConfigError("policy catalog levels must lie in [0, u_max]");
    }
}

std::vector<std::size_t> DiscreteStrategy::used_levels() const {
    std::set<std::size_t> seen(levels.begin(), levels.end());
    return {seen.rbegin(), seen.rend()};
}

Strategy DiscreteStrategy::to_strategy(const TimeGrid& grid, const PolicyCatalog& catalog) const {
    Strategy out;
    out.u.resize(grid.nodes());
    std::size_t segment = 0;
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        while (segment < switches.size() && k >= switches[segment]) {
            ++segment;
        }
        out.u[k] = catalog.level(levels[segment]);
    }
    return out;
}

void DiscreteStrategy::normalize(std::size_t horizon_node) {
    std::vector<std::size_t> starts;
    starts.reserve(levels.size());
    starts.push_back(0);
    starts.insert(starts.end(), switches.begin(), switches.end());

    std::vector<std::size_t> kept_starts;
    std::vector<std::size_t> kept_levels;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const std::size_t end = j + 1 < starts.size() ? starts[j + 1] : horizon_node;
        if (end <= starts[j] && levels.size() > 1) {
            continue;
        }
        if (!kept_levels.empty() && kept_levels.back() == levels[j]) {
            continue;
        }
        kept_starts.push_back(kept_starts.empty() ? 0 : starts[j]);
        kept_levels.push_back(levels[j]);
    }
    if (kept_levels.empty()) {
        kept_starts.push_back(0);
        kept_levels.push_back(levels.back());
    }
    switches.assign(kept_starts.begin() + 1, kept_starts.end());
    levels = std::move(kept_levels);
}

void DiscreteStrategy::validate(const TimeGrid& grid, const PolicyCatalog& catalog) const {
    if (levels.size() != switches.size() + 1) {
        throw UsageError("discrete strategy needs one more level than switches");
    }
    for (std::size_t j = 0; j < switches.size(); ++j) {
        if (switches[j] == 0 || switches[j] >= grid.cells()) {
            throw UsageError("switch times must be interior grid nodes");
        }
        if (j > 0 && switches[j] <= switches[j - 1]) {
            throw UsageError("switch times must be strictly increasing");
        }
    }
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j] >= catalog.size()) {
            throw UsageError("level index outside the policy catalog");
        }
        if (j > 0 && levels[j] == levels[j - 1]) {
            throw UsageError("adjacent segments must use different levels");
        }
    }
}

void DiscretizeConfig::validate(const TimeGrid& grid, double u_max) const {
    if (n_levels < 1) {
        throw ConfigError("discretize needs at least one policy level");
    }
    catalog.validate(u_max);
    if (n_levels > 1 && catalog.size() < 2) {
        throw ConfigError("more than one policy level needs a catalog with two or more levels");
    }
    (void)delta_steps(grid);
}

std::size_t DiscretizeConfig::delta_steps(const TimeGrid& grid) const {
    if (!(delta > 0.0)) {
        throw ConfigError("switch perturbation delta must be positive");
    }
    const double ratio = delta / grid.step();
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6) {
        throw ConfigError("switch perturbation delta must be a multiple of the grid step");
    }
    return static_cast<std::size_t>(rounded);
}

CostEvaluator make_evaluator(const EpidemicState& x0, const ModelParams& p, const TimeGrid& grid,
                             const CostWeights& w, const PolicyCatalog& catalog) {
    return [x0, p, grid, w, catalog](const DiscreteStrategy& s) {
        return evaluate_strategy(x0, s.to_strategy(grid, catalog), p, grid, w).total;
    };
}

DiscreteStrategy project_to_levels(const Strategy& u_cont, const DiscretizeConfig& cfg,
                                   const TimeGrid& grid) {
    if (u_cont.u.empty()) {
        throw UsageError("cannot project an empty strategy");
    }
    if (u_cont.size() != grid.nodes()) {
        throw UsageError("strategy does not match the grid");
    }
    if (cfg.n_levels < 2) {
        throw UsageError("projection needs at least two levels; use enumerate_single_policy");
    }
    const auto [lo_it, hi_it] = std::minmax_element(u_cont.u.begin(), u_cont.u.end());
    const double u_lo = *lo_it;
    const double u_hi = *hi_it;

    std::set<std::size_t> targets;
    for (std::size_t i = 0; i < cfg.n_levels; ++i) {
        const double value =
            u_lo + static_cast<double>(i) * (u_hi - u_lo) / static_cast<double>(cfg.n_levels - 1);
        targets.insert(cfg.catalog.nearest(value));
    }

    auto nearest_target = [&](double value) {
        std::size_t best = *targets.begin();
        double best_gap = std::abs(cfg.catalog.level(best) - value);
        for (std::size_t t : targets) {
            const double gap = std::abs(cfg.catalog.level(t) - value);
            if (gap < best_gap) {
                best = t;
                best_gap = gap;
            }
        }
        return best;
    };

    DiscreteStrategy out;
    out.levels.push_back(nearest_target(u_cont.u[0]));
    for (std::size_t k = 1; k < grid.cells(); ++k) {
        const std::size_t level = nearest_target(u_cont.u[k]);
        if (level != out.levels.back()) {
            out.switches.push_back(k);
            out.levels.push_back(level);
        }
    }
    return out;
}

namespace {

DiscreteStrategy without_switches(const DiscreteStrategy& v, std::vector<std::size_t> removed,
                                  std::size_t horizon_node) {
    DiscreteStrategy out = v;
    std::sort(removed.begin(), removed.end(), std::greater<>());
    for (std::size_t j : removed) {
        out.switches.erase(out.switches.begin() + static_cast<std::ptrdiff_t>(j));
        out.levels.erase(out.levels.begin() + static_cast<std::ptrdiff_t>(j + 1));
    }
    out.normalize(horizon_node);
    return out;
}

std::size_t horizon_of(const DiscreteStrategy& v) {
    // Switches are interior, so any node past the last one works as a sentinel
    // for normalization of removals (which never create empty trailing segments).
    return v.switches.empty() ? 1 : v.switches.back() + 1;
}

AcceptedMove move_of(const DiscreteStrategy& s, double cost) {
    return {cost, s.used_levels().size(), s.switch_count()};
}

}  // namespace

DiscreteStrategy prune_switches(const DiscreteStrategy& v_d, std::size_t max_switches,
                                const CostEvaluator& evaluator, bool rescore, SearchTrace* trace) {
    auto evaluate = [&](const DiscreteStrategy& s) {
        if (trace) {
            ++trace->evaluations;
        }
        return evaluator(s);
    };

    DiscreteStrategy current = v_d;
    while (current.switch_count() > max_switches) {
        const std::size_t horizon = horizon_of(current);
        std::vector<std::pair<double, std::size_t>> scored;
        scored.reserve(current.switch_count());
        for (std::size_t j = 0; j < current.switch_count(); ++j) {
            scored.emplace_back(evaluate(without_switches(current, {j}, horizon)), j);
        }
        // Stable sort keeps earlier switches first among equal costs.
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        const std::size_t surplus = current.switch_count() - max_switches;
        const std::size_t take = rescore ? 1 : surplus;
        std::vector<std::size_t> removed;
        for (std::size_t q = 0; q < take; ++q) {
            removed.push_back(scored[q].second);
        }
        current = without_switches(current, removed, horizon);
        if (!rescore) {
            break;
        }
    }
    return current;
}

RefineResult refine_switch_times(const DiscreteStrategy& u_t, std::size_t delta_steps,
                                 std::size_t horizon_node, const CostEvaluator& evaluator,
                                 SearchTrace* trace) {
    auto evaluate = [&](const DiscreteStrategy& s) {
        if (trace) {
            ++trace->evaluations;
        }
        return evaluator(s);
    };

    RefineResult best{u_t, evaluate(u_t)};
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t k = 0; k < best.strategy.switch_count(); ++k) {
            for (int direction = 1; direction <= 2; ++direction) {
                if (k >= best.strategy.switch_count()) {
                    break;
                }
                const auto& sw = best.strategy.switches;
                const std::size_t lower = k == 0 ? 0 : sw[k - 1];
                const std::size_t upper = k + 1 < sw.size() ? sw[k + 1] : horizon_node;
                const std::size_t t = sw[k];
                // Earlier move: the following level takes over [t - delta, t).
                // Later move: the preceding level extends over [t, t + delta).
                const std::size_t moved = direction == 1
                                              ? (t > lower + delta_steps ? t - delta_steps : lower)
                                              : std::min(t + delta_steps, upper);
                if (moved == t) {
                    continue;
                }
                DiscreteStrategy candidate = best.strategy;
                candidate.switches[k] = moved;
                candidate.normalize(horizon_node);
                const double cost = evaluate(candidate);
                if (cost < best.cost) {
                    best = {std::move(candidate), cost};
                    improved = true;
                    if (trace) {
                        trace->moves.push_back(move_of(best.strategy, cost));
                    }
                }
            }
        }
    }
    return best;
}

RefineResult optimize_levels(const DiscreteStrategy& u_bar, const DiscretizeConfig& cfg,
                             const TimeGrid& grid, const CostEvaluator& evaluator,
                             SearchTrace* trace) {
    const std::size_t delta = cfg.delta_steps(grid);
    const std::size_t horizon = grid.cells();
    const std::size_t top = cfg.catalog.size() - 1;

    RefineResult best{u_bar, evaluator(u_bar)};
    if (trace) {
        ++trace->evaluations;
    }

    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t m = 0; m < best.strategy.used_levels().size(); ++m) {
            for (int direction = 1; direction <= 2; ++direction) {
                const auto used = best.strategy.used_levels();
                if (m >= used.size()) {
                    break;
                }
                const std::size_t from = used[m];
                const std::size_t to =
                    direction == 1 ? (from == 0 ? 0 : from - 1) : std::min(from + 1, top);
                if (to == from) {
                    continue;
                }
                DiscreteStrategy candidate = best.strategy;
                std::replace(candidate.levels.begin(), candidate.levels.end(), from, to);
                candidate.normalize(horizon);

                SearchTrace inner;
                RefineResult refined =
                    refine_switch_times(candidate, delta, horizon, evaluator, trace ? &inner : nullptr);
                if (trace) {
                    trace->evaluations += inner.evaluations;
                    trace->refine_runs.push_back(std::move(inner.moves));
                }
                if (refined.cost < best.cost) {
                    best = std::move(refined);
                    improved = true;
                    if (trace) {
                        trace->moves.push_back(move_of(best.strategy, best.cost));
                    }
                }
            }
        }
    }
    return best;
}

RefineResult enumerate_single_policy(const PolicyCatalog& catalog, const CostEvaluator& evaluator) {
    if (catalog.size() == 0) {
        throw UsageError("policy catalog is empty");
    }
    RefineResult best{DiscreteStrategy{{}, {0}}, 0.0};
    best.cost = evaluator(best.strategy);
    for (std::size_t k = 1; k < catalog.size(); ++k) {
        DiscreteStrategy candidate{{}, {k}};
        const double cost = evaluator(candidate);
        if (cost < best.cost) {
            best = {std::move(candidate), cost};
        }
    }
    return best;
}

DiscretizeResult discretize(const Strategy& u_cont, const DiscretizeConfig& cfg,
                            const TimeGrid& grid, const CostEvaluator& evaluator) {
    DiscretizeResult out;
    if (cfg.n_levels == 1) {
        RefineResult single = enumerate_single_policy(cfg.catalog, evaluator);
        out.trace.evaluations = cfg.catalog.size();
        out.projected = out.pruned = out.optimized = single.strategy;
        out.projected_cost = out.pruned_cost = out.optimized_cost = single.cost;
        return out;
    }

    out.projected = project_to_levels(u_cont, cfg, grid);
    out.projected_cost = evaluator(out.projected);
    out.pruned = prune_switches(out.projected, cfg.n_switches, evaluator, cfg.rescore_prune, &out.trace);
    out.pruned_cost = out.pruned == out.projected ? out.projected_cost : evaluator(out.pruned);
    out.trace.evaluations += 2;

    RefineResult optimized = optimize_levels(out.pruned, cfg, grid, evaluator, &out.trace);
    out.optimized = std::move(optimized.strategy);
    out.optimized_cost = optimized.cost;
    return out;
}

}  // namespace sidare
