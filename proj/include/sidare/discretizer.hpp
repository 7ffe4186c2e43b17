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

#include <cstddef>
#include <functional>
#include <vector>

#include "sidare/model.hpp"
#include "sidare/objective.hpp"
#include "sidare/types.hpp"

namespace sidare {

/// Admissible policy levels, strictly increasing, all within [0, u_max].
class PolicyCatalog {
public:
    PolicyCatalog() = default;
    explicit PolicyCatalog(std::vector<double> levels);

    /// {0, step, 2 step, ..., u_max}; the top level is u_max exactly.
    static PolicyCatalog uniform(double u_max, double step);

    std::size_t size() const noexcept { return levels_.size(); }
    double level(std::size_t index) const { return levels_.at(index); }
    const std::vector<double>& levels() const noexcept { return levels_; }

    /// Index of the nearest level; ties go to the lower level.
    std::size_t nearest(double value) const;
    /// Index of a value that must be a catalog member (within 1e-12).
    std::size_t index_of(double value) const;

    void validate(double u_max) const;

private:
    std::vector<double> levels_;
};

/// Piecewise-constant schedule on a time grid. Switch j happens at grid node
/// switches[j]; segment j covers nodes [switches[j-1], switches[j]) and uses
/// catalog level levels[j]. Node 0 and the horizon node act as sentinels.
struct DiscreteStrategy {
    std::vector<std::size_t> switches;
    std::vector<std::size_t> levels;

    std::size_t switch_count() const noexcept { return switches.size(); }

    /// Distinct catalog indices in use, sorted in decreasing order.
    std::vector<std::size_t> used_levels() const;

    /// Expands to node values. The horizon node takes the last segment's level.
    Strategy to_strategy(const TimeGrid& grid, const PolicyCatalog& catalog) const;

    /// Drops zero-length segments (including a last segment starting at
    /// `horizon_node`) and merges equal neighbouring levels. Never increases
    /// the switch count or the number of distinct levels.
    void normalize(std::size_t horizon_node);

    /// Throws UsageError if the structure is inconsistent with the grid or
    /// catalog (ordering, interior switches, distinct neighbours).
    void validate(const TimeGrid& grid, const PolicyCatalog& catalog) const;

    bool operator==(const DiscreteStrategy&) const = default;
};

struct DiscretizeConfig {
    std::size_t n_levels = 4;
    std::size_t n_switches = 6;
    /// Switch-time perturbation in days; a positive multiple of the grid step.
    double delta = 1.0;
    PolicyCatalog catalog = PolicyCatalog::uniform(0.8, 0.01);
    /// Re-score after each removal when pruning instead of scoring once.
    bool rescore_prune = false;

    void validate(const TimeGrid& grid, double u_max) const;
    std::size_t delta_steps(const TimeGrid& grid) const;
};

/// One accepted local-search move.
struct AcceptedMove {
    double cost;
    std::size_t levels_used;
    std::size_t switches;
};

/// Optional bookkeeping filled in by the local searches.
struct SearchTrace {
    /// Moves accepted on the incumbent, in order.
    std::vector<AcceptedMove> moves;
    /// Accepted moves of every switch-time search run inside the level search,
    /// one entry per run (each run starts from its own candidate).
    std::vector<std::vector<AcceptedMove>> refine_runs;
    std::size_t evaluations = 0;
};

using CostEvaluator = std::function<double(const DiscreteStrategy&)>;

/// Evaluator that simulates a discrete schedule and returns J.
CostEvaluator make_evaluator(const EpidemicState& x0, const ModelParams& p, const TimeGrid& grid,
                             const CostWeights& w, const PolicyCatalog& catalog);

/// Projects a continuous strategy onto n_levels equally spaced targets between
/// its extremes (each snapped to the catalog) and maps every cell to the
/// nearest target, ties to the lower level. Requires n_levels > 1.
DiscreteStrategy project_to_levels(const Strategy& u_cont, const DiscretizeConfig& cfg,
                                   const TimeGrid& grid);

/// Removes surplus switches. Each candidate removal (segment after switch j
/// keeps the level before it) is scored on its own, and the cheapest
/// |T| - max_switches removals are applied together; ties prefer the earlier
/// switch. With `rescore` the cheapest removal is applied one at a time.
DiscreteStrategy prune_switches(const DiscreteStrategy& v_d, std::size_t max_switches,
                                const CostEvaluator& evaluator, bool rescore = false,
                                SearchTrace* trace = nullptr);

struct RefineResult {
    DiscreteStrategy strategy;
    double cost;
};

/// Switch-time local search: moves every switch by +-delta_steps, clamped
/// between its neighbours, keeping a move only if the cost strictly drops.
/// Repeats until a full pass yields no improvement.
RefineResult refine_switch_times(const DiscreteStrategy& u_t, std::size_t delta_steps,
                                 std::size_t horizon_node, const CostEvaluator& evaluator,
                                 SearchTrace* trace = nullptr);

/// Level local search: for each used level (largest first), tries the next
/// lower and next higher catalog level on all its segments, re-optimizes the
/// switch times and keeps strict improvements, until a full sweep over all
/// used levels and both directions yields none.
RefineResult optimize_levels(const DiscreteStrategy& u_bar, const DiscretizeConfig& cfg,
                             const TimeGrid& grid, const CostEvaluator& evaluator,
                             SearchTrace* trace = nullptr);

/// Best constant policy over the whole catalog; ties to the lower level.
RefineResult enumerate_single_policy(const PolicyCatalog& catalog, const CostEvaluator& evaluator);

struct DiscretizeResult {
    DiscreteStrategy projected;
    DiscreteStrategy pruned;
    DiscreteStrategy optimized;
    double projected_cost = 0.0;
    double pruned_cost = 0.0;
    double optimized_cost = 0.0;
    SearchTrace trace;
};

/// Full pipeline: project, prune, then level search (which calls the
/// switch-time search). n_levels == 1 falls back to enumerate_single_policy.
DiscretizeResult discretize(const Strategy& u_cont, const DiscretizeConfig& cfg,
                            const TimeGrid& grid, const CostEvaluator& evaluator);

}  // namespace sidare
