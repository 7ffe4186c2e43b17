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

#include <iosfwd>
#include <string>

#include "sidare/discretizer.hpp"
#include "sidare/simulate.hpp"
#include "sidare/types.hpp"

namespace sidare {

/// Strategy file, format version 1:
///
///     # sidare-strategy 1
///     # horizon 365
///     # step 0.1
///     t,u
///     0,0.25
///     ...
///
/// Rows are (time in days, u). Times are strictly increasing, start at 0 and
/// end at the horizon; each value holds until the next row. Numbers are
/// written in shortest round-trip form, so a file read back on the same grid
/// reproduces the strategy exactly.
void write_strategy(std::ostream& out, const Strategy& u, const TimeGrid& grid);

/// Reads a strategy file and samples it on `grid`: node k takes the value of
/// the last row whose time is <= t_k. Throws UsageError on malformed files
/// and DomainError on values outside [0, u_max].
Strategy read_strategy(std::istream& in, const TimeGrid& grid, double u_max);

/// Discrete strategies use the same format with one row per segment start
/// plus a closing row at the horizon.
void write_discrete_strategy(std::ostream& out, const DiscreteStrategy& s, const TimeGrid& grid,
                             const PolicyCatalog& catalog);

/// Inverse of write_discrete_strategy. Row times must be grid nodes and
/// values catalog levels.
DiscreteStrategy read_discrete_strategy(std::istream& in, const TimeGrid& grid,
                                        const PolicyCatalog& catalog);

/// 12 significant digits, as used in every CSV output.
std::string format_csv_number(double v);

/// t,s,i,d,a,r,e per node.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace sidare
