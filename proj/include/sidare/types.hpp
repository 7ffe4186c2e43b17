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
#include <vector>

namespace sidare {

/// Uniform time grid on [0, horizon] with node spacing `step` (days).
class TimeGrid {
public:
    TimeGrid() = default;

    /// Throws DomainError unless horizon > 0, step > 0 and horizon / step is
    /// an integer within 1e-9.
    TimeGrid(double horizon, double step);

    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return step_; }
    std::size_t nodes() const noexcept { return cells_ + 1; }
    std::size_t cells() const noexcept { return cells_; }
    double time(std::size_t k) const noexcept {
        return static_cast<double>(k) * horizon_ / static_cast<double>(cells_);
    }

    /// Node index for a time that must lie on the grid (within 1e-6 of a step).
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid& other) const noexcept {
        return cells_ == other.cells_ && horizon_ == other.horizon_ && step_ == other.step_;
    }

private:
    double horizon_ = 365.0;
    double step_ = 0.1;
    std::size_t cells_ = 3650;
};

/// Intervention signal sampled at grid nodes. The value at node k holds on
/// the whole cell [t_k, t_{k+1}); the final node value only enters quadrature.
struct Strategy {
    std::vector<double> u;

    static Strategy constant(const TimeGrid& grid, double value) {
        return Strategy{std::vector<double>(grid.nodes(), value)};
    }

    std::size_t size() const noexcept { return u.size(); }
    bool operator==(const Strategy&) const = default;
};

/// Weights on the acute-burden integral (theta_a) and terminal deaths (theta_e).
struct CostWeights {
    double theta_a = 0.0;
    double theta_e = 0.0;

    void validate() const;
};

}  // namespace sidare
