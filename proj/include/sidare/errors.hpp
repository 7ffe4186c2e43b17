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

#include <stdexcept>
#include <string>

namespace sidare {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent inputs, e.g. a strategy and a trajectory on different grids.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A state left the admissible simplex by more than the clamping tolerance.
/// Usually means the step is too large.
class IntegrationDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or unknown configuration entries.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A decease target that no weight inside the search bracket can reach.
class BracketError : public std::runtime_error {
public:
    BracketError(const std::string& what, double achievable_low, double achievable_high)
        : std::runtime_error(what), low_(achievable_low), high_(achievable_high) {}

    double achievable_low() const noexcept { return low_; }
    double achievable_high() const noexcept { return high_; }

private:
    double low_;
    double high_;
};

}  // namespace sidare
