// Copyright 2026 The quench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace quench {

/// Request exceeds a hard capability limit (state too large for exact
/// methods, dense matrix would not fit, ...). Distinct from bad arguments:
/// the input is meaningful, the implementation refuses it.
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

/// A drive frequency coincides with a motional mode, making a mode-sum
/// denominator singular. Carries the offending mode index (1-based).
struct resonance_error : std::runtime_error {
    resonance_error(const std::string& what, int mode) : std::runtime_error(what), mode_index(mode) {}
    int mode_index;
};

/// A basis cutoff is too small: the requested eigenvectors still have
/// weight at the truncation boundary. Carries the diagnostic weight.
struct truncation_error : std::runtime_error {
    truncation_error(const std::string& what, double weight)
        : std::runtime_error(what), boundary_weight(weight) {}
    double boundary_weight;
};

/// An accuracy target could not be met within the solver's limits.
/// Thrown instead of silently returning a degraded result.
struct accuracy_error : std::runtime_error {
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quench
