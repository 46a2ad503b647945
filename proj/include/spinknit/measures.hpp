// Copyright 2026 The spinknit Authors
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

// Entanglement and quality metrics. Entropies are in bits.

#include <string>
#include <string_view>

#include "spinknit/state_space.hpp"

namespace spinknit {

enum class MetricKind {
    eof,
    entropy,
    fidelity,
    occupation,
    concurrence,
    success_probability,
    norm_drift,
    energy_drift,
};

std::string_view to_string(MetricKind kind);
/// Inverse of to_string; throws InvalidArgument for unknown names.
MetricKind metric_kind_from_string(std::string_view name);

struct MetricSample {
    double time = 0.0;  // units of t_M
    MetricKind kind = MetricKind::fidelity;
    double value = 0.0;
    std::string site_set;  // e.g. "1,9" or "storage:A,B,C,D"
};

/// How |<ideal|psi>| is turned into a fidelity.
enum class FidelityConvention {
    squared,  // |<a|b>|^2
    root      // |<a|b>|
};

std::string_view to_string(FidelityConvention c);
FidelityConvention fidelity_convention_from_string(std::string_view name);

/// Eigenvalues below this are treated as zero before square roots and logs.
inline constexpr double kEigenvalueClip = 1e-12;

double binary_entropy(double p);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);
double eof_from_concurrence(double c);
double eof(const DensityMatrix& rho);

/// von Neumann entropy -Tr(rho log2 rho).
double entropy(const DensityMatrix& rho);

/// |<a|b>|^2; throws InvalidArgument on a layout mismatch.
double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const PureState& b, FidelityConvention convention);

}  // namespace spinknit
