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

// Knitting protocol: build schedules and execute them.
//
// Qubits are labelled q1, q2, ... in injection order; odd labels enter at
// site 1, even labels at site N. Every injection is followed at the same
// instant by a refocus measurement of its source register.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinknit/ideal_oracle.hpp"
#include "spinknit/measures.hpp"
#include "spinknit/propagator.hpp"
#include "spinknit/schedule.hpp"

namespace spinknit {

struct BuildOptions {
    /// Extract the last pair into storage when it reaches the ends.
    bool readout = true;
    /// Sample fidelity (and the other metrics) at the arrival of the last pair.
    bool sample_at_arrival = true;
};

/// Two injection rounds (0 and 1/2) and their extractions (1 and 3/2), with
/// the delay scenario applied: A delays q3 and q4, B delays q4, C delays q2
/// and q4, D delays q1 and q4, each by `delay` (t_M units).
Schedule build_crossed_square(const HamiltonianSpec& spec, DelayScenario scenario = DelayScenario::none,
                              double delay = 0.0, BuildOptions options = {});
Schedule build_crossed_square(int n, DelayScenario scenario = DelayScenario::none, double delay = 0.0,
                              BuildOptions options = {});

/// rounds + 1 injection rounds at 0, 1/2, ...; each pair is extracted one
/// mirror time after its injection. rounds = 1 is the crossed square.
Schedule build_ladder(const HamiltonianSpec& spec, int rounds, BuildOptions options = {});
Schedule build_ladder(int n, int rounds, BuildOptions options = {});

enum class BranchPolicy {
    post_select,  // follow the all-zero refocus outcome; record the rest
    sampled       // draw outcomes from a seeded generator
};

struct RunOptions {
    BranchPolicy policy = BranchPolicy::post_select;
    std::uint64_t seed = 0;
    FidelityConvention fidelity = FidelityConvention::root;
    /// Record norm and energy drift over every free-evolution segment.
    bool track_conservation = true;
    PropagatorOptions propagator;
    /// Optional shared propagator store (must outlive the run).
    PropagatorCache* cache = nullptr;
};

struct RefocusRecord {
    double time = 0.0;
    std::vector<std::string> qubits;
    /// Joint outcome probabilities; bit k of the index is the outcome of qubits[k].
    std::vector<double> probabilities;
    int outcome = 0;
};

enum class RunStatus { completed, aborted };

struct RunRecord {
    RunStatus status = RunStatus::completed;
    std::string abort_reason;
    std::vector<RefocusRecord> refocus;
    /// Product of the followed branch probabilities.
    double success_probability = 1.0;
    std::vector<MetricSample> samples;
    double max_norm_drift = 0.0;
    double max_energy_drift = 0.0;
    /// Schedule as executed (differs from the input after a (1,1) reset).
    Schedule realized;
    std::optional<IdealReference> reference;
    PureState final_state{SystemLayout(2)};

    /// Samples of one kind (optionally one site set), in time order.
    std::vector<MetricSample> series(MetricKind kind, std::string_view site_set = {}) const;
    /// Value of the sample of `kind` nearest to `time`; throws if none.
    double value_at(MetricKind kind, double time, std::string_view site_set = {}) const;
};

RunRecord run(const Schedule& schedule, const RunOptions& options = {});

/// Probability of the all-zero outcome at the t_M/2 refocus of the crossed square.
double injection_success_probability(int n, const RunOptions& options = {});
double injection_success_probability(const HamiltonianSpec& spec, const RunOptions& options = {});

/// Columns: time, metric_kind, site_set, value.
void write_csv(const RunRecord& record, std::ostream& out);
void write_json(const RunRecord& record, std::ostream& out);

/// Printf-style "%.12g".
std::string format_number(double value);

}  // namespace spinknit
