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

// Timed protocol events. Times are in units of the mirror time t_M.
//
// Register naming: the |+> source for qubit q is "aux:q" (attached at its
// injection, released at the refocus), the extraction sink is "store:q"
// (present from t = 0).

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinknit/hamiltonian.hpp"
#include "spinknit/state_space.hpp"

namespace spinknit {

enum class EventKind { extract, inject, refocus, sample };
enum class ChainEnd { first, last };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);
std::string_view to_string(ChainEnd end);
ChainEnd chain_end_from_string(std::string_view name);
inline ChainEnd opposite(ChainEnd e) { return e == ChainEnd::first ? ChainEnd::last : ChainEnd::first; }

/// Bit flags for what a sample event records.
namespace sample_metric {
inline constexpr unsigned fidelity = 1u << 0;
inline constexpr unsigned target_entropy = 1u << 1;  // reduced state of the reference sites
inline constexpr unsigned end_pair = 1u << 2;        // EoF and entropy of sites (1, N)
inline constexpr unsigned occupations = 1u << 3;
inline constexpr unsigned all = fidelity | target_entropy | end_pair | occupations;
}  // namespace sample_metric

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::sample;
    std::string qubit;                       // inject, extract
    ChainEnd end = ChainEnd::first;          // inject, extract
    QubitState state = QubitState::plus();   // inject
    std::vector<std::string> qubits;         // refocus: measures aux:q for each
    unsigned metrics = 0;                    // sample
};

/// Events at equal times run in this order: extract, inject, refocus, sample.
int event_rank(EventKind kind);
bool event_before(const Event& a, const Event& b);

enum class DelayScenario { none, A, B, C, D };
std::string_view to_string(DelayScenario s);
DelayScenario delay_scenario_from_string(std::string_view name);

struct Schedule {
    HamiltonianSpec spec;
    std::vector<Event> events;
    double end_time = 0.0;

    int chain_length() const { return spec.chain_length; }
    /// Logical qubits in injection order.
    std::vector<std::string> qubits() const;
    /// Qubits with an extract event, in event order.
    std::vector<std::string> extracted_qubits() const;
    /// Chain plus one storage register per extracted qubit.
    SystemLayout initial_layout() const;
    Site end_site(ChainEnd end) const;

    /// Throws InvalidArgument on unsorted events, unknown or repeated qubits,
    /// injections without an immediate refocus, or extractions at the wrong end.
    void validate() const;
};

inline std::string aux_register(std::string_view qubit) { return "aux:" + std::string(qubit); }
inline std::string storage_register(std::string_view qubit) { return "store:" + std::string(qubit); }

/// Inserts sample events at `times`, after any protocol events at equal times.
void add_samples(Schedule& schedule, std::span<const double> times, unsigned metrics);
/// `count` evenly spaced times in [start, stop], both ends included.
std::vector<double> uniform_times(double start, double stop, int count);

}  // namespace spinknit
