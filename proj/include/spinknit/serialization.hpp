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

// YAML form of Hamiltonians and schedules, the same dialect as experiment
// configs. Writers emit every array explicitly with round-trip precision, so
// read(write(x)) reproduces x exactly.
//
//   hamiltonian:                      schedule:
//     chain_length: 9                   hamiltonian: {...}
//     j0: 1                             end_time: 1.5
//     couplings: [...]                  events:
//     next_nearest: [...]                 - {time: 0, kind: inject, qubit: q1, end: first}
//     onsite: [...]                       - {time: 0, kind: refocus, qubits: [q1, q2]}
//     gamma: 0                            - {time: 1.5, kind: sample, metrics: [fidelity]}
//
// A Hamiltonian without `couplings` is built from its parameters (PST chain,
// normalization, delta, epsilon and disorder_seed).

#include <string>
#include <string_view>

#include "spinknit/hamiltonian.hpp"
#include "spinknit/schedule.hpp"

namespace spinknit {

std::string_view to_string(Normalization n);
Normalization normalization_from_string(std::string_view name);

std::string to_yaml(const HamiltonianSpec& spec);
std::string to_yaml(const Schedule& schedule);

/// Both throw ConfigError with line and field on malformed input.
HamiltonianSpec hamiltonian_from_yaml(std::string_view text);
Schedule schedule_from_yaml(std::string_view text);

}  // namespace spinknit
