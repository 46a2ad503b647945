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

// Node-level readers and writers shared by serialization and experiments.

#include <yaml-cpp/yaml.h>

#include "spinknit/hamiltonian.hpp"
#include "spinknit/schedule.hpp"

namespace spinknit::detail {

void emit_hamiltonian(YAML::Emitter& out, const HamiltonianSpec& spec);
HamiltonianSpec read_hamiltonian(const YAML::Node& node);
void emit_schedule(YAML::Emitter& out, const Schedule& schedule);
Schedule read_schedule(const YAML::Node& node);

}  // namespace spinknit::detail
