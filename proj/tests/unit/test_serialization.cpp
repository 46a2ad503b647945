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

#include <doctest.h>

#include <string>

#include "spinknit/error.hpp"
#include "spinknit/protocol.hpp"
#include "spinknit/serialization.hpp"

using namespace spinknit;

namespace {

void check_same(const HamiltonianSpec& a, const HamiltonianSpec& b) {
    CHECK(a.chain_length == b.chain_length);
    CHECK(a.couplings.j0 == b.couplings.j0);
    CHECK(a.couplings.nearest == b.couplings.nearest);
    CHECK(a.couplings.next_nearest == b.couplings.next_nearest);
    CHECK(a.onsite == b.onsite);
    CHECK(a.gamma == b.gamma);
    CHECK(a.fingerprint() == b.fingerprint());
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("hamiltonian round-trip is exact") {
    const auto spec = HamiltonianSpec::perturbed(13, 0.05, 0.1, 0.02, 77);
    check_same(hamiltonian_from_yaml(to_yaml(spec)), spec);
    check_same(hamiltonian_from_yaml(to_yaml(HamiltonianSpec::pst(5))), HamiltonianSpec::pst(5));
}

TEST_CASE("hamiltonian from parameters") {
    const auto spec = hamiltonian_from_yaml(
        "chain_length: 9\n"
        "epsilon: 0.1\n"
        "disorder_seed: 3\n"
        "normalization: max_coupling\n");
    check_same(spec, HamiltonianSpec::perturbed(9, 0.1, 0.0, 0.0, 3));
    CHECK(hamiltonian_from_yaml("chain_length: 9").fingerprint() == HamiltonianSpec::pst(9).fingerprint());
}

TEST_CASE("schedule round-trip runs identically") {
    BuildOptions b;
    b.readout = false;
    Schedule s = build_crossed_square(9, DelayScenario::C, 0.05, b);
    s.events[0].state = QubitState{{0.6, 0.0}, {0.0, 0.8}};
    const Schedule back = schedule_from_yaml(to_yaml(s));
    REQUIRE(back.events.size() == s.events.size());
    for (std::size_t k = 0; k < s.events.size(); ++k) {
        CHECK(back.events[k].time == s.events[k].time);
        CHECK(back.events[k].kind == s.events[k].kind);
        CHECK(back.events[k].qubit == s.events[k].qubit);
        CHECK(back.events[k].qubits == s.events[k].qubits);
        CHECK(back.events[k].metrics == s.events[k].metrics);
        CHECK(back.events[k].state.one == s.events[k].state.one);
    }
    CHECK(to_yaml(back) == to_yaml(s));
    const Schedule ladder = build_ladder(13, 2);
    CHECK(run(schedule_from_yaml(to_yaml(ladder))).value_at(MetricKind::fidelity, 2.0) ==
          run(ladder).value_at(MetricKind::fidelity, 2.0));
}

TEST_CASE("diagnostics name line and field") {
    auto message = [](const std::string& text) -> std::string {
        try {
            schedule_from_yaml(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    const std::string base =
        "hamiltonian: {chain_length: 9}\n"
        "end_time: 1\n"
        "events:\n";
    CHECK(message(base + "  - {time: 0, kind: teleport}\n").find("line 4") != std::string::npos);
    CHECK(message(base + "  - {time: 0, kind: inject, qubit: q1, end: first, colour: red}\n").find("colour") !=
          std::string::npos);
    CHECK(message(base + "  - {time: 0, kind: inject, qubit: q1, end: first}\n").find("refocus") !=
          std::string::npos);
    CHECK(message("end_time: 1\nevents: []\n").find("hamiltonian") != std::string::npos);
    CHECK(message("hamiltonian: {chain_length: nine}\nend_time: 1\nevents: []\n").find("chain_length") !=
          std::string::npos);
    CHECK(message("events: [\n").find("line") != std::string::npos);
    CHECK_THROWS_AS(hamiltonian_from_yaml("chain_length: 9\nonsite: [1, 2]\n"), ConfigError);
}

}  // TEST_SUITE
