# Copyright 2026 The spinknit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import spinknit


def test_gate_matches_ideal():
    for n in (5, 9, 12):
        g = spinknit.effective_gate(spinknit.Hamiltonian.pst(n))
        assert g.shape == (4, 4)
        assert np.max(np.abs(g - spinknit.ideal_gate(n))) < 1e-10


def test_hamiltonian_yaml_round_trip():
    h = spinknit.Hamiltonian.perturbed(9, epsilon=0.05, gamma=0.1, delta=0.02, seed=7)
    back = spinknit.Hamiltonian.from_yaml(h.to_yaml())
    assert back.chain_length == 9
    assert back.onsite == h.onsite
    assert back.nearest == h.nearest
    assert max(h.nearest) == pytest.approx(1.0)


def test_crossed_square_n9():
    s = spinknit.crossed_square(9)
    assert s.qubits == ["q1", "q2", "q3", "q4"]
    graph = s.crossing_graph()
    assert len(graph["edges"]) == 4
    rec = spinknit.run(s)
    assert rec.completed
    assert rec.success_probability == pytest.approx(0.988281, abs=1e-6)
    assert rec.value_at("fidelity", 1.5) == pytest.approx(0.991668, abs=1e-6)
    assert rec.to_csv().startswith("time,")
    sq = spinknit.run(s, fidelity="squared")
    assert sq.value_at("fidelity", 1.5) == pytest.approx(rec.value_at("fidelity", 1.5) ** 2, abs=1e-12)


def test_injection_probability():
    assert spinknit.injection_success_probability(9) == pytest.approx(0.988281, abs=1e-6)


def test_run_experiment_rows():
    rows = spinknit.run_experiment("kind: injection_probability\nchain_lengths: [9, 13]\n", jobs=1)
    assert [r["N"] for r in rows] == [9, 13]
    assert rows[0]["metric"] == "success_probability"
    assert rows[0]["seed"] is None
    assert rows[1]["value"] > rows[0]["value"]
    csv = spinknit.run_experiment_csv("kind: injection_probability\nchain_lengths: [9]\n")
    assert csv.splitlines()[0].startswith("kind,N,epsilon")


def test_errors_map_to_python():
    with pytest.raises(spinknit.ConfigError):
        spinknit.run_experiment("kind: knit_trace\nchain_lengths: [11]\n")
    with pytest.raises(ValueError):
        spinknit.crossed_square(9, scenario="Z")
