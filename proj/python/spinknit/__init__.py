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

"""Spin-chain cluster-state knitting simulator."""

from ._spinknit import (
    ConfigError,
    Hamiltonian,
    InvalidArgument,
    IoError,
    NumericalError,
    RunRecord,
    Schedule,
    crossed_square,
    effective_gate,
    ideal_gate,
    injection_success_probability,
    ladder,
    run,
    run_experiment,
    run_experiment_csv,
)

__all__ = [
    "ConfigError",
    "Hamiltonian",
    "InvalidArgument",
    "IoError",
    "NumericalError",
    "RunRecord",
    "Schedule",
    "crossed_square",
    "effective_gate",
    "ideal_gate",
    "injection_success_probability",
    "ladder",
    "run",
    "run_experiment",
    "run_experiment_csv",
]
