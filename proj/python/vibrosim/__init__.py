# Copyright 2026 The vibrosim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Vibronic dynamics on a qubit coupled to two truncated bosonic modes."""

from ._vibrosim import (
    MoleculeParams,
    VibrosimError,
    adiabatic_surfaces,
    emulate_series,
    hamiltonian,
    initial_state,
    map_dissipation,
    molecule_preset,
    open_trace,
    population_trace,
    preset_names,
    projection_noise,
    pulse_program,
    qubit_count,
    render,
    scaling_factor,
    trotter_steps_for_mse,
    unmap_dissipation,
)

__all__ = [
    "MoleculeParams",
    "VibrosimError",
    "adiabatic_surfaces",
    "emulate_series",
    "hamiltonian",
    "initial_state",
    "map_dissipation",
    "molecule_preset",
    "open_trace",
    "population_trace",
    "preset_names",
    "projection_noise",
    "pulse_program",
    "qubit_count",
    "render",
    "scaling_factor",
    "trotter_steps_for_mse",
    "unmap_dissipation",
]
