// Copyright 2026 The vibrosim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Operators are returned as dense NumPy arrays, time series
// as dicts of column name -> list, so the module needs nothing beyond NumPy.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vibrosim/commands.hpp"
#include "vibrosim/config.hpp"
#include "vibrosim/ion_mapping.hpp"
#include "vibrosim/lindblad.hpp"
#include "vibrosim/lvc.hpp"
#include "vibrosim/propagator.hpp"
#include "vibrosim/resources.hpp"

namespace py = pybind11;
using namespace vibrosim;

namespace {

py::dict to_dict(const TimeSeries& series) {
    py::dict out;
    out["t_fs"] = series.times();
    for (const auto& [name, values] : series.columns()) out[py::str(name)] = values;
    return out;
}

Command command_from(const std::string& name) {
    const auto command = parse_command(name);
    if (!command) throw py::value_error("unknown command '" + name + "'");
    return *command;
}

}  // namespace

PYBIND11_MODULE(_vibrosim, m) {
    m.doc() = "Vibronic dynamics on a qubit coupled to two truncated bosonic modes.";

    py::register_exception<Error>(m, "VibrosimError", PyExc_RuntimeError);

    py::class_<MoleculeParams>(m, "MoleculeParams")
        .def(py::init<>())
        .def_readwrite("name", &MoleculeParams::name)
        .def_readwrite("nu1", &MoleculeParams::nu1)
        .def_readwrite("nu2", &MoleculeParams::nu2)
        .def_readwrite("delta_e", &MoleculeParams::delta_e)
        .def_readwrite("kappa", &MoleculeParams::kappa)
        .def_readwrite("lambda_", &MoleculeParams::lambda)
        .def_readwrite("alpha", &MoleculeParams::alpha)
        .def_readwrite("scaling", &MoleculeParams::scaling)
        .def("validate", &MoleculeParams::validate)
        .def("__repr__", [](const MoleculeParams& p) { return "<MoleculeParams " + p.name + ">"; });

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const auto& p : molecule_presets()) names.push_back(p.name);
        return names;
    });
    m.def("molecule_preset", [](const std::string& name) { return molecule_preset(name); }, py::arg("name"));

    m.def(
        "hamiltonian",
        [](const MoleculeParams& p, int cutoff) { return DenseMatrix(build_hamiltonian(p, FockCutoff(cutoff)).matrix); },
        py::arg("params"), py::arg("cutoff"), "Dense H in rad/ps on the composite space.");
    m.def(
        "initial_state",
        [](const MoleculeParams& p, int cutoff) { return Vector(initial_state(p, FockCutoff(cutoff)).amplitudes()); },
        py::arg("params"), py::arg("cutoff"));

    m.def(
        "population_trace",
        [](const MoleculeParams& p, int cutoff, double t_max_fs, int n_points) {
            TimeSeries s;
            {
                py::gil_scoped_release release;
                s = population_trace(p, FockCutoff(cutoff), t_max_fs, n_points);
            }
            return to_dict(s);
        },
        py::arg("params"), py::arg("cutoff") = kDefaultClosedCutoff, py::arg("t_max_fs"),
        py::arg("n_points") = kDefaultSamplePoints);

    m.def(
        "open_trace",
        [](const MoleculeParams& p, double gamma, int cutoff, double t_max_fs, int n_points) {
            const FockCutoff c(cutoff);
            TimeSeries series;
            {
                py::gil_scoped_release release;
                series = evolve_open(build_hamiltonian(p, c), DissipationRates::equal(gamma),
                                     DensityMatrix::from_pure(initial_state(p, c)),
                                     uniform_grid(t_max_fs / kFsPerPs, n_points))
                             .series;
            }
            return to_dict(series);
        },
        py::arg("params"), py::arg("gamma"), py::arg("cutoff") = kDefaultOpenCutoff, py::arg("t_max_fs"),
        py::arg("n_points") = 101, "Equal heating and cooling rate gamma (ps^-1) on both modes.");

    m.def(
        "adiabatic_surfaces",
        [](const MoleculeParams& p, double q_min, double q_max, int points) {
            const SurfaceGrid g = adiabatic_surfaces(p, GridSpec{q_min, q_max, points});
            return py::make_tuple(g.q1_points, g.q2_points, g.lower, g.upper);
        },
        py::arg("params"), py::arg("q_min") = -4.0, py::arg("q_max") = 4.0, py::arg("points") = 161);

    m.def("scaling_factor", &scaling_factor, py::arg("params"), py::arg("omega1_rabi"));
    m.def("map_dissipation", &map_dissipation, py::arg("rate_per_ps"), py::arg("scaling"));
    m.def("unmap_dissipation", &unmap_dissipation, py::arg("rate_per_s"), py::arg("scaling"));
    m.def(
        "pulse_program",
        [](const MoleculeParams& p, std::optional<double> scaling, std::optional<double> omega1_rabi) {
            return to_text(compile_pulse_program(p, ScalingChoice{scaling, omega1_rabi}));
        },
        py::arg("params"), py::arg("scaling") = py::none(), py::arg("omega1_rabi") = py::none());

    m.def("projection_noise", &projection_noise, py::arg("probability"), py::arg("shots"));
    m.def(
        "emulate_series",
        [](const std::vector<double>& probabilities, int shots, std::uint64_t seed) {
            std::vector<double> estimates;
            for (const auto& r : emulate_series(probabilities, shots, seed)) estimates.push_back(r.estimate);
            return estimates;
        },
        py::arg("probabilities"), py::arg("shots"), py::arg("seed"));

    m.def("qubit_count", &qubit_count, py::arg("n_fock"), py::arg("n_modes"));
    m.def(
        "trotter_steps_for_mse",
        [](const MoleculeParams& p, int cutoff, double t_max_fs, double target) {
            py::gil_scoped_release release;
            const StepSearchResult r = trotter_steps_for_mse(p, FockCutoff(cutoff), t_max_fs, target);
            return std::make_pair(r.steps, r.mse);
        },
        py::arg("params"), py::arg("cutoff"), py::arg("t_max_fs"), py::arg("target_mse") = kDefaultMseTarget);

    m.def(
        "render",
        [](const std::string& command, const std::string& config_text) {
            const Command c = command_from(command);
            const RunConfig config = parse_config(config_text);
            py::gil_scoped_release release;
            return render(c, config);
        },
        py::arg("command"), py::arg("config_text"), "Runs a CLI command on an in-memory config; returns its artifact.");
}
