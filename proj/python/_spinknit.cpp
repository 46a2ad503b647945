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

// Python bindings: the Hamiltonian, the two-qubit gate, knitting schedules,
// single runs and YAML-driven experiments.

#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinknit/error.hpp"
#include "spinknit/experiments.hpp"
#include "spinknit/ideal_oracle.hpp"
#include "spinknit/protocol.hpp"
#include "spinknit/serialization.hpp"

namespace py = pybind11;
using namespace spinknit;

namespace {

py::dict row_dict(const ResultRow& r) {
    py::dict d;
    d["kind"] = std::string(to_string(r.kind));
    d["N"] = r.chain_length;
    d["epsilon"] = r.epsilon;
    d["gamma"] = r.gamma;
    d["delta"] = r.delta;
    d["delay"] = r.delay;
    d["scenario"] = std::string(to_string(r.scenario));
    d["aggregate"] = r.mean ? "mean" : "seed";
    d["seed"] = r.mean ? py::object(py::none()) : py::object(py::int_(r.seed));
    d["realizations"] = r.realizations;
    d["metric"] = std::string(to_string(r.metric));
    d["site_set"] = r.site_set;
    d["time"] = r.time;
    d["value"] = r.value;
    d["stderr"] = r.std_error;
    return d;
}

ResultTable run_yaml(const std::string& text, int jobs) {
    const ExperimentConfig config = parse_config(text);
    py::gil_scoped_release release;
    return run_experiment(config, jobs);
}

}  // namespace

PYBIND11_MODULE(_spinknit, m) {
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<HamiltonianSpec>(m, "Hamiltonian")
        .def_static("pst", &HamiltonianSpec::pst, py::arg("n"), py::arg("j0") = 1.0)
        .def_static(
            "perturbed",
            [](int n, double epsilon, double gamma, double delta, std::uint64_t seed,
               const std::string& normalization) {
                return HamiltonianSpec::perturbed(n, epsilon, gamma, delta, seed,
                                                  normalization_from_string(normalization));
            },
            py::arg("n"), py::arg("epsilon") = 0.0, py::arg("gamma") = 0.0, py::arg("delta") = 0.0,
            py::arg("seed") = 0, py::arg("normalization") = "max_coupling")
        .def_static("from_yaml", &hamiltonian_from_yaml, py::arg("text"))
        .def_readonly("chain_length", &HamiltonianSpec::chain_length)
        .def_readonly("gamma", &HamiltonianSpec::gamma)
        .def_readonly("delta", &HamiltonianSpec::delta)
        .def_readonly("epsilon", &HamiltonianSpec::epsilon)
        .def_readonly("onsite", &HamiltonianSpec::onsite)
        .def_property_readonly("j0", [](const HamiltonianSpec& s) { return s.couplings.j0; })
        .def_property_readonly("nearest", [](const HamiltonianSpec& s) { return s.couplings.nearest; })
        .def_property_readonly("next_nearest",
                               [](const HamiltonianSpec& s) { return s.couplings.next_nearest; })
        .def_property_readonly("mirror_time", &HamiltonianSpec::mirror_time)
        .def("to_yaml", [](const HamiltonianSpec& s) { return to_yaml(s); })
        .def("__repr__", [](const HamiltonianSpec& s) {
            return "<Hamiltonian N=" + std::to_string(s.chain_length) + ">";
        });

    m.def("effective_gate", &effective_gate, py::arg("hamiltonian"),
          "4x4 map on (site 1, site N) after one mirror time.");
    m.def("ideal_gate", &ideal_gate, py::arg("n"));

    py::class_<Schedule>(m, "Schedule")
        .def_static("from_yaml", &schedule_from_yaml, py::arg("text"))
        .def_readonly("hamiltonian", &Schedule::spec)
        .def_readonly("end_time", &Schedule::end_time)
        .def_property_readonly("qubits", &Schedule::qubits)
        .def("to_yaml", [](const Schedule& s) { return to_yaml(s); })
        .def("crossing_graph", [](const Schedule& s) {
            const CrossingGraph g = crossings(s);
            py::list edges;
            for (const auto& [a, b] : g.edges()) {
                edges.append(py::make_tuple(g.vertices()[a], g.vertices()[b]));
            }
            py::dict d;
            d["vertices"] = g.vertices();
            d["edges"] = edges;
            return d;
        });

    m.def(
        "crossed_square",
        [](int n, const std::string& scenario, double delay, bool readout) {
            return build_crossed_square(n, delay_scenario_from_string(scenario), delay,
                                        BuildOptions{.readout = readout});
        },
        py::arg("n"), py::arg("scenario") = "none", py::arg("delay") = 0.0, py::arg("readout") = true);
    m.def(
        "ladder",
        [](int n, int rounds, bool readout) {
            return build_ladder(n, rounds, BuildOptions{.readout = readout});
        },
        py::arg("n"), py::arg("rounds") = 1, py::arg("readout") = true);

    py::class_<RunRecord>(m, "RunRecord")
        .def_property_readonly("completed",
                               [](const RunRecord& r) { return r.status == RunStatus::completed; })
        .def_readonly("abort_reason", &RunRecord::abort_reason)
        .def_readonly("success_probability", &RunRecord::success_probability)
        .def_readonly("max_norm_drift", &RunRecord::max_norm_drift)
        .def_readonly("max_energy_drift", &RunRecord::max_energy_drift)
        .def_property_readonly("samples",
                               [](const RunRecord& r) {
                                   py::list out;
                                   for (const auto& s : r.samples) {
                                       out.append(py::make_tuple(s.time, std::string(to_string(s.kind)),
                                                                 s.site_set, s.value));
                                   }
                                   return out;
                               })
        .def(
            "value_at",
            [](const RunRecord& r, const std::string& metric, double time, const std::string& site_set) {
                return r.value_at(metric_kind_from_string(metric), time, site_set);
            },
            py::arg("metric"), py::arg("time"), py::arg("site_set") = "")
        .def("to_csv", [](const RunRecord& r) {
            std::ostringstream out;
            write_csv(r, out);
            return out.str();
        });

    m.def(
        "run",
        [](const Schedule& schedule, const std::string& fidelity, const std::string& policy,
           std::uint64_t seed) {
            RunOptions options;
            options.fidelity = fidelity_convention_from_string(fidelity);
            if (policy == "sampled") {
                options.policy = BranchPolicy::sampled;
            } else if (policy != "post_select") {
                throw InvalidArgument("policy must be post_select or sampled");
            }
            options.seed = seed;
            py::gil_scoped_release release;
            return run(schedule, options);
        },
        py::arg("schedule"), py::arg("fidelity") = "root", py::arg("policy") = "post_select",
        py::arg("seed") = 0);

    m.def(
        "injection_success_probability",
        [](int n) { return injection_success_probability(n); }, py::arg("n"));

    m.def(
        "run_experiment",
        [](const std::string& text, int jobs) {
            const ResultTable table = run_yaml(text, jobs);
            py::list rows;
            for (const auto& r : table.rows) rows.append(row_dict(r));
            return rows;
        },
        py::arg("config"), py::arg("jobs") = 0, "Runs a YAML config and returns the rows as dicts.");
    m.def(
        "run_experiment_csv",
        [](const std::string& text, int jobs) {
            const ResultTable table = run_yaml(text, jobs);
            std::ostringstream out;
            write_csv(table, out);
            return out.str();
        },
        py::arg("config"), py::arg("jobs") = 0);
}
