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

#include "spinknit/serialization.hpp"

#include <cmath>

#include "spinknit/error.hpp"
#include "yaml_serialization.hpp"
#include "yaml_support.hpp"

namespace spinknit {

namespace {

constexpr unsigned kMetricBits[] = {sample_metric::fidelity, sample_metric::target_entropy,
                                    sample_metric::end_pair, sample_metric::occupations};
constexpr std::string_view kMetricNames[] = {"fidelity", "target_entropy", "end_pair", "occupations"};

bool same(const QubitState& a, const QubitState& b) { return a.zero == b.zero && a.one == b.one; }

void emit_state(YAML::Emitter& out, const QubitState& q) {
    if (same(q, QubitState::plus())) {
        out << "plus";
    } else if (same(q, QubitState::ground())) {
        out << "ground";
    } else if (same(q, QubitState::excited())) {
        out << "excited";
    } else {
        out << YAML::Flow << YAML::BeginSeq << q.zero.real() << q.zero.imag() << q.one.real()
            << q.one.imag() << YAML::EndSeq;
    }
}

QubitState read_state(const YAML::Node& n) {
    if (n.IsScalar()) {
        const auto name = n.Scalar();
        if (name == "plus") return QubitState::plus();
        if (name == "ground") return QubitState::ground();
        if (name == "excited") return QubitState::excited();
        yaml::fail(n, "state", "unknown state '" + name + "'");
    }
    if (!n.IsSequence() || n.size() != 4) {
        yaml::fail(n, "state", "expected plus, ground, excited or [re0, im0, re1, im1]");
    }
    QubitState q{{n[0].as<double>(), n[1].as<double>()}, {n[2].as<double>(), n[3].as<double>()}};
    if (std::abs(q.norm_squared() - 1.0) > 1e-9) yaml::fail(n, "state", "state is not normalized");
    return q;
}

template <typename F>
auto wrap(const YAML::Node& node, std::string_view field, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        yaml::fail(node, field, e.what());
    }
}

}  // namespace

std::string_view to_string(Normalization n) {
    return n == Normalization::max_coupling ? "max_coupling" : "none";
}

Normalization normalization_from_string(std::string_view name) {
    if (name == "none") return Normalization::none;
    if (name == "max_coupling") return Normalization::max_coupling;
    throw InvalidArgument("unknown normalization '" + std::string(name) + "'");
}

namespace detail {

void emit_hamiltonian(YAML::Emitter& out, const HamiltonianSpec& spec) {
    out << YAML::BeginMap;
    out << YAML::Key << "chain_length" << YAML::Value << spec.chain_length;
    out << YAML::Key << "j0" << YAML::Value << spec.couplings.j0;
    out << YAML::Key << "couplings" << YAML::Value << YAML::Flow << spec.couplings.nearest;
    out << YAML::Key << "next_nearest" << YAML::Value << YAML::Flow << spec.couplings.next_nearest;
    out << YAML::Key << "onsite" << YAML::Value << YAML::Flow << spec.onsite;
    out << YAML::Key << "gamma" << YAML::Value << spec.gamma;
    out << YAML::Key << "delta" << YAML::Value << spec.delta;
    out << YAML::Key << "epsilon" << YAML::Value << spec.epsilon;
    out << YAML::Key << "disorder_seed" << YAML::Value << spec.disorder_seed;
    out << YAML::Key << "normalization" << YAML::Value << std::string(to_string(spec.normalization));
    out << YAML::EndMap;
}

HamiltonianSpec read_hamiltonian(const YAML::Node& n) {
    yaml::check_keys(n, "hamiltonian",
                     {"chain_length", "j0", "couplings", "next_nearest", "onsite", "gamma", "delta",
                      "epsilon", "disorder_seed", "normalization"});
    const int len = yaml::require<int>(n, "chain_length");
    const double gamma = yaml::get<double>(n, "gamma", 0.0);
    const double delta = yaml::get<double>(n, "delta", 0.0);
    const double epsilon = yaml::get<double>(n, "epsilon", 0.0);
    const auto seed = yaml::get<std::uint64_t>(n, "disorder_seed", 0);
    const auto norm = wrap(n, "normalization", [&] {
        return normalization_from_string(yaml::get<std::string>(n, "normalization", "none"));
    });

    HamiltonianSpec s = wrap(n, "chain_length", [&] {
        return HamiltonianSpec::perturbed(len, epsilon, gamma, delta, seed, norm);
    });
    if (n["j0"]) s.couplings.j0 = yaml::scalar<double>(n["j0"], "j0");
    if (n["couplings"]) s.couplings.nearest = yaml::list<double>(n, "couplings", {});
    if (n["next_nearest"]) {
        s.couplings.next_nearest = n["next_nearest"].size() ? yaml::list<double>(n, "next_nearest", {})
                                                            : std::vector<double>{};
    }
    if (n["onsite"]) s.onsite = yaml::list<double>(n, "onsite", {});
    wrap(n, "hamiltonian", [&] {
        s.validate();
        return 0;
    });
    return s;
}

void emit_schedule(YAML::Emitter& out, const Schedule& schedule) {
    out << YAML::BeginMap;
    out << YAML::Key << "hamiltonian" << YAML::Value;
    emit_hamiltonian(out, schedule.spec);
    out << YAML::Key << "end_time" << YAML::Value << schedule.end_time;
    out << YAML::Key << "events" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : schedule.events) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "time" << YAML::Value << e.time;
        out << YAML::Key << "kind" << YAML::Value << std::string(to_string(e.kind));
        switch (e.kind) {
            case EventKind::inject:
                out << YAML::Key << "qubit" << YAML::Value << e.qubit;
                out << YAML::Key << "end" << YAML::Value << std::string(to_string(e.end));
                out << YAML::Key << "state" << YAML::Value;
                emit_state(out, e.state);
                break;
            case EventKind::extract:
                out << YAML::Key << "qubit" << YAML::Value << e.qubit;
                out << YAML::Key << "end" << YAML::Value << std::string(to_string(e.end));
                break;
            case EventKind::refocus:
                out << YAML::Key << "qubits" << YAML::Value << YAML::Flow << e.qubits;
                break;
            case EventKind::sample: {
                std::vector<std::string> names;
                for (std::size_t k = 0; k < std::size(kMetricBits); ++k) {
                    if (e.metrics & kMetricBits[k]) names.emplace_back(kMetricNames[k]);
                }
                out << YAML::Key << "metrics" << YAML::Value << YAML::Flow << names;
                break;
            }
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
}

Schedule read_schedule(const YAML::Node& n) {
    yaml::check_keys(n, "schedule", {"hamiltonian", "end_time", "events"});
    if (!n["hamiltonian"]) yaml::fail(n, "hamiltonian", "missing required field");
    Schedule s;
    s.spec = read_hamiltonian(n["hamiltonian"]);
    s.end_time = yaml::require<double>(n, "end_time");
    const YAML::Node events = n["events"];
    if (!events || !events.IsSequence()) yaml::fail(n, "events", "expected a list of events");
    for (const auto& item : events) {
        yaml::check_keys(item, "event", {"time", "kind", "qubit", "end", "state", "qubits", "metrics"});
        Event e;
        e.time = yaml::require<double>(item, "time");
        e.kind = wrap(item, "kind", [&] { return event_kind_from_string(yaml::require<std::string>(item, "kind")); });
        if (e.kind == EventKind::inject || e.kind == EventKind::extract) {
            e.qubit = yaml::require<std::string>(item, "qubit");
            e.end = wrap(item, "end", [&] { return chain_end_from_string(yaml::require<std::string>(item, "end")); });
        }
        if (e.kind == EventKind::inject && item["state"]) e.state = read_state(item["state"]);
        if (e.kind == EventKind::refocus) e.qubits = yaml::list<std::string>(item, "qubits", {});
        if (e.kind == EventKind::sample) {
            for (const auto& name : yaml::list<std::string>(item, "metrics", {})) {
                std::size_t k = 0;
                while (k < std::size(kMetricNames) && kMetricNames[k] != name) ++k;
                if (k == std::size(kMetricNames)) yaml::fail(item, "metrics", "unknown metric '" + name + "'");
                e.metrics |= kMetricBits[k];
            }
        }
        s.events.push_back(std::move(e));
    }
    wrap(n, "events", [&] {
        s.validate();
        return 0;
    });
    return s;
}

}  // namespace detail

std::string to_yaml(const HamiltonianSpec& spec) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    detail::emit_hamiltonian(out, spec);
    return std::string(out.c_str()) + "\n";
}

std::string to_yaml(const Schedule& schedule) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    detail::emit_schedule(out, schedule);
    return std::string(out.c_str()) + "\n";
}

HamiltonianSpec hamiltonian_from_yaml(std::string_view text) {
    return detail::read_hamiltonian(yaml::parse(text));
}

Schedule schedule_from_yaml(std::string_view text) { return detail::read_schedule(yaml::parse(text)); }

}  // namespace spinknit
