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

#include "spinknit/schedule.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

template <typename E, std::size_t K>
E parse_name(std::string_view name, const std::array<std::pair<E, std::string_view>, K>& table,
             const char* what) {
    for (const auto& [e, n] : table) {
        if (n == name) return e;
    }
    throw InvalidArgument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <typename E, std::size_t K>
std::string_view print_name(E value, const std::array<std::pair<E, std::string_view>, K>& table) {
    for (const auto& [e, n] : table) {
        if (e == value) return n;
    }
    return "unknown";
}

constexpr std::array<std::pair<EventKind, std::string_view>, 4> kKinds{{
    {EventKind::extract, "extract"},
    {EventKind::inject, "inject"},
    {EventKind::refocus, "refocus"},
    {EventKind::sample, "sample"},
}};
constexpr std::array<std::pair<ChainEnd, std::string_view>, 2> kEnds{{
    {ChainEnd::first, "first"},
    {ChainEnd::last, "last"},
}};
constexpr std::array<std::pair<DelayScenario, std::string_view>, 5> kScenarios{{
    {DelayScenario::none, "none"},
    {DelayScenario::A, "A"},
    {DelayScenario::B, "B"},
    {DelayScenario::C, "C"},
    {DelayScenario::D, "D"},
}};

constexpr double kTimeTolerance = 1e-12;

}  // namespace

std::string_view to_string(EventKind kind) { return print_name(kind, kKinds); }
EventKind event_kind_from_string(std::string_view name) { return parse_name(name, kKinds, "event kind"); }
std::string_view to_string(ChainEnd end) { return print_name(end, kEnds); }
ChainEnd chain_end_from_string(std::string_view name) { return parse_name(name, kEnds, "chain end"); }
std::string_view to_string(DelayScenario s) { return print_name(s, kScenarios); }
DelayScenario delay_scenario_from_string(std::string_view name) {
    return parse_name(name, kScenarios, "delay scenario");
}

int event_rank(EventKind kind) { return static_cast<int>(kind); }

bool event_before(const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return event_rank(a.kind) < event_rank(b.kind);
}

std::vector<std::string> Schedule::qubits() const {
    std::vector<std::string> out;
    for (const auto& e : events) {
        if (e.kind == EventKind::inject) out.push_back(e.qubit);
    }
    return out;
}

std::vector<std::string> Schedule::extracted_qubits() const {
    std::vector<std::string> out;
    for (const auto& e : events) {
        if (e.kind == EventKind::extract) out.push_back(e.qubit);
    }
    return out;
}

SystemLayout Schedule::initial_layout() const {
    std::vector<std::string> regs;
    for (const auto& q : extracted_qubits()) regs.push_back(storage_register(q));
    return SystemLayout(spec.chain_length, std::move(regs));
}

Site Schedule::end_site(ChainEnd end) const {
    return end == ChainEnd::first ? Site{0} : Site{spec.chain_length - 1};
}

void Schedule::validate() const {
    spec.validate();
    struct QubitInfo {
        double injected;
        ChainEnd end;
        bool refocused = false;
        bool extracted = false;
    };
    std::map<std::string, QubitInfo> info;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        const std::string where = "event " + std::to_string(i) + " (" + std::string(to_string(e.kind)) + ")";
        if (!std::isfinite(e.time) || e.time < 0.0) throw InvalidArgument(where + ": bad time");
        if (i > 0 && event_before(e, events[i - 1])) throw InvalidArgument(where + ": events out of order");
        switch (e.kind) {
            case EventKind::inject: {
                if (e.qubit.empty()) throw InvalidArgument(where + ": missing qubit label");
                if (info.count(e.qubit)) throw InvalidArgument(where + ": qubit " + e.qubit + " injected twice");
                if (std::abs(e.state.norm_squared() - 1.0) > 1e-12) {
                    throw InvalidArgument(where + ": injected state is not normalized");
                }
                info.emplace(e.qubit, QubitInfo{e.time, e.end});
                break;
            }
            case EventKind::refocus: {
                if (e.qubits.empty()) throw InvalidArgument(where + ": no qubits to refocus");
                for (const auto& q : e.qubits) {
                    auto it = info.find(q);
                    if (it == info.end()) throw InvalidArgument(where + ": qubit " + q + " not injected");
                    if (it->second.refocused) throw InvalidArgument(where + ": qubit " + q + " refocused twice");
                    if (std::abs(it->second.injected - e.time) > kTimeTolerance) {
                        throw InvalidArgument(where + ": refocus of " + q + " must follow its injection");
                    }
                    it->second.refocused = true;
                }
                break;
            }
            case EventKind::extract: {
                auto it = info.find(e.qubit);
                if (it == info.end()) throw InvalidArgument(where + ": qubit " + e.qubit + " not injected");
                if (it->second.extracted) throw InvalidArgument(where + ": qubit " + e.qubit + " extracted twice");
                if (e.end != opposite(it->second.end)) {
                    throw InvalidArgument(where + ": qubit " + e.qubit + " must leave at the opposite end");
                }
                if (e.time <= it->second.injected) throw InvalidArgument(where + ": extraction before injection");
                it->second.extracted = true;
                break;
            }
            case EventKind::sample:
                if (e.metrics == 0) throw InvalidArgument(where + ": sample without metrics");
                break;
        }
    }
    for (const auto& [q, qi] : info) {
        if (!qi.refocused) throw InvalidArgument("qubit " + q + " has no refocus after its injection");
    }
    if (!events.empty() && end_time < events.back().time) {
        throw InvalidArgument("end time precedes the last event");
    }
}

void add_samples(Schedule& schedule, std::span<const double> times, unsigned metrics) {
    for (double t : times) {
        Event e;
        e.time = t;
        e.kind = EventKind::sample;
        e.metrics = metrics;
        auto pos = std::upper_bound(schedule.events.begin(), schedule.events.end(), e, event_before);
        schedule.events.insert(pos, e);
        schedule.end_time = std::max(schedule.end_time, t);
    }
}

std::vector<double> uniform_times(double start, double stop, int count) {
    if (count < 1) throw InvalidArgument("need at least one sample time");
    if (stop < start) throw InvalidArgument("sample window is reversed");
    std::vector<double> t(static_cast<std::size_t>(count));
    if (count == 1) {
        t[0] = start;
        return t;
    }
    for (int k = 0; k < count; ++k) t[k] = start + (stop - start) * k / (count - 1);
    return t;
}

}  // namespace spinknit
