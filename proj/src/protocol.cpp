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

#include "spinknit/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

constexpr double kSameTime = 1e-12;
constexpr unsigned kArrivalMetrics =
    sample_metric::fidelity | sample_metric::target_entropy | sample_metric::end_pair;

struct Injection {
    std::string qubit;
    ChainEnd end;
    double time;
    std::optional<double> extract_at;
};

void check_knitting_length(int n) {
    if (n < 9 || n % 4 != 1) {
        throw InvalidArgument("knitting needs N >= 9 with N = 1 (mod 4); got N = " + std::to_string(n));
    }
}

Schedule assemble(const HamiltonianSpec& spec, std::vector<Injection> injections,
                  const BuildOptions& options) {
    Schedule s;
    s.spec = spec;
    std::stable_sort(injections.begin(), injections.end(),
                     [](const Injection& a, const Injection& b) { return a.time < b.time; });
    double arrival = 0.0;
    for (const auto& inj : injections) {
        Event in;
        in.time = inj.time;
        in.kind = EventKind::inject;
        in.qubit = inj.qubit;
        in.end = inj.end;
        s.events.push_back(in);
        if (inj.extract_at) {
            Event out;
            out.time = *inj.extract_at;
            out.kind = EventKind::extract;
            out.qubit = inj.qubit;
            out.end = opposite(inj.end);
            s.events.push_back(out);
        }
        arrival = std::max(arrival, inj.time + 1.0);
    }
    // one joint refocus per injection instant
    std::map<double, std::vector<std::string>> rounds;
    for (const auto& inj : injections) rounds[inj.time].push_back(inj.qubit);
    for (auto& [t, qs] : rounds) {
        Event r;
        r.time = t;
        r.kind = EventKind::refocus;
        r.qubits = qs;
        s.events.push_back(r);
    }
    std::stable_sort(s.events.begin(), s.events.end(), event_before);
    s.end_time = arrival;
    if (options.sample_at_arrival) {
        const double at[] = {arrival};
        add_samples(s, at, kArrivalMetrics);
    }
    s.validate();
    return s;
}

std::string qubit_label(int k) { return "q" + std::to_string(k); }

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Joint outcome distribution of `sites`; bit k of the index is sites[k].
std::vector<double> joint_distribution(const PureState& state, const std::vector<Site>& sites) {
    std::vector<double> p(std::size_t{1} << sites.size(), 0.0);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(state.layout().total_sites(), t);
        sector.for_each([&](std::size_t i, Mask m) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < sites.size(); ++k) {
                if (m & sites[k].bit()) idx |= std::size_t{1} << k;
            }
            p[idx] += std::norm(amps[static_cast<Eigen::Index>(i)]);
        });
    }
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    return p;
}

class Runner {
   public:
    Runner(const Schedule& schedule, const RunOptions& options)
        : options_(options), events_(schedule.events), layout_(schedule.initial_layout()),
          state_(PureState::vacuum(layout_)), rng_(options.seed) {
        schedule.validate();
        record_.realized = schedule;
        spec_ = schedule.spec;
        tm_ = spec_.mirror_time();
        if (options.cache) {
            propagator_ = options.cache->get(spec_);
        } else {
            propagator_ = std::make_shared<const Propagator>(spec_, options.propagator);
        }
        end_time_ = schedule.end_time;
        refresh_reference();
    }

    RunRecord finish() && {
        std::size_t i = 0;
        while (i < events_.size() && record_.status == RunStatus::completed) {
            const Event& e = events_[i];
            if (e.kind == EventKind::sample || e.time > now_ + kSameTime) {
                i = evolve_segment(i);
                continue;
            }
            apply(i);
            ++i;
        }
        if (record_.status == RunStatus::completed && end_time_ > now_ + kSameTime) {
            const double t[] = {end_time_};
            evolve_to(t, [](std::size_t, const PureState&) {});
        }
        std::vector<Event> realized = executed_;
        realized.insert(realized.end(), events_.begin() + static_cast<std::ptrdiff_t>(std::min(i, events_.size())),
                        events_.end());
        record_.realized.events = std::move(realized);
        record_.realized.end_time = std::max(end_time_, now_);
        record_.final_state = std::move(state_);
        return std::move(record_);
    }

   private:
    void refresh_reference() {
        if (spec_.chain_length % 4 != 1) {
            record_.reference.reset();
            return;
        }
        Schedule s = record_.realized;
        s.events = executed_;
        s.events.insert(s.events.end(), events_.begin() + static_cast<std::ptrdiff_t>(cursor_), events_.end());
        try {
            record_.reference = ideal_reference(s, layout_);
        } catch (const InvalidArgument&) {
            // two unread qubits end on the same site: no single target state
            record_.reference.reset();
        }
    }

    template <typename F>
    void evolve_to(std::span<const double> abs_times, F&& on_sample) {
        std::vector<double> rel(abs_times.size());
        for (std::size_t k = 0; k < abs_times.size(); ++k) rel[k] = (abs_times[k] - now_) * tm_;
        const double n0 = state_.norm();
        const double e0 = options_.track_conservation ? energy_expectation(spec_, state_) : 0.0;
        PureState last(layout_);
        propagator_->evolve_samples(state_, rel, [&](std::size_t k, PureState& s) {
            on_sample(k, s);
            if (k + 1 == rel.size()) last = std::move(s);
        });
        state_ = std::move(last);
        now_ = abs_times.back();
        if (options_.track_conservation) {
            const double dn = std::abs(state_.norm() - n0);
            const double de = std::abs(energy_expectation(spec_, state_) - e0);
            record_.max_norm_drift = std::max(record_.max_norm_drift, dn);
            record_.max_energy_drift = std::max(record_.max_energy_drift, de);
            record_.samples.push_back({now_, MetricKind::norm_drift, dn, "segment"});
            record_.samples.push_back({now_, MetricKind::energy_drift, de, "segment"});
        }
    }

    // Evolves through the run of sample events starting at i up to the next
    // protocol event; returns the index of that event.
    std::size_t evolve_segment(std::size_t i) {
        std::size_t j = i;
        std::vector<double> times;
        while (j < events_.size() && events_[j].kind == EventKind::sample) {
            times.push_back(std::max(events_[j].time, now_));
            ++j;
        }
        const std::size_t n_samples = times.size();
        if (j < events_.size()) times.push_back(std::max(events_[j].time, now_));
        evolve_to(times, [&](std::size_t k, const PureState& s) {
            if (k < n_samples) record_metrics(events_[i + k].metrics, times[k], s);
        });
        for (std::size_t k = i; k < j; ++k) executed_.push_back(events_[k]);
        cursor_ = j;
        return j;
    }

    void record_metrics(unsigned metrics, double t, const PureState& s) {
        auto& out = record_.samples;
        const int n = spec_.chain_length;
        const auto& ref = record_.reference;
        const bool ref_ok = ref.has_value() && ref->state.layout() == s.layout();
        if (ref_ok) {
            const std::string labels = join(ref->graph.vertices());
            if (metrics & sample_metric::fidelity) {
                out.push_back({t, MetricKind::fidelity, fidelity(s, ref->state, options_.fidelity), labels});
            }
            if ((metrics & sample_metric::target_entropy) && ref->sites.size() <= 8) {
                out.push_back({t, MetricKind::entropy, entropy(partial_trace(s, ref->sites)), labels});
            }
        }
        if (metrics & sample_metric::end_pair) {
            const Site pair[] = {Site{0}, Site{n - 1}};
            const DensityMatrix rho = partial_trace(s, pair);
            const std::string ends = "1," + std::to_string(n);
            out.push_back({t, MetricKind::eof, eof(rho), ends});
            out.push_back({t, MetricKind::entropy, entropy(rho), ends});
        }
        if (metrics & sample_metric::occupations) {
            const auto occ = occupation_probabilities(s);
            for (int k = 0; k < n; ++k) out.push_back({t, MetricKind::occupation, occ[k], std::to_string(k + 1)});
        }
    }

    void apply(std::size_t i) {
        cursor_ = i + 1;
        const Event e = events_[i];
        executed_.push_back(e);
        switch (e.kind) {
            case EventKind::inject: {
                state_ = attach_register(state_, aux_register(e.qubit), e.state);
                layout_ = state_.layout();
                state_ = apply_swap(state_, end_site(e.end), layout_.register_site(aux_register(e.qubit)));
                break;
            }
            case EventKind::extract: {
                state_ = apply_swap(state_, end_site(e.end), layout_.register_site(storage_register(e.qubit)));
                break;
            }
            case EventKind::refocus:
                refocus(i, e);
                break;
            case EventKind::sample:
                break;
        }
    }

    Site end_site(ChainEnd end) const { return end == ChainEnd::first ? Site{0} : Site{spec_.chain_length - 1}; }

    void refocus(std::size_t i, const Event& e) {
        std::vector<Site> sites;
        for (const auto& q : e.qubits) sites.push_back(layout_.register_site(aux_register(q)));
        RefocusRecord rec;
        rec.time = e.time;
        rec.qubits = e.qubits;
        rec.probabilities = joint_distribution(state_, sites);
        const std::size_t all_ones = rec.probabilities.size() - 1;

        std::size_t outcome = 0;
        if (options_.policy == BranchPolicy::sampled) {
            const double u = uniform01(rng_);
            double acc = 0.0;
            outcome = all_ones;
            for (std::size_t k = 0; k < rec.probabilities.size(); ++k) {
                acc += rec.probabilities[k];
                if (u < acc) {
                    outcome = k;
                    break;
                }
            }
        }
        rec.outcome = static_cast<int>(outcome);
        const double p = rec.probabilities[outcome];
        record_.refocus.push_back(rec);
        if (p <= 0.0) {
            abort("refocus at t = " + format_number(e.time) + " has no weight on the requested outcome");
            return;
        }
        record_.success_probability *= p;
        record_.samples.push_back({e.time, MetricKind::success_probability, record_.success_probability,
                                   join(e.qubits)});
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const Site s = layout_.register_site(aux_register(e.qubits[k]));
            state_ = project_site(state_, s, static_cast<int>((outcome >> k) & 1));
        }
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const Site s = state_.layout().register_site(aux_register(e.qubits[k]));
            state_ = release_register(state_, s, static_cast<int>((outcome >> k) & 1));
        }
        layout_ = state_.layout();

        if (outcome == 0) {
            for (const auto& q : e.qubits) settled_.insert(q);
            return;
        }
        if (outcome != all_ones || e.qubits.size() < 2) {
            abort("mixed refocus outcome at t = " + format_number(e.time));
            return;
        }
        reset(i, e);
    }

    // All sources came back excited: retry these injections half a mirror time
    // later and push every pending event of unsettled qubits along with them.
    void reset(std::size_t i, const Event& e) {
        std::vector<Event> retry;
        std::set<std::string> failed(e.qubits.begin(), e.qubits.end());
        for (auto it = executed_.begin(); it != executed_.end();) {
            const bool failed_inject = it->kind == EventKind::inject && failed.count(it->qubit);
            const bool this_refocus = it->kind == EventKind::refocus && std::abs(it->time - e.time) < kSameTime &&
                                      it->qubits == e.qubits;
            if (failed_inject) {
                Event again = *it;
                again.time += 0.5;
                retry.push_back(again);
            }
            it = (failed_inject || this_refocus) ? executed_.erase(it) : it + 1;
        }
        Event again = e;
        again.time += 0.5;
        retry.push_back(again);

        auto unsettled = [&](const std::string& q) { return !settled_.count(q); };
        for (std::size_t k = i + 1; k < events_.size(); ++k) {
            Event& p = events_[k];
            const bool shift = (p.kind == EventKind::inject || p.kind == EventKind::extract) ? unsettled(p.qubit)
                               : p.kind == EventKind::refocus
                                   ? std::any_of(p.qubits.begin(), p.qubits.end(), unsettled)
                                   : false;
            if (shift) p.time += 0.5;
        }
        events_.insert(events_.begin() + static_cast<std::ptrdiff_t>(i + 1), retry.begin(), retry.end());
        std::stable_sort(events_.begin() + static_cast<std::ptrdiff_t>(i + 1), events_.end(), event_before);
        for (std::size_t k = i + 1; k < events_.size(); ++k) {
            if (events_[k].kind != EventKind::sample) end_time_ = std::max(end_time_, events_[k].time);
        }
        cursor_ = i + 1;
        refresh_reference();
    }

    void abort(std::string reason) {
        record_.status = RunStatus::aborted;
        record_.abort_reason = std::move(reason);
    }

    RunOptions options_;
    std::vector<Event> events_;
    std::vector<Event> executed_;
    std::size_t cursor_ = 0;
    SystemLayout layout_;
    PureState state_;
    HamiltonianSpec spec_;
    std::shared_ptr<const Propagator> propagator_;
    std::mt19937_64 rng_;
    std::set<std::string> settled_;
    RunRecord record_;
    double tm_ = 1.0;
    double now_ = 0.0;
    double end_time_ = 0.0;
};

}  // namespace

Schedule build_crossed_square(const HamiltonianSpec& spec, DelayScenario scenario, double delay,
                              BuildOptions options) {
    check_knitting_length(spec.chain_length);
    if (!(delay >= 0.0) || !std::isfinite(delay)) throw InvalidArgument("delay must be non-negative");
    if (scenario == DelayScenario::none && delay != 0.0) {
        throw InvalidArgument("a delay needs a scenario");
    }
    std::array<double, 4> shift{0.0, 0.0, 0.0, 0.0};
    switch (scenario) {
        case DelayScenario::none: break;
        case DelayScenario::A: shift[2] = shift[3] = delay; break;
        case DelayScenario::B: shift[3] = delay; break;
        case DelayScenario::C: shift[1] = shift[3] = delay; break;
        case DelayScenario::D: shift[0] = shift[3] = delay; break;
    }
    // extractions stay on the nominal clock; a delayed packet may miss it
    const std::optional<double> late = options.readout ? std::optional<double>(1.5) : std::nullopt;
    std::vector<Injection> inj{
        {"q1", ChainEnd::first, 0.0 + shift[0], 1.0},
        {"q2", ChainEnd::last, 0.0 + shift[1], 1.0},
        {"q3", ChainEnd::first, 0.5 + shift[2], late},
        {"q4", ChainEnd::last, 0.5 + shift[3], late},
    };
    return assemble(spec, std::move(inj), options);
}

Schedule build_crossed_square(int n, DelayScenario scenario, double delay, BuildOptions options) {
    check_knitting_length(n);
    return build_crossed_square(HamiltonianSpec::pst(n), scenario, delay, options);
}

Schedule build_ladder(const HamiltonianSpec& spec, int rounds, BuildOptions options) {
    check_knitting_length(spec.chain_length);
    if (rounds < 0) throw InvalidArgument("rounds must be non-negative");
    std::vector<Injection> inj;
    for (int k = 0; k <= rounds; ++k) {
        std::optional<double> out;
        if (k < rounds || options.readout) out = 0.5 * k + 1.0;
        inj.push_back({qubit_label(2 * k + 1), ChainEnd::first, 0.5 * k, out});
        inj.push_back({qubit_label(2 * k + 2), ChainEnd::last, 0.5 * k, out});
    }
    return assemble(spec, std::move(inj), options);
}

Schedule build_ladder(int n, int rounds, BuildOptions options) {
    check_knitting_length(n);
    return build_ladder(HamiltonianSpec::pst(n), rounds, options);
}

std::vector<MetricSample> RunRecord::series(MetricKind kind, std::string_view site_set) const {
    std::vector<MetricSample> out;
    for (const auto& s : samples) {
        if (s.kind == kind && (site_set.empty() || s.site_set == site_set)) out.push_back(s);
    }
    return out;
}

double RunRecord::value_at(MetricKind kind, double time, std::string_view site_set) const {
    const MetricSample* best = nullptr;
    for (const auto& s : samples) {
        if (s.kind != kind || (!site_set.empty() && s.site_set != site_set)) continue;
        if (!best || std::abs(s.time - time) < std::abs(best->time - time)) best = &s;
    }
    if (!best) throw InvalidArgument("no " + std::string(to_string(kind)) + " samples in the record");
    return best->value;
}

RunRecord run(const Schedule& schedule, const RunOptions& options) {
    return Runner(schedule, options).finish();
}

double injection_success_probability(const HamiltonianSpec& spec, const RunOptions& options) {
    BuildOptions b;
    b.readout = false;
    b.sample_at_arrival = false;
    Schedule s = build_crossed_square(spec, DelayScenario::none, 0.0, b);
    std::erase_if(s.events, [](const Event& e) { return e.time > 0.5; });
    s.end_time = 0.5;
    RunOptions o = options;
    o.policy = BranchPolicy::post_select;
    o.track_conservation = false;
    const RunRecord r = run(s, o);
    for (const auto& rec : r.refocus) {
        if (std::abs(rec.time - 0.5) < kSameTime) return rec.probabilities.front();
    }
    throw NumericalError("no refocus at t_M/2");
}

double injection_success_probability(int n, const RunOptions& options) {
    check_knitting_length(n);
    return injection_success_probability(HamiltonianSpec::pst(n), options);
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(const RunRecord& record, std::ostream& out) {
    out << "time,metric_kind,site_set,value\n";
    for (const auto& s : record.samples) {
        out << format_number(s.time) << ',' << to_string(s.kind) << ",\"" << s.site_set << "\","
            << format_number(s.value) << '\n';
    }
}

void write_json(const RunRecord& record, std::ostream& out) {
    nlohmann::ordered_json j;
    j["status"] = record.status == RunStatus::completed ? "completed" : "aborted";
    if (!record.abort_reason.empty()) j["abort_reason"] = record.abort_reason;
    j["success_probability"] = record.success_probability;
    j["max_norm_drift"] = record.max_norm_drift;
    j["max_energy_drift"] = record.max_energy_drift;
    j["refocus"] = nlohmann::ordered_json::array();
    for (const auto& r : record.refocus) {
        j["refocus"].push_back({{"time", r.time}, {"qubits", r.qubits},
                                {"probabilities", r.probabilities}, {"outcome", r.outcome}});
    }
    if (record.reference) {
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        const auto& v = record.reference->graph.vertices();
        for (const auto& [a, b] : record.reference->graph.edges()) edges.push_back({v[a], v[b]});
        j["reference"] = {{"time", record.reference->time}, {"vertices", v}, {"edges", edges}};
    }
    j["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : record.samples) {
        j["samples"].push_back({{"time", s.time}, {"metric_kind", to_string(s.kind)},
                                {"site_set", s.site_set}, {"value", s.value}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace spinknit
