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

#include "spinknit/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "spinknit/error.hpp"
#include "spinknit/propagator.hpp"
#include "spinknit/protocol.hpp"
#include "spinknit/serialization.hpp"
#include "yaml_support.hpp"

namespace spinknit {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 10> kKinds{{
    {ExperimentKind::gate_trace, "gate_trace"},
    {ExperimentKind::gate_sweep_epsilon, "gate_sweep_epsilon"},
    {ExperimentKind::gate_surface_gamma_epsilon, "gate_surface_gamma_epsilon"},
    {ExperimentKind::gate_sweep_delta, "gate_sweep_delta"},
    {ExperimentKind::knit_trace, "knit_trace"},
    {ExperimentKind::knit_sweep_epsilon, "knit_sweep_epsilon"},
    {ExperimentKind::knit_surface, "knit_surface"},
    {ExperimentKind::knit_sweep_delta, "knit_sweep_delta"},
    {ExperimentKind::injection_probability, "injection_probability"},
    {ExperimentKind::delay_compare, "delay_compare"},
}};

// One measured number of one run.
struct Value {
    MetricKind metric;
    std::string site_set;
    double time;
    double value;
};

std::string end_pair_label(int n) { return "1," + std::to_string(n); }

PureState gate_input(int n) {
    std::vector<QubitState> q(static_cast<std::size_t>(n), QubitState::ground());
    q.front() = QubitState::plus();
    q.back() = QubitState::plus();
    return product_state(SystemLayout(n), q);
}

std::vector<Value> gate_values(const ExperimentConfig& c, const HamiltonianSpec& spec) {
    const int n = spec.chain_length;
    const std::vector<double> times =
        c.kind == ExperimentKind::gate_trace ? c.sampling.times() : std::vector<double>{1.0};
    std::vector<double> physical(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) physical[i] = times[i] * spec.mirror_time();

    const Propagator propagator(spec);
    const Site pair[] = {Site{0}, Site{n - 1}};
    const std::string label = end_pair_label(n);
    std::vector<Value> out;
    propagator.evolve_samples(gate_input(n), physical, [&](std::size_t i, PureState& s) {
        const DensityMatrix rho = partial_trace(s, pair);
        out.push_back({MetricKind::eof, label, times[i], eof(rho)});
        if (c.kind == ExperimentKind::gate_trace) {
            out.push_back({MetricKind::entropy, label, times[i], entropy(rho)});
        }
    });
    return out;
}

RunOptions run_options(const ExperimentConfig& c) {
    RunOptions o;
    o.fidelity = c.fidelity;
    o.track_conservation = false;
    return o;
}

std::vector<Value> knit_values(const ExperimentConfig& c, const ParameterPoint& p,
                               const HamiltonianSpec& spec) {
    std::vector<Value> out;
    if (c.kind == ExperimentKind::injection_probability) {
        out.push_back({MetricKind::success_probability, "q3,q4", 0.5,
                       injection_success_probability(spec, run_options(c))});
        return out;
    }

    Schedule schedule;
    if (c.kind == ExperimentKind::delay_compare) {
        BuildOptions b;
        b.readout = false;
        schedule = build_crossed_square(spec, p.scenario, p.delay, b);
    } else if (c.kind == ExperimentKind::knit_trace) {
        BuildOptions b;
        b.readout = c.readout;
        b.sample_at_arrival = false;
        schedule = build_ladder(spec, c.rounds, b);
        const auto times = c.sampling.times();
        add_samples(schedule, times, sample_metric::fidelity | sample_metric::target_entropy |
                                         sample_metric::end_pair);
        schedule.end_time = std::max(schedule.end_time, times.back());
    } else {
        schedule = build_ladder(spec, c.rounds);
    }

    const RunRecord r = run(schedule, run_options(c));
    if (r.status != RunStatus::completed) throw NumericalError("run aborted: " + r.abort_reason);
    for (const auto& s : r.samples) {
        if (s.kind == MetricKind::norm_drift || s.kind == MetricKind::energy_drift) continue;
        if (s.kind == MetricKind::success_probability) continue;
        out.push_back({s.kind, s.site_set, s.time, s.value});
    }
    if (c.kind != ExperimentKind::knit_trace) {
        out.push_back({MetricKind::success_probability, "all", schedule.end_time, r.success_probability});
    }
    return out;
}

// Runs f(i) for i in [0, count) on `jobs` threads; rethrows the first failure.
template <typename F>
void parallel_for(std::size_t count, int jobs, F&& f) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
                return;
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::max(1, jobs));
    if (threads == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::string csv_quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

// Parses a number back from its printed form so JSON matches the CSV digits.
double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

bool is_knit(ExperimentKind k) { return !is_gate_kind(k); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKinds) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKinds) {
        if (n == name) return k;
    }
    throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

bool is_gate_kind(ExperimentKind kind) {
    return kind == ExperimentKind::gate_trace || kind == ExperimentKind::gate_sweep_epsilon ||
           kind == ExperimentKind::gate_surface_gamma_epsilon || kind == ExperimentKind::gate_sweep_delta;
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw InvalidArgument("unknown output format '" + std::string(name) + "'");
}

std::vector<double> SamplingGrid::times() const { return uniform_times(start, stop, count); }

void ExperimentConfig::validate() const {
    auto bad = [](std::string_view field, const std::string& what) {
        throw ConfigError("field '" + std::string(field) + "': " + what);
    };
    if (chain_lengths.empty()) bad("chain_lengths", "at least one chain length is required");
    for (int n : chain_lengths) {
        if (is_gate_kind(kind) && (n < 2 || n > 40)) bad("chain_lengths", "gate runs need 2 <= N <= 40");
        if (is_knit(kind) && (n < 9 || n % 4 != 1)) {
            bad("chain_lengths", "knitting needs N >= 9 with N = 1 (mod 4); got " + std::to_string(n));
        }
    }
    auto non_negative = [&](std::string_view field, const std::vector<double>& v) {
        if (v.empty()) bad(field, "list is empty");
        for (double x : v) {
            if (!(x >= 0.0)) bad(field, "values must be non-negative");
        }
    };
    non_negative("epsilon", epsilon);
    non_negative("gamma", gamma);
    non_negative("delta", delta);
    non_negative("delay", delay);
    if (kind != ExperimentKind::delay_compare && (delay.size() != 1 || delay[0] != 0.0)) {
        bad("delay", "only delay_compare takes injection delays");
    }
    if (kind == ExperimentKind::delay_compare) {
        if (scenarios.empty()) bad("scenarios", "list is empty");
        for (auto s : scenarios) {
            if (s == DelayScenario::none) bad("scenarios", "use scenarios A to D");
        }
    }
    if (realizations < 1) bad("realizations", "must be at least 1");
    if (rounds < 0 || rounds > 6) bad("rounds", "must be between 0 and 6");
    if (kind == ExperimentKind::gate_trace || kind == ExperimentKind::knit_trace) {
        if (sampling.count < 2) bad("sampling.count", "need at least two samples");
        if (!(sampling.start >= 0.0) || !(sampling.stop > sampling.start)) {
            bad("sampling", "need 0 <= start < stop");
        }
    }
}

ExperimentConfig parse_config(std::string_view text) {
    const YAML::Node root = yaml::parse(text);
    if (!root || root.IsNull()) throw ConfigError("config is empty");
    yaml::check_keys(root, "config",
                     {"kind", "chain_lengths", "epsilon", "gamma", "delta", "delay", "scenarios",
                      "realizations", "seed", "normalization", "fidelity", "rounds", "readout",
                      "keep_realizations", "sampling", "output"});
    auto named = [&](const YAML::Node& node, std::string_view field, auto&& convert) {
        try {
            return convert(yaml::scalar<std::string>(node, field));
        } catch (const InvalidArgument& e) {
            yaml::fail(node, field, e.what());
        }
    };

    ExperimentConfig c;
    const YAML::Node kind = root["kind"];
    if (!kind) yaml::fail(root, "kind", "missing required field");
    c.kind = named(kind, "kind", [](const std::string& s) { return experiment_kind_from_string(s); });
    c.chain_lengths = yaml::list<int>(root, "chain_lengths", c.chain_lengths);
    c.epsilon = yaml::list<double>(root, "epsilon", c.epsilon);
    c.gamma = yaml::list<double>(root, "gamma", c.gamma);
    c.delta = yaml::list<double>(root, "delta", c.delta);
    c.delay = yaml::list<double>(root, "delay", c.delay);
    if (const YAML::Node s = root["scenarios"]) {
        c.scenarios.clear();
        const auto scenario = [](const std::string& name) { return delay_scenario_from_string(name); };
        if (s.IsSequence()) {
            for (const auto& item : s) c.scenarios.push_back(named(item, "scenarios", scenario));
        } else {
            c.scenarios.push_back(named(s, "scenarios", scenario));
        }
    }
    c.realizations = yaml::get<int>(root, "realizations", c.realizations);
    c.seed = yaml::get<std::uint64_t>(root, "seed", c.seed);
    if (const YAML::Node n = root["normalization"]) {
        c.normalization = named(n, "normalization", [](const std::string& s) { return normalization_from_string(s); });
    }
    if (const YAML::Node n = root["fidelity"]) {
        c.fidelity = named(n, "fidelity", [](const std::string& s) { return fidelity_convention_from_string(s); });
    }
    c.rounds = yaml::get<int>(root, "rounds", c.rounds);
    c.readout = yaml::get<bool>(root, "readout", c.readout);
    c.keep_realizations = yaml::get<bool>(root, "keep_realizations", c.keep_realizations);
    if (const YAML::Node s = root["sampling"]) {
        yaml::check_keys(s, "sampling", {"start", "stop", "count"});
        c.sampling.start = yaml::get<double>(s, "start", c.sampling.start);
        c.sampling.stop = yaml::get<double>(s, "stop", c.sampling.stop);
        c.sampling.count = yaml::get<int>(s, "count", c.sampling.count);
    }
    if (const YAML::Node o = root["output"]) {
        yaml::check_keys(o, "output", {"path", "format"});
        c.output = yaml::get<std::string>(o, "path", "");
        if (const YAML::Node f = o["format"]) {
            c.format = named(f, "format", [](const std::string& s) { return output_format_from_string(s); });
        }
    }

    // report semantic errors against the line of the field they name
    try {
        c.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const auto open = msg.find('\''), close = msg.find('\'', open + 1);
        std::string field = msg.substr(open + 1, close - open - 1);
        field = field.substr(0, field.find('.'));
        if (const YAML::Node n = root[field]) throw ConfigError("line " + std::to_string(n.Mark().line + 1) + ", " + msg);
        throw;
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::stringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string to_yaml(const ExperimentConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    std::vector<std::string> scenarios;
    for (auto s : c.scenarios) scenarios.emplace_back(to_string(s));
    out << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.kind));
    out << YAML::Key << "chain_lengths" << YAML::Value << YAML::Flow << c.chain_lengths;
    out << YAML::Key << "epsilon" << YAML::Value << YAML::Flow << c.epsilon;
    out << YAML::Key << "gamma" << YAML::Value << YAML::Flow << c.gamma;
    out << YAML::Key << "delta" << YAML::Value << YAML::Flow << c.delta;
    out << YAML::Key << "delay" << YAML::Value << YAML::Flow << c.delay;
    out << YAML::Key << "scenarios" << YAML::Value << YAML::Flow << scenarios;
    out << YAML::Key << "realizations" << YAML::Value << c.realizations;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "normalization" << YAML::Value << std::string(to_string(c.normalization));
    out << YAML::Key << "fidelity" << YAML::Value << std::string(to_string(c.fidelity));
    out << YAML::Key << "rounds" << YAML::Value << c.rounds;
    out << YAML::Key << "readout" << YAML::Value << c.readout;
    out << YAML::Key << "keep_realizations" << YAML::Value << c.keep_realizations;
    out << YAML::Key << "sampling" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "start" << YAML::Value << c.sampling.start;
    out << YAML::Key << "stop" << YAML::Value << c.sampling.stop;
    out << YAML::Key << "count" << YAML::Value << c.sampling.count << YAML::EndMap;
    out << YAML::Key << "output" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "path" << YAML::Value << c.output;
    out << YAML::Key << "format" << YAML::Value << std::string(to_string(c.format)) << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::vector<ParameterPoint> parameter_points(const ExperimentConfig& c) {
    std::vector<ParameterPoint> out;
    const bool delays = c.kind == ExperimentKind::delay_compare;
    const std::vector<DelayScenario> scenarios = delays ? c.scenarios : std::vector{DelayScenario::none};
    const std::vector<double> shifts = delays ? c.delay : std::vector{0.0};
    for (int n : c.chain_lengths) {
        for (double e : c.epsilon) {
            for (double g : c.gamma) {
                for (double d : c.delta) {
                    for (auto s : scenarios) {
                        for (double dt : shifts) out.push_back({n, e, g, d, dt, s});
                    }
                }
            }
        }
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t experiment_id(ExperimentKind kind, const ParameterPoint& p) {
    // FNV-1a over a canonical text form
    const std::string key = std::string(to_string(kind)) + "|" + std::to_string(p.chain_length) + "|" +
                            format_number(p.epsilon) + "|" + format_number(p.gamma) + "|" +
                            format_number(p.delta) + "|" + std::string(to_string(p.scenario)) + "|" +
                            format_number(p.delay);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : key) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id, std::uint64_t realization) {
    return splitmix64(splitmix64(splitmix64(master) ^ id) ^ realization);
}

HamiltonianSpec point_hamiltonian(const ParameterPoint& p, std::uint64_t disorder_seed,
                                  Normalization normalization) {
    return HamiltonianSpec::perturbed(p.chain_length, p.epsilon, p.gamma, p.delta, disorder_seed,
                                      normalization);
}

std::vector<ResultRow> ResultTable::select(MetricKind metric, int n, std::string_view site_set) const {
    std::vector<ResultRow> out;
    for (const auto& r : rows) {
        if (r.mean && r.metric == metric && r.chain_length == n && (site_set.empty() || r.site_set == site_set)) {
            out.push_back(r);
        }
    }
    return out;
}

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPINKNIT_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw ConfigError("SPINKNIT_JOBS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ResultTable run_experiment(const ExperimentConfig& config, int jobs) {
    config.validate();
    const auto points = parameter_points(config);

    struct Cell {
        std::size_t point;
        int realization;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    std::vector<int> draws(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        draws[i] = points[i].epsilon > 0.0 ? config.realizations : 1;
        const std::uint64_t id = experiment_id(config.kind, points[i]);
        for (int r = 0; r < draws[i]; ++r) {
            cells.push_back({i, r, derive_seed(config.seed, id, static_cast<std::uint64_t>(r))});
        }
    }

    std::vector<std::vector<Value>> results(cells.size());
    parallel_for(cells.size(), resolve_jobs(jobs), [&](std::size_t i) {
        const Cell& cell = cells[i];
        const ParameterPoint& p = points[cell.point];
        const HamiltonianSpec spec = point_hamiltonian(p, cell.seed, config.normalization);
        results[i] = is_gate_kind(config.kind) ? gate_values(config, spec) : knit_values(config, p, spec);
    });

    ResultTable table;
    std::size_t first = 0;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const ParameterPoint& p = points[pi];
        const int count = draws[pi];
        ResultRow base;
        base.kind = config.kind;
        base.chain_length = p.chain_length;
        base.epsilon = p.epsilon;
        base.gamma = p.gamma;
        base.delta = p.delta;
        base.delay = p.delay;
        base.scenario = p.scenario;

        const auto& head = results[first];
        for (std::size_t k = 0; k < head.size(); ++k) {
            double sum = 0.0, sum_sq = 0.0;
            for (int r = 0; r < count; ++r) {
                const auto& v = results[first + static_cast<std::size_t>(r)];
                if (v.size() != head.size() || v[k].metric != head[k].metric || v[k].time != head[k].time) {
                    throw NumericalError("realizations produced different sample layouts");
                }
                sum += v[k].value;
                sum_sq += v[k].value * v[k].value;
            }
            ResultRow row = base;
            row.realizations = count;
            row.metric = head[k].metric;
            row.site_set = head[k].site_set;
            row.time = head[k].time;
            row.value = sum / count;
            if (count > 1) {
                const double var = std::max(0.0, (sum_sq - count * row.value * row.value) / (count - 1));
                row.std_error = std::sqrt(var / count);
            }
            table.rows.push_back(row);
        }
        if (config.keep_realizations && p.epsilon > 0.0) {
            for (int r = 0; r < count; ++r) {
                for (const auto& v : results[first + static_cast<std::size_t>(r)]) {
                    ResultRow row = base;
                    row.mean = false;
                    row.seed = cells[first + static_cast<std::size_t>(r)].seed;
                    row.metric = v.metric;
                    row.site_set = v.site_set;
                    row.time = v.time;
                    row.value = v.value;
                    table.rows.push_back(row);
                }
            }
        }
        first += static_cast<std::size_t>(count);
    }
    return table;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    out << "kind,N,epsilon,gamma,delta,delay,scenario,aggregate,seed,realizations,metric,site_set,time,"
           "value,stderr\n";
    for (const auto& r : table.rows) {
        out << to_string(r.kind) << ',' << r.chain_length << ',' << format_number(r.epsilon) << ','
            << format_number(r.gamma) << ',' << format_number(r.delta) << ',' << format_number(r.delay) << ','
            << to_string(r.scenario) << ',' << (r.mean ? "mean" : "seed") << ',';
        if (!r.mean) out << r.seed;
        out << ',' << r.realizations << ',' << to_string(r.metric) << ',' << csv_quote(r.site_set) << ','
            << format_number(r.time) << ',' << format_number(r.value) << ',' << format_number(r.std_error)
            << '\n';
    }
}

void write_json(const ResultTable& table, std::ostream& out) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json j;
        j["kind"] = std::string(to_string(r.kind));
        j["N"] = r.chain_length;
        j["epsilon"] = rounded(r.epsilon);
        j["gamma"] = rounded(r.gamma);
        j["delta"] = rounded(r.delta);
        j["delay"] = rounded(r.delay);
        j["scenario"] = std::string(to_string(r.scenario));
        j["aggregate"] = r.mean ? "mean" : "seed";
        j["seed"] = r.mean ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.seed);
        j["realizations"] = r.realizations;
        j["metric"] = std::string(to_string(r.metric));
        j["site_set"] = r.site_set;
        j["time"] = rounded(r.time);
        j["value"] = rounded(r.value);
        j["stderr"] = rounded(r.std_error);
        rows.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void emit(const ResultTable& table, const std::filesystem::path& path, OutputFormat format) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    if (format == OutputFormat::json) {
        write_json(table, out);
    } else {
        write_csv(table, out);
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidArgument("line fit needs distinct x values");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.residual_norm = std::sqrt(rss);
    return f;
}

double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("power-law fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_line(lx, ly).slope;
}

double window_width(const std::vector<double>& times, const std::vector<double>& values, double center,
                    double level, bool peak) {
    if (times.size() != values.size() || times.size() < 3) throw InvalidArgument("need matching samples");
    std::size_t c = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs(times[i] - center) < std::abs(times[c] - center)) c = i;
    }
    auto inside = [&](std::size_t i) { return peak ? values[i] >= level : values[i] <= level; };
    if (!inside(c)) return 0.0;
    std::size_t lo = c, hi = c;
    while (lo > 0 && inside(lo - 1)) --lo;
    while (hi + 1 < times.size() && inside(hi + 1)) ++hi;
    if (lo == 0 || hi + 1 == times.size()) throw InvalidArgument("window is not closed within the samples");
    auto cross = [&](std::size_t a, std::size_t b) {
        return times[a] + (level - values[a]) * (times[b] - times[a]) / (values[b] - values[a]);
    };
    return cross(hi, hi + 1) - cross(lo - 1, lo);
}

}  // namespace spinknit
