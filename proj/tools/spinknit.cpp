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

// spinknit command-line tool.
//
//   spinknit gate   [--config FILE | --n 9,13] [--seed S] [--out PATH] [--jobs J]
//   spinknit knit   [--config FILE | --n 9 --rounds R --scenario A --delay 0.1 --no-readout]
//   spinknit sweep  --config FILE
//   spinknit oracle [--config SCHEDULE.yaml | --n 9 --rounds R] [--schedule]
//
// Exit codes: 0 success, 1 bad config or arguments, 2 numerical failure, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinknit/error.hpp"
#include "spinknit/experiments.hpp"
#include "spinknit/protocol.hpp"
#include "spinknit/serialization.hpp"

using namespace spinknit;

namespace {

enum Exit { ok = 0, config_failure = 1, numerical_failure = 2, io_failure = 3 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int jobs = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "YAML config file");
    cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
    cmd->add_option("--out", c.out, "output file; .json selects JSON, anything else CSV (default stdout)");
    cmd->add_option("--jobs", c.jobs, "worker threads (default SPINKNIT_JOBS or all cores)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path);
}

OutputFormat format_for(const std::string& path, OutputFormat fallback) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return OutputFormat::json;
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return OutputFormat::csv;
    return fallback;
}

int run_config(ExperimentConfig config, const Common& c) {
    if (c.seed) config.seed = *c.seed;
    if (!c.out.empty()) {
        config.format = format_for(c.out, config.format);
        config.output = c.out;
    }
    const ResultTable table = run_experiment(config, c.jobs);
    if (config.output.empty()) {
        if (config.format == OutputFormat::json) {
            write_json(table, std::cout);
        } else {
            write_csv(table, std::cout);
        }
    } else {
        emit(table, config.output, config.format);
    }
    return ok;
}

ExperimentConfig load_for(const Common& c, bool gate_only, bool knit_only, const char* command) {
    ExperimentConfig config = load_config(c.config);
    if ((gate_only && !is_gate_kind(config.kind)) || (knit_only && is_gate_kind(config.kind))) {
        throw ConfigError(std::string("'") + command + "' does not run experiments of kind '" +
                          std::string(to_string(config.kind)) + "'; use 'sweep'");
    }
    return config;
}

Schedule quick_schedule(int n, int rounds, const std::string& scenario, double delay, bool readout) {
    BuildOptions b;
    b.readout = readout;
    const DelayScenario s = delay_scenario_from_string(scenario);
    if (s != DelayScenario::none) {
        if (rounds != 1) throw InvalidArgument("delay scenarios apply to the crossed square (rounds = 1)");
        return build_crossed_square(n, s, delay, b);
    }
    return build_ladder(n, rounds, b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-chain cluster-state knitting simulator"};
    app.require_subcommand(1);

    Common gate_opts, knit_opts, sweep_opts, oracle_opts;
    std::vector<int> gate_n{9};
    int knit_n = 9, rounds = 1;
    std::string scenario = "none";
    double delay = 0.0;
    bool no_readout = false;
    std::string fidelity = "root";
    bool print_schedule = false;

    auto* gate = app.add_subcommand("gate", "two-qubit gate traces and sweeps");
    add_common(gate, gate_opts);
    gate->add_option("--n", gate_n, "chain lengths for a quick EoF trace (no config)")->delimiter(',');

    auto* knit = app.add_subcommand("knit", "knitting runs");
    add_common(knit, knit_opts);
    knit->add_option("--n", knit_n, "chain length for a single run (no config)");
    knit->add_option("--rounds", rounds, "extra injection rounds (1 = crossed square)");
    knit->add_option("--scenario", scenario, "delay scenario: none, A, B, C, D");
    knit->add_option("--delay", delay, "injection delay in mirror times");
    knit->add_flag("--no-readout", no_readout, "leave the last pair in the chain");
    knit->add_option("--fidelity", fidelity, "root or squared");

    auto* sweep = app.add_subcommand("sweep", "run any experiment config");
    add_common(sweep, sweep_opts);
    sweep->get_option("--config")->required();

    auto* oracle = app.add_subcommand("oracle", "crossing graph of a schedule");
    add_common(oracle, oracle_opts);
    oracle->add_option("--n", knit_n, "chain length (no config)");
    oracle->add_option("--rounds", rounds, "extra injection rounds");
    oracle->add_flag("--schedule", print_schedule, "print the schedule as YAML instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_failure;
    }

    try {
        if (*gate) {
            if (!gate_opts.config.empty()) return run_config(load_for(gate_opts, true, false, "gate"), gate_opts);
            ExperimentConfig c;
            c.kind = ExperimentKind::gate_trace;
            c.chain_lengths = gate_n;
            return run_config(c, gate_opts);
        }
        if (*knit) {
            if (!knit_opts.config.empty()) return run_config(load_for(knit_opts, false, true, "knit"), knit_opts);
            RunOptions o;
            o.fidelity = fidelity_convention_from_string(fidelity);
            o.seed = knit_opts.seed.value_or(0);
            const Schedule s = quick_schedule(knit_n, rounds, scenario, delay, !no_readout);
            const RunRecord r = run(s, o);
            std::ostringstream text;
            if (format_for(knit_opts.out, OutputFormat::csv) == OutputFormat::json) {
                write_json(r, text);
            } else {
                write_csv(r, text);
            }
            write_text(knit_opts.out, text.str());
            if (r.status != RunStatus::completed) {
                std::cerr << "run aborted: " << r.abort_reason << "\n";
                return numerical_failure;
            }
            return ok;
        }
        if (*sweep) return run_config(load_config(sweep_opts.config), sweep_opts);
        if (*oracle) {
            const Schedule s = oracle_opts.config.empty() ? build_ladder(knit_n, rounds)
                                                          : schedule_from_yaml(read_file(oracle_opts.config));
            if (print_schedule) {
                write_text(oracle_opts.out, to_yaml(s));
                return ok;
            }
            const CrossingGraph g = crossings(s);
            nlohmann::ordered_json doc = nlohmann::ordered_json::parse(g.to_json());
            nlohmann::ordered_json list = nlohmann::ordered_json::array();
            for (const auto& c : g.crossings()) {
                list.push_back({{"a", g.vertices()[c.a]}, {"b", g.vertices()[c.b]}, {"time", c.time},
                                {"position", c.position}});
            }
            doc["chain_length"] = s.chain_length();
            doc["crossings"] = std::move(list);
            write_text(oracle_opts.out, doc.dump(2) + "\n");
            return ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_failure;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return config_failure;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io_failure;
    }
    return ok;
}
