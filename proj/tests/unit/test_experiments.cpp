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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinknit/error.hpp"
#include "spinknit/experiments.hpp"

using namespace spinknit;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string csv(const ResultTable& t) {
    std::ostringstream out;
    write_csv(t, out);
    return out.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("config parsing") {
    const auto c = parse_config(
        "kind: delay_compare\n"
        "chain_lengths: [9, 13]\n"
        "delay: [0, 0.05, 0.1]\n"
        "scenarios: [A, C]\n"
        "seed: 12\n"
        "fidelity: squared\n"
        "output: {path: out/x.json, format: json}\n");
    CHECK(c.kind == ExperimentKind::delay_compare);
    CHECK(c.chain_lengths == std::vector<int>{9, 13});
    CHECK(c.scenarios == std::vector<DelayScenario>{DelayScenario::A, DelayScenario::C});
    CHECK(c.fidelity == FidelityConvention::squared);
    CHECK(c.format == OutputFormat::json);
    CHECK(c.realizations == 100);
    CHECK(parameter_points(c).size() == 12);
    CHECK(parameter_points(c)[1].delay == 0.05);

    const auto back = parse_config(to_yaml(c));
    CHECK(to_yaml(back) == to_yaml(c));
    CHECK(parse_config("kind: gate_trace\nchain_lengths: 13\n").chain_lengths == std::vector<int>{13});
}

TEST_CASE("config diagnostics") {
    CHECK(config_error("kind: gate_trace\nchain_lenghts: [9]\n").find("line 2") != std::string::npos);
    CHECK(config_error("kind: gate_trace\nchain_lenghts: [9]\n").find("chain_lenghts") != std::string::npos);
    CHECK(config_error("kind: knit_trace\nchain_lengths: [9, 11]\n").find("line 2, field 'chain_lengths'") !=
          std::string::npos);
    CHECK(config_error("kind: gate_sweep\n").find("unknown experiment kind") != std::string::npos);
    CHECK(config_error("chain_lengths: [9]\n").find("kind") != std::string::npos);
    CHECK(config_error("kind: gate_trace\nrealizations: many\n").find("realizations") != std::string::npos);
    CHECK(config_error("kind: gate_trace\ndelay: 0.1\n").find("delay_compare") != std::string::npos);
    CHECK(config_error("kind: delay_compare\nscenarios: [none]\n").find("scenarios") != std::string::npos);
    CHECK(config_error("kind: gate_trace\nepsilon: -0.1\n").find("epsilon") != std::string::npos);
    CHECK(config_error("kind: gate_trace\nsampling: {count: 1}\n").find("sampling") != std::string::npos);
    CHECK(config_error("").find("empty") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), IoError);
}

TEST_CASE("seed derivation") {
    const ParameterPoint p{9, 0.05, 0.0, 0.0, 0.0, DelayScenario::none};
    ParameterPoint q = p;
    q.chain_length = 13;
    const auto id = experiment_id(ExperimentKind::gate_sweep_epsilon, p);
    CHECK(id == experiment_id(ExperimentKind::gate_sweep_epsilon, p));
    CHECK(id != experiment_id(ExperimentKind::gate_sweep_epsilon, q));
    CHECK(id != experiment_id(ExperimentKind::knit_sweep_epsilon, p));
    std::set<std::uint64_t> seeds;
    for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(derive_seed(7, id, r));
    CHECK(seeds.size() == 1000);
    CHECK(derive_seed(7, id, 3) != derive_seed(8, id, 3));
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("gate trace peaks at the mirror time") {
    ExperimentConfig c;
    c.kind = ExperimentKind::gate_trace;
    c.chain_lengths = {9};
    c.sampling = {0.0, 3.0, 13};
    const ResultTable t = run_experiment(c, 1);
    const auto rows = t.select(MetricKind::eof, 9);
    REQUIRE(rows.size() == 13);
    CHECK(rows[4].time == doctest::Approx(1.0));
    CHECK(rows[4].value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rows[12].value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rows[0].value < 1e-12);
    CHECK(rows[4].realizations == 1);
    CHECK(t.select(MetricKind::entropy, 9, "1,9").size() == 13);
}

TEST_CASE("disorder sweeps are reproducible and thread-independent") {
    ExperimentConfig c;
    c.kind = ExperimentKind::gate_sweep_epsilon;
    c.chain_lengths = {9, 10};
    c.epsilon = {0.0, 0.1};
    c.realizations = 12;
    c.seed = 5;
    const std::string one = csv(run_experiment(c, 1));
    CHECK(one == csv(run_experiment(c, 3)));
    c.keep_realizations = true;
    const ResultTable full = run_experiment(c, 2);
    CHECK(full.rows.size() == 4 + 24);

    const auto rows = full.select(MetricKind::eof, 9);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].realizations == 1);
    CHECK(rows[0].std_error == 0.0);
    CHECK(rows[1].realizations == 12);
    CHECK(rows[1].std_error > 0.0);
    CHECK(rows[1].value < 1.0);

    // the mean is the mean of the per-seed rows
    double sum = 0.0;
    for (const auto& r : full.rows) {
        if (!r.mean && r.chain_length == 9) sum += r.value;
    }
    CHECK(rows[1].value == doctest::Approx(sum / 12).epsilon(1e-14));

    c.seed = 6;
    CHECK(run_experiment(c, 1).select(MetricKind::eof, 9)[1].value != rows[1].value);
}

TEST_CASE("knit kinds") {
    ExperimentConfig c;
    c.kind = ExperimentKind::injection_probability;
    c.chain_lengths = {9};
    auto rows = run_experiment(c, 1).select(MetricKind::success_probability, 9);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].value == doctest::Approx(0.988281).epsilon(1e-5));

    c.kind = ExperimentKind::delay_compare;
    c.delay = {0.1};
    c.scenarios = {DelayScenario::A, DelayScenario::B};
    const ResultTable d = run_experiment(c, 1);
    rows = d.select(MetricKind::fidelity, 9);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scenario == DelayScenario::A);
    CHECK(rows[0].time == doctest::Approx(1.6));
    CHECK(rows[0].value == doctest::Approx(0.9586).epsilon(1e-3));
    CHECK(rows[0].value > rows[1].value);

    c.kind = ExperimentKind::knit_sweep_delta;
    c.delay = {0.0};
    c.delta = {0.0, 0.01};
    rows = run_experiment(c, 1).select(MetricKind::fidelity, 9);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value == doctest::Approx(0.991668).epsilon(1e-5));
    CHECK(rows[1].value < rows[0].value);
}

TEST_CASE("table output") {
    ResultTable empty;
    CHECK(csv(empty) ==
          "kind,N,epsilon,gamma,delta,delay,scenario,aggregate,seed,realizations,metric,site_set,time,value,stderr\n");

    ResultTable one;
    ResultRow r;
    r.chain_length = 9;
    r.site_set = "1,9";
    r.time = 1.0;
    r.value = 2.0 / 3.0;
    one.rows.push_back(r);
    const std::string text = csv(one);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.find("gate_trace,9,0,0,0,0,none,mean,,1,eof,\"1,9\",1,0.666666666667,0\n") != std::string::npos);

    std::ostringstream js;
    write_json(one, js);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["rows"][0]["value"].get<double>() == 0.666666666667);
    CHECK(doc["rows"][0]["seed"].is_null());

    const auto dir = std::filesystem::temp_directory_path() / "spinknit_emit_test";
    emit(one, dir / "t.csv", OutputFormat::csv);
    CHECK(std::filesystem::file_size(dir / "t.csv") == text.size());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(emit(one, "/proc/spinknit/nope.csv", OutputFormat::csv), IoError);
}

TEST_CASE("job count resolution") {
    CHECK(resolve_jobs(3) == 3);
    ::setenv("SPINKNIT_JOBS", "2", 1);
    CHECK(resolve_jobs(0) == 2);
    ::setenv("SPINKNIT_JOBS", "two", 1);
    CHECK_THROWS_AS(resolve_jobs(0), ConfigError);
    ::unsetenv("SPINKNIT_JOBS");
    CHECK(resolve_jobs(0) >= 1);
}

TEST_CASE("fit helpers") {
    const LineFit f = fit_line({1, 2, 3}, {3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.residual_norm < 1e-12);
    CHECK(power_law_exponent({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(power_law_exponent({1, 2}, {0, 1}), InvalidArgument);

    // triangle peak of height 1 at t = 2
    const std::vector<double> t{0, 1, 2, 3, 4};
    const std::vector<double> v{0, 0.5, 1, 0.5, 0};
    CHECK(window_width(t, v, 2.0, 0.75, true) == doctest::Approx(1.0));
    CHECK(window_width(t, v, 2.0, 0.25, true) == doctest::Approx(3.0));
    CHECK(window_width(t, v, 2.0, 1.5, true) == 0.0);
    const std::vector<double> dip{1, 0.5, 0, 0.5, 1};
    CHECK(window_width(t, dip, 2.0, 0.25, false) == doctest::Approx(1.0));
    CHECK_THROWS_AS(window_width(t, dip, 2.0, 2.0, false), InvalidArgument);
}

}  // TEST_SUITE
