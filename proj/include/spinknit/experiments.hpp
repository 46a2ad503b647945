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

#pragma once

// Config-driven experiment runs: traces, parameter sweeps with disorder
// averaging, and the result table they produce.
//
// A config enumerates parameter points (N x epsilon x gamma x Delta x
// scenario x delay, in that nesting order). Points with epsilon > 0 are
// averaged over `realizations` disorder draws; the others run once. The
// disorder seed of realization r at point P is
//
//   derive_seed(master_seed, experiment_id(kind, P), r)
//
// where experiment_id hashes the kind name and the point's parameters, so a
// point draws the same disorder whatever else is in the grid.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spinknit/hamiltonian.hpp"
#include "spinknit/measures.hpp"
#include "spinknit/schedule.hpp"

namespace spinknit {

enum class ExperimentKind {
    gate_trace,
    gate_sweep_epsilon,
    gate_surface_gamma_epsilon,
    gate_sweep_delta,
    knit_trace,
    knit_sweep_epsilon,
    knit_surface,
    knit_sweep_delta,
    injection_probability,
    delay_compare
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);
bool is_gate_kind(ExperimentKind kind);

enum class OutputFormat { csv, json };
std::string_view to_string(OutputFormat f);
OutputFormat output_format_from_string(std::string_view name);

/// Evenly spaced times in t_M units, both ends included.
struct SamplingGrid {
    double start = 0.0;
    double stop = 4.0;
    int count = 401;

    std::vector<double> times() const;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::gate_trace;
    std::vector<int> chain_lengths{9};
    std::vector<double> epsilon{0.0};
    std::vector<double> gamma{0.0};
    std::vector<double> delta{0.0};
    std::vector<double> delay{0.0};  // t_M units
    std::vector<DelayScenario> scenarios{DelayScenario::A, DelayScenario::B, DelayScenario::C,
                                         DelayScenario::D};
    int realizations = 100;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::max_coupling;
    FidelityConvention fidelity = FidelityConvention::root;
    int rounds = 1;        // knit kinds: extra injection rounds after the first
    bool readout = true;   // knit_trace: extract the last pair
    bool keep_realizations = false;  // also emit one row per disorder draw
    SamplingGrid sampling;
    std::string output;    // empty: stdout
    OutputFormat format = OutputFormat::csv;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Parses the YAML experiment config; ConfigError carries line and field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_yaml(const ExperimentConfig& config);

struct ParameterPoint {
    int chain_length = 9;
    double epsilon = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double delay = 0.0;
    DelayScenario scenario = DelayScenario::none;
};

std::vector<ParameterPoint> parameter_points(const ExperimentConfig& config);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t experiment_id(ExperimentKind kind, const ParameterPoint& point);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t experiment_id, std::uint64_t realization);

/// Hamiltonian for one realization at `point`.
HamiltonianSpec point_hamiltonian(const ParameterPoint& point, std::uint64_t disorder_seed,
                                  Normalization normalization);

struct ResultRow {
    ExperimentKind kind = ExperimentKind::gate_trace;
    int chain_length = 0;
    double epsilon = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double delay = 0.0;
    DelayScenario scenario = DelayScenario::none;
    bool mean = true;         // false: a single disorder draw, identified by `seed`
    std::uint64_t seed = 0;
    int realizations = 1;
    MetricKind metric = MetricKind::eof;
    std::string site_set;
    double time = 0.0;        // t_M units
    double value = 0.0;
    double std_error = 0.0;   // standard error of the mean, 0 for single runs
};

struct ResultTable {
    std::vector<ResultRow> rows;

    /// Mean rows of `metric` at chain length n (and site set, if given), in row order.
    std::vector<ResultRow> select(MetricKind metric, int n, std::string_view site_set = {}) const;
};

/// Worker count: `requested` if positive, else SPINKNIT_JOBS, else the core count.
int resolve_jobs(int requested);

ResultTable run_experiment(const ExperimentConfig& config, int jobs = 0);

/// Columns: kind, N, epsilon, gamma, delta, delay, scenario, aggregate, seed,
/// realizations, metric, site_set, time, value, stderr. LF line endings,
/// numbers as "%.12g".
void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);
/// Throws IoError if the file cannot be written.
void emit(const ResultTable& table, const std::filesystem::path& path, OutputFormat format);

// Small fitting helpers for the scaling laws.

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;  // ||y - fit||_2
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Exponent p of y = c x^p from a straight-line fit in log-log space.
double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y);
/// Width of the connected window around `center` where values stay above
/// (peak) or below (dip) `level`, with linear interpolation at both edges.
/// Throws InvalidArgument if the window reaches the end of the samples.
double window_width(const std::vector<double>& times, const std::vector<double>& values, double center,
                    double level, bool peak);

}  // namespace spinknit
