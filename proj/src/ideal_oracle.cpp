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

#include "spinknit/ideal_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "spinknit/error.hpp"

namespace spinknit {

double Trajectory::position(double t) const {
    const double span = extraction_time - injection_time;
    const double s = std::clamp((t - injection_time) / span, 0.0, 1.0);
    return start == ChainEnd::first ? s : 1.0 - s;
}

CrossingGraph::CrossingGraph(std::vector<std::string> vertices)
    : vertices_(std::move(vertices)),
      adjacency_(vertices_.size(), std::vector<bool>(vertices_.size(), false)) {
    std::vector<std::string> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("graph vertices must be distinct");
    }
}

int CrossingGraph::vertex(std::string_view label) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == label) return static_cast<int>(i);
    }
    throw InvalidArgument("unknown graph vertex '" + std::string(label) + "'");
}

void CrossingGraph::toggle_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= size() || b >= size()) {
        throw InvalidArgument("bad edge endpoints");
    }
    adjacency_[a][b] = !adjacency_[a][b];
    adjacency_[b][a] = adjacency_[a][b];
}

bool CrossingGraph::has_edge(int a, int b) const { return adjacency_.at(a).at(b); }

std::vector<std::pair<int, int>> CrossingGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            if (adjacency_[a][b]) out.emplace_back(a, b);
        }
    }
    return out;
}

std::vector<int> CrossingGraph::neighbours(int v) const {
    std::vector<int> out;
    for (int u = 0; u < size(); ++u) {
        if (adjacency_.at(v)[u]) out.push_back(u);
    }
    return out;
}

void CrossingGraph::add_crossing(const Crossing& c) {
    toggle_edge(c.a, c.b);
    crossings_.push_back(c);
}

std::string CrossingGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices_;
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : edges()) j["edges"].push_back({vertices_[a], vertices_[b]});
    return j.dump(2);
}

std::vector<Trajectory> trajectories(const Schedule& schedule) {
    std::vector<Trajectory> out;
    for (const auto& e : schedule.events) {
        if (e.kind == EventKind::inject) out.push_back(Trajectory{e.qubit, e.end, e.time, e.time + 1.0});
    }
    return out;
}

CrossingGraph crossing_graph(const std::vector<Trajectory>& paths) {
    std::vector<std::string> labels;
    for (const auto& p : paths) labels.push_back(p.qubit);
    CrossingGraph g(labels);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            const Trajectory& a = paths[i];
            const Trajectory& b = paths[j];
            if (a.start == b.start) continue;  // parallel packets never meet
            const Trajectory& l = a.start == ChainEnd::first ? a : b;  // moving up
            const Trajectory& r = a.start == ChainEnd::first ? b : a;  // moving down
            // l: x = (t - l0) / dl, r: x = 1 - (t - r0) / dr
            const double dl = l.extraction_time - l.injection_time;
            const double dr = r.extraction_time - r.injection_time;
            const double t = (dl * dr + dr * l.injection_time + dl * r.injection_time) / (dl + dr);
            const double x = (t - l.injection_time) / dl;
            if (x <= 0.0 || x >= 1.0) continue;
            if (t <= std::max(l.injection_time, r.injection_time) ||
                t >= std::min(l.extraction_time, r.extraction_time)) {
                continue;
            }
            g.add_crossing(Crossing{static_cast<int>(i), static_cast<int>(j), t, x});
        }
    }
    return g;
}

CrossingGraph crossings(const Schedule& schedule) {
    if (schedule.chain_length() % 4 != 1) {
        throw InvalidArgument("crossing graphs need N = 1 (mod 4); N = " +
                              std::to_string(schedule.chain_length()));
    }
    return crossing_graph(trajectories(schedule));
}

Eigen::VectorXcd graph_state_amplitudes(const CrossingGraph& graph) {
    const int n = graph.size();
    if (n > 24) throw InvalidArgument("graph state limited to 24 qubits");
    const Eigen::Index dim = Eigen::Index{1} << n;
    const auto edges = graph.edges();
    const double amp = std::pow(2.0, -0.5 * n);
    Eigen::VectorXcd v(dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        int parity = 0;
        for (const auto& [a, b] : edges) parity ^= static_cast<int>(((x >> a) & (x >> b)) & 1);
        v[x] = parity ? -amp : amp;
    }
    return v;
}

double stabilizer_residual(const CrossingGraph& graph, const Eigen::VectorXcd& amplitudes) {
    const int n = graph.size();
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (amplitudes.size() != dim) throw InvalidArgument("amplitude vector does not match the graph");
    double worst = 0.0;
    for (int v = 0; v < n; ++v) {
        Eigen::Index zmask = 0;
        for (int u : graph.neighbours(v)) zmask |= Eigen::Index{1} << u;
        for (Eigen::Index x = 0; x < dim; ++x) {
            // (X_v Z_N psi)(x) = (-1)^{popcount(x & N)} psi(x ^ e_v)
            const int sign = std::popcount(static_cast<std::uint64_t>(x & zmask)) & 1;
            const Complex k = (sign ? -1.0 : 1.0) * amplitudes[x ^ (Eigen::Index{1} << v)];
            worst = std::max(worst, std::abs(k - amplitudes[x]));
        }
    }
    return worst;
}

PureState embed_qubits(const SystemLayout& layout, const std::vector<Site>& sites,
                       const Eigen::VectorXcd& amplitudes) {
    const auto n = static_cast<int>(sites.size());
    if (amplitudes.size() != (Eigen::Index{1} << n)) {
        throw InvalidArgument("amplitude vector does not match the site list");
    }
    Mask seen = 0;
    for (Site s : sites) {
        if (!layout.contains(s) || (seen & s.bit())) throw InvalidArgument("bad embedding site");
        seen |= s.bit();
    }
    PureState out(layout);
    for (Eigen::Index x = 0; x < amplitudes.size(); ++x) {
        if (amplitudes[x] == Complex{}) continue;
        Mask m = 0;
        for (int v = 0; v < n; ++v) {
            if ((x >> v) & 1) m |= sites[v].bit();
        }
        out.add_amplitude(m, amplitudes[x]);
    }
    return out;
}

IdealReference ideal_reference(const Schedule& schedule, const SystemLayout& layout) {
    IdealReference ref;
    ref.graph = crossings(schedule);
    const auto paths = trajectories(schedule);
    const auto extracted = schedule.extracted_qubits();
    for (const auto& p : paths) {
        ref.time = std::max(ref.time, p.extraction_time);
        const bool stored = std::find(extracted.begin(), extracted.end(), p.qubit) != extracted.end();
        ref.sites.push_back(stored ? layout.register_site(storage_register(p.qubit))
                                   : schedule.end_site(opposite(p.start)));
    }
    ref.state = embed_qubits(layout, ref.sites, graph_state_amplitudes(ref.graph));
    return ref;
}

Eigen::Matrix4cd ideal_gate(int n) {
    if (n < 2) throw InvalidArgument("gate needs N >= 2");
    Complex single{1.0, 0.0};
    for (int k = 0; k < (n - 1) % 4; ++k) single *= Complex{0.0, -1.0};
    Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
    g(0, 0) = 1.0;
    g(1, 2) = single;
    g(2, 1) = single;
    g(3, 3) = (n % 2 == 0) ? 1.0 : -1.0;
    return g;
}

}  // namespace spinknit
