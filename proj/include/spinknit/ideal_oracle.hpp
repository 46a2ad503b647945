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

// Ideal targets: crossing graphs from wave-packet trajectories, the graph
// states they define, and the ideal two-qubit gate.
//
// A logical qubit is the wave packet that travels from its injection end to
// the opposite end in one mirror time. Two packets moving in opposite
// directions cross at most once per traversal; each crossing is a CZ between
// them, so the edge set is the crossing set reduced mod 2.

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinknit/schedule.hpp"
#include "spinknit/state_space.hpp"

namespace spinknit {

struct Trajectory {
    std::string qubit;
    ChainEnd start = ChainEnd::first;
    double injection_time = 0.0;   // t_M units
    double extraction_time = 1.0;  // arrival at the opposite end, one mirror time later

    /// Normalized position in [0, 1] (0 = site 1, 1 = site N) while in flight.
    double position(double t) const;
};

struct Crossing {
    int a = 0;
    int b = 0;
    double time = 0.0;      // t_M units
    double position = 0.0;  // normalized, strictly inside (0, 1)
};

class CrossingGraph {
   public:
    CrossingGraph() = default;
    explicit CrossingGraph(std::vector<std::string> vertices);

    const std::vector<std::string>& vertices() const { return vertices_; }
    int size() const { return static_cast<int>(vertices_.size()); }
    int vertex(std::string_view label) const;

    /// Toggles the edge {a, b} (a second crossing cancels the first).
    void toggle_edge(int a, int b);
    bool has_edge(int a, int b) const;
    /// Sorted (a < b) edge list.
    std::vector<std::pair<int, int>> edges() const;
    std::vector<int> neighbours(int v) const;

    const std::vector<Crossing>& crossings() const { return crossings_; }
    void add_crossing(const Crossing& c);

    /// {"vertices": [...], "edges": [[a, b], ...]} with label pairs.
    std::string to_json() const;

   private:
    std::vector<std::string> vertices_;
    std::vector<std::vector<bool>> adjacency_;
    std::vector<Crossing> crossings_;
};

/// One trajectory per injected qubit, in injection order. Packets arrive one
/// mirror time after injection whether or not the extraction is on time.
std::vector<Trajectory> trajectories(const Schedule& schedule);

/// Geometric crossing graph of the given trajectories.
CrossingGraph crossing_graph(const std::vector<Trajectory>& paths);

/// Crossing graph of a schedule. Throws InvalidArgument unless N = 1 (mod 4):
/// for other lengths the transfer phases are not plain CZs.
CrossingGraph crossings(const Schedule& schedule);

/// prod_{edges} CZ |+>^n over 2^n amplitudes; bit v of the index is qubit v.
Eigen::VectorXcd graph_state_amplitudes(const CrossingGraph& graph);

/// max_v || X_v prod_{u ~ v} Z_u psi - psi ||_inf over all vertices.
double stabilizer_residual(const CrossingGraph& graph, const Eigen::VectorXcd& amplitudes);

/// Places qubit v of `amplitudes` on sites[v]; all other sites empty.
PureState embed_qubits(const SystemLayout& layout, const std::vector<Site>& sites,
                       const Eigen::VectorXcd& amplitudes);

struct IdealReference {
    CrossingGraph graph;
    std::vector<Site> sites;  // where each logical qubit sits at `time`
    double time = 0.0;        // arrival of the last qubit, t_M units
    PureState state{SystemLayout(2)};
};

/// Ideal graph state on the storage registers of extracted qubits and on
/// the arrival end of qubits that are never extracted; chain otherwise empty.
/// Throws InvalidArgument if two unextracted qubits arrive at the same site.
IdealReference ideal_reference(const Schedule& schedule, const SystemLayout& layout);

/// End-pair map after one mirror time for an unperturbed chain, basis
/// |site1 siteN> = 00, 01, 10, 11: diag(1, -, -, (-1)^N) with (-i)^(N-1) on the swap.
Eigen::Matrix4cd ideal_gate(int n);

}  // namespace spinknit
