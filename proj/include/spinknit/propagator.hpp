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

// Exact time evolution exp(-iHt) of sector-resolved states.
//
// Propagators live on chain-only excitation sectors. A state over a layout
// with registers is regrouped by register occupancy; every register pattern
// contributes one column of a block that the chain propagator acts on.
//
// Small sectors are diagonalized once (exact phases at any time). Large
// sectors use a Chebyshev expansion of the exponential on the sparse block,
// which converges to machine precision and avoids the cubic eigensolver.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "spinknit/hamiltonian.hpp"
#include "spinknit/state_space.hpp"

namespace spinknit {

enum class EvolutionMethod { automatic, eigen, chebyshev };

struct PropagatorOptions {
    std::size_t dimension_cap = 25000;
    /// Sectors up to this dimension are diagonalized under `automatic`.
    std::size_t dense_limit = 400;
    EvolutionMethod method = EvolutionMethod::automatic;
};

class SectorPropagator {
   public:
    SectorPropagator(const HamiltonianSpec& spec, int chain_excitations,
                     const PropagatorOptions& options);

    const BasisSector& sector() const { return sector_; }
    bool is_dense() const { return dense_; }
    std::uint64_t spec_fingerprint() const { return fingerprint_; }

    /// Only available for diagonalized sectors.
    const Eigen::VectorXd& eigenvalues() const;
    const Eigen::MatrixXd& eigenvectors() const;

    /// Replaces every column x of `block` by exp(-iHt) x.
    void apply(Eigen::MatrixXcd& block, double t) const;

   private:
    void apply_dense(Eigen::MatrixXcd& block, double t) const;
    void apply_chebyshev(Eigen::MatrixXcd& block, double t) const;

    BasisSector sector_;
    std::uint64_t fingerprint_;
    bool dense_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::SparseMatrix<Complex, Eigen::RowMajor> hamiltonian_;
    double center_ = 0.0;
    double half_width_ = 0.0;
};

class Propagator {
   public:
    /// Builds nothing up front; sectors are diagonalized when first needed.
    explicit Propagator(HamiltonianSpec spec, PropagatorOptions options = {});
    /// Builds chain sectors 0..max_chain_excitations (clamped to N) and no others.
    Propagator(HamiltonianSpec spec, int max_chain_excitations, PropagatorOptions options = {});
    /// Builds exactly the listed chain sectors.
    Propagator(HamiltonianSpec spec, std::span<const int> chain_sectors,
               PropagatorOptions options = {});

    Propagator(const Propagator&) = delete;
    Propagator& operator=(const Propagator&) = delete;

    const HamiltonianSpec& spec() const { return spec_; }
    bool on_demand() const { return on_demand_; }
    bool has_sector(int chain_excitations) const;
    /// Throws NumericalError for a missing sector unless built on demand.
    const SectorPropagator& sector(int chain_excitations) const;

    PureState evolve(const PureState& state, double duration) const;
    /// States at each of the sorted `times` (measured from `state`).
    std::vector<PureState> evolve_samples(const PureState& state,
                                          std::span<const double> times) const;
    /// Streaming form: calls f(i, state at times[i]) in order.
    void evolve_samples(const PureState& state, std::span<const double> times,
                        const std::function<void(std::size_t, PureState&)>& f) const;

   private:
    HamiltonianSpec spec_;
    PropagatorOptions options_;
    bool on_demand_ = false;
    mutable std::mutex mutex_;
    mutable std::map<int, std::unique_ptr<SectorPropagator>> sectors_;
};

/// Shares built propagators between runs that use the same Hamiltonian.
class PropagatorCache {
   public:
    explicit PropagatorCache(PropagatorOptions options = {}) : options_(options) {}

    /// On-demand propagator for `spec`, shared by fingerprint.
    std::shared_ptr<const Propagator> get(const HamiltonianSpec& spec);
    std::size_t size() const;

   private:
    PropagatorOptions options_;
    mutable std::mutex mutex_;
    std::map<std::uint64_t, std::shared_ptr<const Propagator>> cache_;
};

/// Reference evolution over the full 2^total_sites space. The Hamiltonian is
/// built from Kronecker products of single-site operators and integrated with
/// a truncated Taylor series; nothing is shared with the sector code path.
Eigen::VectorXcd brute_force_evolve(const HamiltonianSpec& spec, const SystemLayout& layout,
                                    const Eigen::VectorXcd& state, double duration);

/// Map on span{|00>,|01>,|10>,|11>} of (site 1, site N) after one mirror time,
/// G(j, k) = <j| exp(-iH t_M) |k> with the chain interior in vacuum.
Eigen::Matrix4cd effective_gate(const HamiltonianSpec& spec);

}  // namespace spinknit
