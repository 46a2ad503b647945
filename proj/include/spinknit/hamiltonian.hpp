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

// XX-type chain Hamiltonian with engineered couplings and perturbations:
//
//   H = sum_i E_i n_i + sum_i J_{i,i+1} (s+_i s-_{i+1} + h.c.)
//     + sum_i gamma*J0 n_i n_{i+1}                       (neighbour interaction)
//     + sum_i J_{i,i+2} (s+_i s-_{i+2} + h.c.)            (next-nearest hopping)
//
// with J_{i,i+1} = J0 sqrt(i (N - i)) and J_{i,i+2} = Delta (J_{i,i+1} + J_{i+1,i+2}) / 2.
// Units: hbar = 1; mirror time t_M = pi / (2 J0).
// Only chain sites carry terms; register sites are idle.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "spinknit/state_space.hpp"

namespace spinknit {

struct CouplingProfile {
    double j0 = 1.0;
    std::vector<double> nearest;       // J_{i,i+1}, i = 1..N-1
    std::vector<double> next_nearest;  // J_{i,i+2}, i = 1..N-2

    int chain_length() const { return static_cast<int>(nearest.size()) + 1; }
    double max_coupling() const;
    /// Multiplies every coupling (and j0) by `factor`.
    CouplingProfile scaled(double factor) const;
    bool is_mirror_symmetric(double tolerance = 1e-12) const;
};

CouplingProfile pst_couplings(int n, double j0 = 1.0);
CouplingProfile uniform_couplings(int n, double j);
CouplingProfile with_next_nearest(const CouplingProfile& profile, double delta);

/// E_i = epsilon * r_i with r_i uniform in [0, 1), deterministic in `seed`.
std::vector<double> sample_disorder(double epsilon, int n, std::uint64_t seed);

enum class Normalization {
    none,         // couplings as given, J0 sets the energy unit
    max_coupling  // rescale so that max_i J_{i,i+1} = 1 before adding disorder
};

struct HamiltonianSpec {
    int chain_length = 2;
    CouplingProfile couplings;
    std::vector<double> onsite;  // E_i, i = 1..N
    double gamma = 0.0;          // neighbour interaction, units of J0
    double delta = 0.0;          // next-nearest strength already folded into couplings
    double epsilon = 0.0;        // disorder amplitude that produced `onsite`
    std::uint64_t disorder_seed = 0;
    Normalization normalization = Normalization::none;

    /// Unperturbed PST chain.
    static HamiltonianSpec pst(int n, double j0 = 1.0);

    /// PST chain with all perturbations. In max_coupling mode the couplings are
    /// rescaled to J_max = 1 (and J0 with them) before disorder is drawn.
    static HamiltonianSpec perturbed(int n, double epsilon, double gamma, double delta,
                                     std::uint64_t disorder_seed,
                                     Normalization normalization = Normalization::max_coupling);

    double mirror_time() const;
    double interaction_strength() const { return gamma * couplings.j0; }
    SystemLayout layout() const { return SystemLayout(chain_length); }
    std::uint64_t fingerprint() const;
    void validate() const;
};

/// Dense real-symmetric block of H on `sector`. Sites beyond the chain are
/// treated as idle registers, so the sector may be over any layout that
/// starts with this chain.
Eigen::MatrixXd assemble_sector(const HamiltonianSpec& spec, const BasisSector& sector);
Eigen::SparseMatrix<double> assemble_sector_sparse(const HamiltonianSpec& spec,
                                                   const BasisSector& sector);

/// Sum of |value| per row bound on the spectrum (Gershgorin), as (min, max).
std::pair<double, double> spectral_bounds(const Eigen::SparseMatrix<double>& h);

/// <psi|H|psi> (the state need not be normalized).
double energy_expectation(const HamiltonianSpec& spec, const PureState& state);

}  // namespace spinknit
