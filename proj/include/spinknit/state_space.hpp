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

// Hilbert space of a spin chain plus Hamiltonian-free register sites.
//
// Sites are numbered 0..total_sites-1 internally: chain sites first in
// physical order (physical site i is internal index i-1), registers after.
// A basis state is a bitmask of excited sites; amplitudes are stored per
// excitation-number sector in combinadic rank order.

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinknit/combinadic.hpp"

namespace spinknit {

using Complex = std::complex<double>;

struct Site {
    int index = 0;

    constexpr Site() = default;
    constexpr explicit Site(int i) : index(i) {}
    constexpr Mask bit() const { return Mask{1} << index; }
    friend constexpr auto operator<=>(Site, Site) = default;
};

/// Single-qubit pure state a|0> + b|1>.
struct QubitState {
    Complex zero{1.0, 0.0};
    Complex one{0.0, 0.0};

    static QubitState ground() { return {1.0, 0.0}; }
    static QubitState excited() { return {0.0, 1.0}; }
    static QubitState plus();
    double norm_squared() const { return std::norm(zero) + std::norm(one); }
};

class SystemLayout {
   public:
    explicit SystemLayout(int chain_length, std::vector<std::string> registers = {});

    int chain_length() const { return chain_length_; }
    int register_count() const { return static_cast<int>(registers_.size()); }
    int total_sites() const { return chain_length_ + register_count(); }
    const std::vector<std::string>& registers() const { return registers_; }

    /// Physical chain position 1..N.
    Site chain_site(int position) const;
    Site first_end() const { return Site{0}; }
    Site last_end() const { return Site{chain_length_ - 1}; }
    Site register_site(std::string_view name) const;
    std::optional<Site> find_register(std::string_view name) const;

    bool contains(Site s) const { return s.index >= 0 && s.index < total_sites(); }
    bool is_chain(Site s) const { return s.index >= 0 && s.index < chain_length_; }
    std::string site_name(Site s) const;
    Mask chain_mask() const { return (Mask{1} << chain_length_) - 1; }

    SystemLayout with_register(std::string name) const;
    /// Layout with register `s` removed; later registers shift down by one.
    SystemLayout without_register(Site s) const;

    friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

   private:
    int chain_length_;
    std::vector<std::string> registers_;
};

class BasisSector {
   public:
    BasisSector(int sites, int excitations);

    int sites() const { return sites_; }
    int excitations() const { return excitations_; }
    std::size_t dimension() const { return dimension_; }

    std::size_t rank(Mask mask) const { return rank_subset(mask); }
    Mask unrank(std::size_t index) const { return unrank_subset(excitations_, index); }
    Mask first() const { return excitations_ == 0 ? Mask{0} : (Mask{1} << excitations_) - 1; }

    /// Calls f(index, mask) for every basis state in rank order.
    template <typename F>
    void for_each(F&& f) const {
        Mask m = first();
        for (std::size_t i = 0; i < dimension_; ++i) {
            f(i, m);
            m = next_subset(m);
        }
    }

   private:
    int sites_;
    int excitations_;
    std::size_t dimension_;
};

std::vector<BasisSector> make_basis(const SystemLayout& layout, int max_excitations);

class PureState {
   public:
    using SectorMap = std::map<int, Eigen::VectorXcd>;

    explicit PureState(SystemLayout layout);
    PureState(SystemLayout layout, SectorMap sectors);

    static PureState vacuum(const SystemLayout& layout);
    static PureState basis_state(const SystemLayout& layout, Mask mask);

    const SystemLayout& layout() const { return layout_; }
    const SectorMap& sectors() const { return sectors_; }
    bool has_sector(int excitations) const { return sectors_.count(excitations) != 0; }

    Complex amplitude(Mask mask) const;
    double norm() const;
    double norm_squared() const;
    PureState normalized() const;

    /// Adds `value` to the amplitude of `mask`, creating the sector if needed.
    void add_amplitude(Mask mask, Complex value);
    Eigen::VectorXcd& sector(int excitations);

    PureState& operator*=(Complex factor);

   private:
    SystemLayout layout_;
    SectorMap sectors_;
};

class DensityMatrix {
   public:
    DensityMatrix(std::vector<Site> subsystem, Eigen::MatrixXcd matrix);

    const std::vector<Site>& subsystem() const { return subsystem_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    int qubits() const { return static_cast<int>(subsystem_.size()); }
    double trace() const { return matrix_.trace().real(); }
    double purity() const;
    Eigen::VectorXd eigenvalues() const;

    /// Throws InvalidArgument unless Hermitian and unit-trace within `tolerance`.
    void validate(double tolerance = 1e-9) const;

   private:
    std::vector<Site> subsystem_;
    Eigen::MatrixXcd matrix_;
};

PureState product_state(const SystemLayout& layout, std::span<const QubitState> qubits);
PureState apply_swap(const PureState& state, Site a, Site b);

struct SiteMeasurement {
    std::array<double, 2> probability{0.0, 0.0};
    /// Renormalized branches; empty when the branch has zero weight.
    std::array<std::optional<PureState>, 2> post;
};

SiteMeasurement measure_site(const PureState& state, Site site);
/// Renormalized projection onto `outcome`; throws on a zero-norm branch.
PureState project_site(const PureState& state, Site site, int outcome);
std::pair<int, PureState> sample_site(const PureState& state, Site site, std::mt19937_64& rng);

/// Tensors a fresh register holding `qubit` onto the end of the layout.
PureState attach_register(const PureState& state, std::string name, const QubitState& qubit);
/// Removes a register that is in the definite state `outcome` (e.g. after a
/// projection). Amplitudes of the other value must be zero.
PureState release_register(const PureState& state, Site site, int outcome);

/// Reduced state on `keep`; keep[0] is the most significant qubit of the local index.
DensityMatrix partial_trace(const PureState& state, std::span<const Site> keep);
std::vector<double> occupation_probabilities(const PureState& state);
double excitation_expectation(const PureState& state);

/// Reflection of the chain about its midpoint; registers untouched.
PureState mirror(const PureState& state);
/// Flips every chain site; registers untouched.
PureState flip(const PureState& state);

/// <a|b>; layouts must match.
Complex inner_product(const PureState& a, const PureState& b);

/// Dense 2^total_sites vector, index bit s = occupation of site s.
Eigen::VectorXcd to_full_vector(const PureState& state);
PureState from_full_vector(const SystemLayout& layout, const Eigen::VectorXcd& amplitudes,
                           double drop_below = 0.0);

}  // namespace spinknit
