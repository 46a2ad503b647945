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

#include "spinknit/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

// Diagonal element for basis mask `m` (chain bits only).
double diagonal_term(const HamiltonianSpec& spec, Mask m) {
    const int n = spec.chain_length;
    double d = 0.0;
    Mask chain = m & ((Mask{1} << n) - 1);
    for (Mask c = chain; c != 0; c &= c - 1) d += spec.onsite[std::countr_zero(c)];
    if (spec.gamma != 0.0) {
        const int pairs = std::popcount(chain & (chain >> 1));
        d += spec.interaction_strength() * pairs;
    }
    return d;
}

// Calls f(target, coupling) for every hop out of basis mask `m`.
template <typename F>
void for_each_hop(const HamiltonianSpec& spec, Mask m, F&& f) {
    const int n = spec.chain_length;
    const auto& nn = spec.couplings.nearest;
    const auto& nnn = spec.couplings.next_nearest;
    for (int i = 0; i < n; ++i) {
        if (!((m >> i) & 1)) continue;
        const Mask from = Mask{1} << i;
        if (i + 1 < n && !((m >> (i + 1)) & 1)) f(m ^ from ^ (from << 1), nn[i]);
        if (i >= 1 && !((m >> (i - 1)) & 1)) f(m ^ from ^ (from >> 1), nn[i - 1]);
        if (!nnn.empty()) {
            if (i + 2 < n && !((m >> (i + 2)) & 1) && nnn[i] != 0.0) {
                f(m ^ from ^ (from << 2), nnn[i]);
            }
            if (i >= 2 && !((m >> (i - 2)) & 1) && nnn[i - 2] != 0.0) {
                f(m ^ from ^ (from >> 2), nnn[i - 2]);
            }
        }
    }
}

void check_sector(const HamiltonianSpec& spec, const BasisSector& sector) {
    if (sector.sites() < spec.chain_length) {
        throw InvalidArgument("sector is smaller than the chain");
    }
}

}  // namespace

double CouplingProfile::max_coupling() const {
    return nearest.empty() ? 0.0 : *std::max_element(nearest.begin(), nearest.end());
}

CouplingProfile CouplingProfile::scaled(double factor) const {
    CouplingProfile out = *this;
    out.j0 *= factor;
    for (auto& j : out.nearest) j *= factor;
    for (auto& j : out.next_nearest) j *= factor;
    return out;
}

bool CouplingProfile::is_mirror_symmetric(double tolerance) const {
    const std::size_t m = nearest.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(nearest[i] - nearest[m - 1 - i]) > tolerance) return false;
    }
    const std::size_t k = next_nearest.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (std::abs(next_nearest[i] - next_nearest[k - 1 - i]) > tolerance) return false;
    }
    return true;
}

CouplingProfile pst_couplings(int n, double j0) {
    if (n < 2) throw InvalidArgument("PST chain needs N >= 2");
    if (!(j0 > 0.0)) throw InvalidArgument("J0 must be positive");
    CouplingProfile p;
    p.j0 = j0;
    p.nearest.resize(n - 1);
    for (int i = 1; i < n; ++i) p.nearest[i - 1] = j0 * std::sqrt(static_cast<double>(i * (n - i)));
    p.next_nearest.assign(n >= 2 ? n - 2 : 0, 0.0);
    return p;
}

CouplingProfile uniform_couplings(int n, double j) {
    if (n < 2) throw InvalidArgument("chain needs N >= 2");
    CouplingProfile p;
    p.j0 = j;
    p.nearest.assign(n - 1, j);
    p.next_nearest.assign(n - 2, 0.0);
    return p;
}

CouplingProfile with_next_nearest(const CouplingProfile& profile, double delta) {
    if (delta < 0.0) throw InvalidArgument("Delta must be non-negative");
    CouplingProfile out = profile;
    const std::size_t m = profile.nearest.size();
    out.next_nearest.assign(m >= 1 ? m - 1 : 0, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        out.next_nearest[i] = delta * (profile.nearest[i] + profile.nearest[i + 1]) / 2.0;
    }
    return out;
}

std::vector<double> sample_disorder(double epsilon, int n, std::uint64_t seed) {
    if (epsilon < 0.0) throw InvalidArgument("epsilon must be non-negative");
    std::vector<double> e(n, 0.0);
    if (epsilon == 0.0) return e;
    std::mt19937_64 rng(seed);
    for (auto& x : e) x = epsilon * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return e;
}

HamiltonianSpec HamiltonianSpec::pst(int n, double j0) {
    HamiltonianSpec s;
    s.chain_length = n;
    s.couplings = pst_couplings(n, j0);
    s.onsite.assign(n, 0.0);
    return s;
}

HamiltonianSpec HamiltonianSpec::perturbed(int n, double epsilon, double gamma, double delta,
                                           std::uint64_t disorder_seed,
                                           Normalization normalization) {
    if (gamma < 0.0) throw InvalidArgument("gamma must be non-negative");
    HamiltonianSpec s = pst(n);
    if (normalization == Normalization::max_coupling) {
        s.couplings = s.couplings.scaled(1.0 / s.couplings.max_coupling());
    }
    s.couplings = with_next_nearest(s.couplings, delta);
    s.onsite = sample_disorder(epsilon, n, disorder_seed);
    s.gamma = gamma;
    s.delta = delta;
    s.epsilon = epsilon;
    s.disorder_seed = disorder_seed;
    s.normalization = normalization;
    return s;
}

double HamiltonianSpec::mirror_time() const { return std::numbers::pi / (2.0 * couplings.j0); }

std::uint64_t HamiltonianSpec::fingerprint() const {
    // FNV-1a over the numeric content
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    auto mix_vec = [&](const std::vector<double>& v) {
        const std::size_t n = v.size();
        mix(&n, sizeof n);
        if (n) mix(v.data(), n * sizeof(double));
    };
    mix(&chain_length, sizeof chain_length);
    mix(&couplings.j0, sizeof(double));
    mix_vec(couplings.nearest);
    mix_vec(couplings.next_nearest);
    mix_vec(onsite);
    mix(&gamma, sizeof gamma);
    return h;
}

void HamiltonianSpec::validate() const {
    if (chain_length < 2) throw InvalidArgument("chain length must be at least 2");
    if (static_cast<int>(couplings.nearest.size()) != chain_length - 1) {
        throw InvalidArgument("nearest-neighbour couplings must have N-1 entries");
    }
    if (!couplings.next_nearest.empty() &&
        static_cast<int>(couplings.next_nearest.size()) != chain_length - 2) {
        throw InvalidArgument("next-nearest couplings must have N-2 entries");
    }
    if (static_cast<int>(onsite.size()) != chain_length) {
        throw InvalidArgument("on-site energies must have N entries");
    }
    if (!(couplings.j0 > 0.0)) throw InvalidArgument("J0 must be positive");
}

Eigen::MatrixXd assemble_sector(const HamiltonianSpec& spec, const BasisSector& sector) {
    check_sector(spec, sector);
    const auto dim = static_cast<Eigen::Index>(sector.dimension());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    sector.for_each([&](std::size_t i, Mask m) {
        const auto col = static_cast<Eigen::Index>(i);
        h(col, col) = diagonal_term(spec, m);
        for_each_hop(spec, m, [&](Mask target, double j) {
            h(static_cast<Eigen::Index>(sector.rank(target)), col) += j;
        });
    });
    // every hop is generated from both ends with the same coupling, so h is
    // symmetric already; this only guards the invariant bit-for-bit
    h = 0.5 * (h + h.transpose()).eval();
    return h;
}

Eigen::SparseMatrix<double> assemble_sector_sparse(const HamiltonianSpec& spec,
                                                   const BasisSector& sector) {
    check_sector(spec, sector);
    const auto dim = static_cast<Eigen::Index>(sector.dimension());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(sector.dimension() * (1 + 2 * static_cast<std::size_t>(sector.excitations())));
    sector.for_each([&](std::size_t i, Mask m) {
        const auto col = static_cast<Eigen::Index>(i);
        const double d = diagonal_term(spec, m);
        if (d != 0.0) triplets.emplace_back(col, col, d);
        for_each_hop(spec, m, [&](Mask target, double j) {
            triplets.emplace_back(static_cast<Eigen::Index>(sector.rank(target)), col, j);
        });
    });
    Eigen::SparseMatrix<double> h(dim, dim);
    h.setFromTriplets(triplets.begin(), triplets.end());
    h.makeCompressed();
    return h;
}

std::pair<double, double> spectral_bounds(const Eigen::SparseMatrix<double>& h) {
    if (h.rows() == 0) return {0.0, 0.0};
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
        double diag = 0.0, off = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(h, c); it; ++it) {
            if (it.row() == c) {
                diag += it.value();
            } else {
                off += std::abs(it.value());
            }
        }
        if (first) {
            lo = diag - off;
            hi = diag + off;
            first = false;
        } else {
            lo = std::min(lo, diag - off);
            hi = std::max(hi, diag + off);
        }
    }
    return {lo, hi};
}

double energy_expectation(const HamiltonianSpec& spec, const PureState& state) {
    if (state.layout().chain_length() != spec.chain_length) {
        throw InvalidArgument("state and Hamiltonian chain lengths differ");
    }
    double e = 0.0;
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(state.layout().total_sites(), t);
        Complex acc{};
        sector.for_each([&](std::size_t i, Mask m) {
            const Complex a = amps[static_cast<Eigen::Index>(i)];
            if (a == Complex{}) return;
            acc += std::norm(a) * diagonal_term(spec, m);
            for_each_hop(spec, m, [&](Mask target, double j) {
                acc += std::conj(amps[static_cast<Eigen::Index>(sector.rank(target))]) * j * a;
            });
        });
        e += acc.real();
    }
    return e;
}

}  // namespace spinknit
