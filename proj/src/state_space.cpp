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

#include "spinknit/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

constexpr double kNormTolerance = 1e-12;

// Moves every amplitude of `state` through the bijection `f` onto `layout`.
template <typename F>
PureState remap(const PureState& state, const SystemLayout& layout, F&& f) {
    PureState out(layout);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(state.layout().total_sites(), t);
        sector.for_each([&](std::size_t i, Mask m) {
            if (amps[i] != Complex{}) out.add_amplitude(f(m), amps[i]);
        });
    }
    return out;
}

Mask swap_bits(Mask m, int a, int b) {
    const Mask ba = (m >> a) & 1;
    const Mask bb = (m >> b) & 1;
    if (ba == bb) return m;
    return m ^ ((Mask{1} << a) | (Mask{1} << b));
}

// Removes bit `pos` and shifts higher bits down.
Mask drop_bit(Mask m, int pos) {
    const Mask low = m & ((Mask{1} << pos) - 1);
    const Mask high = (m >> (pos + 1)) << pos;
    return low | high;
}

}  // namespace

QubitState QubitState::plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r};
}

// ---------------------------------------------------------------------------
// SystemLayout

SystemLayout::SystemLayout(int chain_length, std::vector<std::string> registers)
    : chain_length_(chain_length), registers_(std::move(registers)) {
    if (chain_length_ < 2) throw InvalidArgument("chain length must be at least 2");
    if (total_sites() > kMaxSites) throw InvalidArgument("layout exceeds 63 sites");
    std::vector<std::string> sorted = registers_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("register names must be distinct");
    }
}

Site SystemLayout::chain_site(int position) const {
    if (position < 1 || position > chain_length_) {
        throw InvalidArgument("chain position " + std::to_string(position) + " outside 1.." +
                              std::to_string(chain_length_));
    }
    return Site{position - 1};
}

std::optional<Site> SystemLayout::find_register(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i) {
        if (registers_[i] == name) return Site{chain_length_ + static_cast<int>(i)};
    }
    return std::nullopt;
}

Site SystemLayout::register_site(std::string_view name) const {
    if (auto s = find_register(name)) return *s;
    throw InvalidArgument("unknown register '" + std::string(name) + "'");
}

std::string SystemLayout::site_name(Site s) const {
    if (!contains(s)) throw InvalidArgument("unknown site " + std::to_string(s.index));
    if (is_chain(s)) return std::to_string(s.index + 1);
    return registers_[s.index - chain_length_];
}

SystemLayout SystemLayout::with_register(std::string name) const {
    auto regs = registers_;
    regs.push_back(std::move(name));
    return SystemLayout(chain_length_, std::move(regs));
}

SystemLayout SystemLayout::without_register(Site s) const {
    if (!contains(s) || is_chain(s)) throw InvalidArgument("not a register site");
    auto regs = registers_;
    regs.erase(regs.begin() + (s.index - chain_length_));
    return SystemLayout(chain_length_, std::move(regs));
}

// ---------------------------------------------------------------------------
// BasisSector

BasisSector::BasisSector(int sites, int excitations)
    : sites_(sites), excitations_(excitations), dimension_(binomial(sites, excitations)) {
    if (excitations < 0 || excitations > sites) {
        throw InvalidArgument("excitation count " + std::to_string(excitations) + " outside 0.." +
                              std::to_string(sites));
    }
}

std::vector<BasisSector> make_basis(const SystemLayout& layout, int max_excitations) {
    if (max_excitations < 0 || max_excitations > layout.total_sites()) {
        throw InvalidArgument("max_excitations outside 0..total_sites");
    }
    std::vector<BasisSector> out;
    out.reserve(max_excitations + 1);
    for (int t = 0; t <= max_excitations; ++t) out.emplace_back(layout.total_sites(), t);
    return out;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(SystemLayout layout) : layout_(std::move(layout)) {}

PureState::PureState(SystemLayout layout, SectorMap sectors)
    : layout_(std::move(layout)), sectors_(std::move(sectors)) {
    for (const auto& [t, amps] : sectors_) {
        BasisSector sector(layout_.total_sites(), t);
        if (static_cast<std::size_t>(amps.size()) != sector.dimension()) {
            throw InvalidArgument("sector " + std::to_string(t) + " has wrong dimension");
        }
    }
}

PureState PureState::vacuum(const SystemLayout& layout) { return basis_state(layout, 0); }

PureState PureState::basis_state(const SystemLayout& layout, Mask mask) {
    if (layout.total_sites() < 64 && (mask >> layout.total_sites()) != 0) {
        throw InvalidArgument("basis mask has bits outside the layout");
    }
    PureState s(layout);
    s.add_amplitude(mask, 1.0);
    return s;
}

Complex PureState::amplitude(Mask mask) const {
    auto it = sectors_.find(popcount(mask));
    if (it == sectors_.end()) return {};
    return it->second[static_cast<Eigen::Index>(rank_subset(mask))];
}

double PureState::norm_squared() const {
    double acc = 0.0;
    for (const auto& [t, amps] : sectors_) acc += amps.squaredNorm();
    return acc;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

PureState PureState::normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    PureState out = *this;
    out *= Complex{1.0 / n, 0.0};
    return out;
}

Eigen::VectorXcd& PureState::sector(int excitations) {
    auto it = sectors_.find(excitations);
    if (it == sectors_.end()) {
        BasisSector sector(layout_.total_sites(), excitations);
        it = sectors_
                 .emplace(excitations,
                          Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector.dimension())))
                 .first;
    }
    return it->second;
}

void PureState::add_amplitude(Mask mask, Complex value) {
    sector(popcount(mask))[static_cast<Eigen::Index>(rank_subset(mask))] += value;
}

PureState& PureState::operator*=(Complex factor) {
    for (auto& [t, amps] : sectors_) amps *= factor;
    return *this;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::vector<Site> subsystem, Eigen::MatrixXcd matrix)
    : subsystem_(std::move(subsystem)), matrix_(std::move(matrix)) {
    const Eigen::Index dim = Eigen::Index{1} << subsystem_.size();
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw InvalidArgument("density matrix dimension does not match subsystem size");
    }
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    const Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void DensityMatrix::validate(double tolerance) const {
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > tolerance) {
        throw InvalidArgument("density matrix trace is not 1");
    }
}

// ---------------------------------------------------------------------------
// Operations

PureState product_state(const SystemLayout& layout, std::span<const QubitState> qubits) {
    if (static_cast<int>(qubits.size()) != layout.total_sites()) {
        throw InvalidArgument("product_state needs one qubit per site");
    }
    Mask fixed = 0;
    Complex fixed_amp{1.0, 0.0};
    std::vector<int> free_sites;
    for (int s = 0; s < layout.total_sites(); ++s) {
        const QubitState& q = qubits[s];
        if (std::abs(q.norm_squared() - 1.0) > kNormTolerance) {
            throw InvalidArgument("qubit state on site " + layout.site_name(Site{s}) +
                                  " is not normalized");
        }
        if (q.one == Complex{}) {
            fixed_amp *= q.zero;
        } else if (q.zero == Complex{}) {
            fixed |= Mask{1} << s;
            fixed_amp *= q.one;
        } else {
            free_sites.push_back(s);
        }
    }
    if (free_sites.size() > 30) throw InvalidArgument("too many superposed sites");
    PureState out(layout);
    const std::size_t combos = std::size_t{1} << free_sites.size();
    for (std::size_t c = 0; c < combos; ++c) {
        Mask m = fixed;
        Complex a = fixed_amp;
        for (std::size_t k = 0; k < free_sites.size(); ++k) {
            const QubitState& q = qubits[free_sites[k]];
            if ((c >> k) & 1) {
                m |= Mask{1} << free_sites[k];
                a *= q.one;
            } else {
                a *= q.zero;
            }
        }
        out.add_amplitude(m, a);
    }
    return out;
}

PureState apply_swap(const PureState& state, Site a, Site b) {
    const auto& layout = state.layout();
    if (!layout.contains(a) || !layout.contains(b)) throw InvalidArgument("swap of unknown site");
    if (a == b) return state;
    return remap(state, layout, [&](Mask m) { return swap_bits(m, a.index, b.index); });
}

SiteMeasurement measure_site(const PureState& state, Site site) {
    const auto& layout = state.layout();
    if (!layout.contains(site)) throw InvalidArgument("measurement of unknown site");
    std::array<PureState, 2> branch{PureState(layout), PureState(layout)};
    SiteMeasurement result;
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(layout.total_sites(), t);
        Eigen::VectorXcd zero_part = Eigen::VectorXcd::Zero(amps.size());
        Eigen::VectorXcd one_part = Eigen::VectorXcd::Zero(amps.size());
        sector.for_each([&](std::size_t i, Mask m) {
            auto idx = static_cast<Eigen::Index>(i);
            if (m & site.bit()) {
                one_part[idx] = amps[idx];
            } else {
                zero_part[idx] = amps[idx];
            }
        });
        result.probability[0] += zero_part.squaredNorm();
        result.probability[1] += one_part.squaredNorm();
        branch[0].sector(t) = std::move(zero_part);
        branch[1].sector(t) = std::move(one_part);
    }
    const double total = result.probability[0] + result.probability[1];
    if (total <= 0.0) throw InvalidArgument("measurement of a zero state");
    for (int k = 0; k < 2; ++k) {
        result.probability[k] /= total;
        if (result.probability[k] > 0.0) {
            branch[k] *= Complex{1.0 / std::sqrt(result.probability[k] * total), 0.0};
            result.post[k] = std::move(branch[k]);
        }
    }
    return result;
}

PureState project_site(const PureState& state, Site site, int outcome) {
    if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
    auto m = measure_site(state, site);
    if (!m.post[outcome]) {
        throw InvalidArgument("projection of site " + state.layout().site_name(site) +
                              " onto a zero-probability outcome");
    }
    return std::move(*m.post[outcome]);
}

std::pair<int, PureState> sample_site(const PureState& state, Site site, std::mt19937_64& rng) {
    auto m = measure_site(state, site);
    // 53-bit uniform in [0, 1); independent of the standard library's distributions
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const int outcome = (u < m.probability[0]) ? 0 : 1;
    return {outcome, std::move(*m.post[outcome])};
}

PureState attach_register(const PureState& state, std::string name, const QubitState& qubit) {
    if (std::abs(qubit.norm_squared() - 1.0) > kNormTolerance) {
        throw InvalidArgument("register state is not normalized");
    }
    const SystemLayout layout = state.layout().with_register(std::move(name));
    const Mask new_bit = Mask{1} << (layout.total_sites() - 1);
    PureState out(layout);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(state.layout().total_sites(), t);
        // colex rank of an old mask is unchanged in the bigger layout
        if (qubit.zero != Complex{}) out.sector(t).head(amps.size()) += qubit.zero * amps;
        if (qubit.one != Complex{}) {
            auto& dst = out.sector(t + 1);
            sector.for_each([&](std::size_t i, Mask m) {
                dst[static_cast<Eigen::Index>(rank_subset(m | new_bit))] +=
                    qubit.one * amps[static_cast<Eigen::Index>(i)];
            });
        }
    }
    return out;
}

PureState release_register(const PureState& state, Site site, int outcome) {
    const auto& layout = state.layout();
    const SystemLayout smaller = layout.without_register(site);
    PureState out(smaller);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(layout.total_sites(), t);
        const int target_t = t - outcome;
        if (target_t < 0 || target_t > smaller.total_sites()) continue;
        bool any = false;
        sector.for_each([&](std::size_t i, Mask m) {
            const Complex a = amps[static_cast<Eigen::Index>(i)];
            const int bit = static_cast<int>((m >> site.index) & 1);
            if (bit != outcome) {
                if (std::abs(a) > 1e-10) {
                    throw InvalidArgument("register " + layout.site_name(site) +
                                          " is not in a definite state");
                }
                return;
            }
            out.add_amplitude(drop_bit(m, site.index), a);
            any = true;
        });
        if (!any) out.sector(target_t);
    }
    return out;
}

DensityMatrix partial_trace(const PureState& state, std::span<const Site> keep) {
    if (keep.empty()) throw InvalidArgument("partial_trace needs at least one kept site");
    if (keep.size() > 8) throw InvalidArgument("partial_trace keeps at most 8 sites");
    const auto& layout = state.layout();
    Mask keep_mask = 0;
    for (Site s : keep) {
        if (!layout.contains(s)) throw InvalidArgument("partial_trace of unknown site");
        if (keep_mask & s.bit()) throw InvalidArgument("partial_trace site listed twice");
        keep_mask |= s.bit();
    }
    const int k = static_cast<int>(keep.size());
    const Eigen::Index dim = Eigen::Index{1} << k;

    // group amplitudes by the configuration of the traced-out sites
    std::unordered_map<Mask, Eigen::VectorXcd> groups;
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(layout.total_sites(), t);
        sector.for_each([&](std::size_t i, Mask m) {
            const Complex a = amps[static_cast<Eigen::Index>(i)];
            if (a == Complex{}) return;
            Eigen::Index local = 0;
            for (int q = 0; q < k; ++q) {
                local = (local << 1) | static_cast<Eigen::Index>((m >> keep[q].index) & 1);
            }
            auto [it, inserted] = groups.try_emplace(m & ~keep_mask);
            if (inserted) it->second = Eigen::VectorXcd::Zero(dim);
            it->second[local] += a;
        });
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [rest, v] : groups) rho.noalias() += v * v.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::vector<Site>(keep.begin(), keep.end()), std::move(rho));
}

std::vector<double> occupation_probabilities(const PureState& state) {
    const auto& layout = state.layout();
    std::vector<double> occ(layout.total_sites(), 0.0);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(layout.total_sites(), t);
        sector.for_each([&](std::size_t i, Mask m) {
            const double p = std::norm(amps[static_cast<Eigen::Index>(i)]);
            while (m != 0) {
                occ[std::countr_zero(m)] += p;
                m &= m - 1;
            }
        });
    }
    return occ;
}

double excitation_expectation(const PureState& state) {
    double acc = 0.0;
    for (const auto& [t, amps] : state.sectors()) acc += t * amps.squaredNorm();
    return acc;
}

PureState mirror(const PureState& state) {
    const int n = state.layout().chain_length();
    const Mask chain = state.layout().chain_mask();
    return remap(state, state.layout(), [&](Mask m) {
        Mask r = m & ~chain;
        for (int i = 0; i < n; ++i) {
            if ((m >> i) & 1) r |= Mask{1} << (n - 1 - i);
        }
        return r;
    });
}

PureState flip(const PureState& state) {
    const Mask chain = state.layout().chain_mask();
    PureState out(state.layout());
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(state.layout().total_sites(), t);
        sector.for_each([&](std::size_t i, Mask m) {
            const Complex a = amps[static_cast<Eigen::Index>(i)];
            if (a != Complex{}) out.add_amplitude(m ^ chain, a);
        });
    }
    return out;
}

Complex inner_product(const PureState& a, const PureState& b) {
    if (!(a.layout() == b.layout())) throw InvalidArgument("inner product of different layouts");
    Complex acc{};
    for (const auto& [t, va] : a.sectors()) {
        auto it = b.sectors().find(t);
        if (it != b.sectors().end()) acc += va.dot(it->second);
    }
    return acc;
}

Eigen::VectorXcd to_full_vector(const PureState& state) {
    const int n = state.layout().total_sites();
    if (n > 24) throw InvalidArgument("full vector limited to 24 sites");
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    for (const auto& [t, amps] : state.sectors()) {
        BasisSector sector(n, t);
        sector.for_each([&](std::size_t i, Mask m) {
            full[static_cast<Eigen::Index>(m)] = amps[static_cast<Eigen::Index>(i)];
        });
    }
    return full;
}

PureState from_full_vector(const SystemLayout& layout, const Eigen::VectorXcd& amplitudes,
                           double drop_below) {
    const int n = layout.total_sites();
    if (amplitudes.size() != (Eigen::Index{1} << n)) {
        throw InvalidArgument("full vector has wrong length for the layout");
    }
    PureState out(layout);
    for (Eigen::Index m = 0; m < amplitudes.size(); ++m) {
        if (std::abs(amplitudes[m]) > drop_below) out.add_amplitude(static_cast<Mask>(m), amplitudes[m]);
    }
    return out;
}

}  // namespace spinknit
