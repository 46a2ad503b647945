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

#include "spinknit/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

// Largest value of x = half_width * dt handled in one Chebyshev step.
constexpr double kMaxChebyshevArgument = 40.0;
constexpr double kChebyshevTolerance = 1e-16;

bool use_dense(std::size_t dim, const PropagatorOptions& options) {
    switch (options.method) {
        case EvolutionMethod::eigen: return true;
        case EvolutionMethod::chebyshev: return false;
        case EvolutionMethod::automatic: break;
    }
    return dim <= options.dense_limit;
}

// Chebyshev coefficients a_k = (2 - delta_k0) (-i)^k J_k(x), truncated once
// the Bessel tail is below tolerance. J_k(-x) = (-1)^k J_k(x).
std::vector<Complex> chebyshev_coefficients(double x) {
    std::vector<Complex> a;
    const Complex rotation{0.0, x < 0.0 ? 1.0 : -1.0};
    const double ax = std::abs(x);
    Complex phase{1.0, 0.0};
    const int min_terms = static_cast<int>(std::ceil(ax)) + 8;
    for (int k = 0;; ++k) {
        const double jk = std::cyl_bessel_j(static_cast<double>(k), ax);
        a.push_back((k == 0 ? 1.0 : 2.0) * phase * jk);
        phase *= rotation;
        if (k >= min_terms && std::abs(jk) < kChebyshevTolerance) break;
        if (k > 10000) throw NumericalError("Chebyshev expansion failed to converge");
    }
    return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// SectorPropagator

SectorPropagator::SectorPropagator(const HamiltonianSpec& spec, int chain_excitations,
                                   const PropagatorOptions& options)
    : sector_(spec.chain_length, chain_excitations), fingerprint_(spec.fingerprint()) {
    if (sector_.dimension() > options.dimension_cap) {
        throw NumericalError("sector dimension " + std::to_string(sector_.dimension()) +
                             " exceeds the cap of " + std::to_string(options.dimension_cap));
    }
    dense_ = use_dense(sector_.dimension(), options);
    if (dense_) {
        const Eigen::MatrixXd h = assemble_sector(spec, sector_);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed on sector T=" +
                                 std::to_string(chain_excitations));
        }
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    } else {
        const Eigen::SparseMatrix<double> h = assemble_sector_sparse(spec, sector_);
        const auto [lo, hi] = spectral_bounds(h);
        center_ = 0.5 * (hi + lo);
        // a little slack keeps the scaled spectrum strictly inside [-1, 1]
        half_width_ = 0.5 * (hi - lo) * (1.0 + 1e-9) + 1e-12;
        hamiltonian_ = h.cast<Complex>();
        hamiltonian_.makeCompressed();
    }
}

const Eigen::VectorXd& SectorPropagator::eigenvalues() const {
    if (!dense_) throw NumericalError("sector was not diagonalized");
    return eigenvalues_;
}

const Eigen::MatrixXd& SectorPropagator::eigenvectors() const {
    if (!dense_) throw NumericalError("sector was not diagonalized");
    return eigenvectors_;
}

void SectorPropagator::apply(Eigen::MatrixXcd& block, double t) const {
    if (block.rows() != static_cast<Eigen::Index>(sector_.dimension())) {
        throw InvalidArgument("block height does not match the sector");
    }
    if (t == 0.0 || block.cols() == 0) return;
    if (dense_) {
        apply_dense(block, t);
    } else {
        apply_chebyshev(block, t);
    }
}

void SectorPropagator::apply_dense(Eigen::MatrixXcd& block, double t) const {
    // real GEMMs on the split real/imaginary parts
    const Eigen::MatrixXd& v = eigenvectors_;
    Eigen::MatrixXd re = v.transpose() * block.real();
    Eigen::MatrixXd im = v.transpose() * block.imag();
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
        const double c = std::cos(eigenvalues_[k] * t);
        const double s = -std::sin(eigenvalues_[k] * t);
        for (Eigen::Index j = 0; j < block.cols(); ++j) {
            const double r = re(k, j);
            const double i = im(k, j);
            re(k, j) = c * r - s * i;
            im(k, j) = s * r + c * i;
        }
    }
    block.real() = v * re;
    block.imag() = v * im;
}

void SectorPropagator::apply_chebyshev(Eigen::MatrixXcd& block, double t) const {
    const int steps =
        std::max(1, static_cast<int>(std::ceil(half_width_ * std::abs(t) / kMaxChebyshevArgument)));
    const double dt = t / steps;
    const Complex global = std::exp(Complex{0.0, -center_ * dt});
    const double inv_width = 1.0 / half_width_;
    const Complex shift{center_, 0.0};

    if (half_width_ * std::abs(dt) < 1e-14) {
        for (int s = 0; s < steps; ++s) block *= global;
        return;
    }
    const std::vector<Complex> a = chebyshev_coefficients(half_width_ * dt);

    auto scaled_apply = [&](const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd y = hamiltonian_ * x;
        y -= shift * x;
        y *= inv_width;
        return y;
    };
    for (int s = 0; s < steps; ++s) {
        Eigen::MatrixXcd t_prev = block;
        Eigen::MatrixXcd t_curr = scaled_apply(block);
        Eigen::MatrixXcd acc = a[0] * t_prev + a[1] * t_curr;
        for (std::size_t k = 2; k < a.size(); ++k) {
            Eigen::MatrixXcd t_next = 2.0 * scaled_apply(t_curr) - t_prev;
            acc += a[k] * t_next;
            t_prev = std::move(t_curr);
            t_curr = std::move(t_next);
        }
        block = global * acc;
    }
}

// ---------------------------------------------------------------------------
// Propagator

Propagator::Propagator(HamiltonianSpec spec, PropagatorOptions options)
    : spec_(std::move(spec)), options_(options), on_demand_(true) {
    spec_.validate();
}

Propagator::Propagator(HamiltonianSpec spec, int max_chain_excitations, PropagatorOptions options)
    : spec_(std::move(spec)), options_(options) {
    spec_.validate();
    const int top = std::min(max_chain_excitations, spec_.chain_length);
    for (int t = 0; t <= top; ++t) {
        sectors_.emplace(t, std::make_unique<SectorPropagator>(spec_, t, options_));
    }
}

Propagator::Propagator(HamiltonianSpec spec, std::span<const int> chain_sectors,
                       PropagatorOptions options)
    : spec_(std::move(spec)), options_(options) {
    spec_.validate();
    for (int t : chain_sectors) {
        if (t < 0 || t > spec_.chain_length) throw InvalidArgument("chain sector out of range");
        if (!sectors_.count(t)) sectors_.emplace(t, std::make_unique<SectorPropagator>(spec_, t, options_));
    }
}

bool Propagator::has_sector(int chain_excitations) const {
    std::lock_guard lock(mutex_);
    return sectors_.count(chain_excitations) != 0;
}

const SectorPropagator& Propagator::sector(int chain_excitations) const {
    std::lock_guard lock(mutex_);
    auto it = sectors_.find(chain_excitations);
    if (it != sectors_.end()) return *it->second;
    if (!on_demand_ || chain_excitations < 0 || chain_excitations > spec_.chain_length) {
        throw NumericalError("no propagator for chain sector T=" +
                             std::to_string(chain_excitations));
    }
    auto built = std::make_unique<SectorPropagator>(spec_, chain_excitations, options_);
    return *sectors_.emplace(chain_excitations, std::move(built)).first->second;
}

PureState Propagator::evolve(const PureState& state, double duration) const {
    const double times[] = {duration};
    return std::move(evolve_samples(state, times).front());
}

std::vector<PureState> Propagator::evolve_samples(const PureState& state,
                                                  std::span<const double> times) const {
    std::vector<PureState> out;
    out.reserve(times.size());
    evolve_samples(state, times, [&](std::size_t, PureState& s) { out.push_back(std::move(s)); });
    return out;
}

void Propagator::evolve_samples(const PureState& state, std::span<const double> times,
                                const std::function<void(std::size_t, PureState&)>& f) const {
    const SystemLayout& layout = state.layout();
    if (layout.chain_length() != spec_.chain_length) {
        throw InvalidArgument("state and propagator chain lengths differ");
    }
    if (!std::is_sorted(times.begin(), times.end())) {
        throw InvalidArgument("sample times must be sorted");
    }
    const int n = spec_.chain_length;
    const Mask chain_mask = layout.chain_mask();

    // One block per (total sector, chain sector): rows are chain basis states,
    // columns are register patterns that carry amplitude.
    struct Block {
        const SectorPropagator* prop = nullptr;
        Eigen::MatrixXcd initial;
        Eigen::MatrixXcd current;
    };
    struct Slot {
        int block = -1;
        Eigen::Index row = 0;
        Eigen::Index col = 0;
    };
    struct Plan {
        int total_t;
        std::vector<Slot> slots;
        std::vector<Block> blocks;
    };

    std::vector<Plan> plans;
    for (const auto& [total_t, amps] : state.sectors()) {
        BasisSector basis(layout.total_sites(), total_t);
        Plan plan{total_t, std::vector<Slot>(basis.dimension()), {}};
        std::map<int, int> block_of;
        std::vector<std::unordered_map<Mask, Eigen::Index>> columns;
        std::vector<Mask> chain_of(basis.dimension());
        // first pass: live register patterns per chain sector
        basis.for_each([&](std::size_t i, Mask m) {
            chain_of[i] = m & chain_mask;
            if (amps[static_cast<Eigen::Index>(i)] == Complex{}) return;
            const int ct = popcount(chain_of[i]);
            auto [bit, fresh] = block_of.try_emplace(ct, static_cast<int>(columns.size()));
            if (fresh) columns.emplace_back();
            auto& cols = columns[bit->second];
            cols.try_emplace(m >> n, static_cast<Eigen::Index>(cols.size()));
        });
        plan.blocks.resize(columns.size());
        for (const auto& [ct, b] : block_of) {
            Block& blk = plan.blocks[b];
            blk.prop = &sector(ct);
            blk.initial = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(binomial(n, ct)),
                                                 static_cast<Eigen::Index>(columns[b].size()));
        }
        // second pass: scatter amplitudes; every basis state whose register
        // pattern is live gets a slot so that evolved amplitude lands there
        basis.for_each([&](std::size_t i, Mask m) {
            auto bit = block_of.find(popcount(chain_of[i]));
            if (bit == block_of.end()) return;
            const auto& cols = columns[bit->second];
            auto cit = cols.find(m >> n);
            if (cit == cols.end()) return;
            Slot& slot = plan.slots[i];
            slot.block = bit->second;
            slot.row = static_cast<Eigen::Index>(rank_subset(chain_of[i]));
            slot.col = cit->second;
            plan.blocks[slot.block].initial(slot.row, slot.col) = amps[static_cast<Eigen::Index>(i)];
        });
        for (Block& blk : plan.blocks) blk.current = blk.initial;
        plans.push_back(std::move(plan));
    }

    double elapsed = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        PureState out(layout);
        for (Plan& plan : plans) {
            for (Block& blk : plan.blocks) {
                if (blk.prop->is_dense()) {
                    // exact phases: always evolve from the initial block
                    blk.current = blk.initial;
                    blk.prop->apply(blk.current, times[s]);
                } else {
                    blk.prop->apply(blk.current, times[s] - elapsed);
                }
            }
            Eigen::VectorXcd& result = out.sector(plan.total_t);
            for (std::size_t i = 0; i < plan.slots.size(); ++i) {
                const Slot& slot = plan.slots[i];
                if (slot.block >= 0) {
                    result[static_cast<Eigen::Index>(i)] = plan.blocks[slot.block].current(slot.row, slot.col);
                }
            }
        }
        elapsed = times[s];
        f(s, out);
    }
}

// ---------------------------------------------------------------------------
// PropagatorCache

std::shared_ptr<const Propagator> PropagatorCache::get(const HamiltonianSpec& spec) {
    const auto key = spec.fingerprint();
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    // build outside the lock; a concurrent duplicate build is harmless
    auto built = std::make_shared<const Propagator>(spec, options_);
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(built));
    return it->second;
}

std::size_t PropagatorCache::size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

// ---------------------------------------------------------------------------
// Oracles

Eigen::VectorXcd brute_force_evolve(const HamiltonianSpec& spec, const SystemLayout& layout,
                                    const Eigen::VectorXcd& state, double duration) {
    using Sparse = Eigen::SparseMatrix<Complex>;
    const int n = layout.total_sites();
    if (n > 14) throw InvalidArgument("brute-force evolution is limited to 14 sites");
    if (layout.chain_length() != spec.chain_length) {
        throw InvalidArgument("layout and Hamiltonian chain lengths differ");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (state.size() != dim) throw InvalidArgument("state vector has wrong length");

    auto single = [](Complex a, Complex b, Complex c, Complex d) {
        Sparse m(2, 2);
        std::vector<Eigen::Triplet<Complex>> t;
        if (a != Complex{}) t.emplace_back(0, 0, a);
        if (b != Complex{}) t.emplace_back(0, 1, b);
        if (c != Complex{}) t.emplace_back(1, 0, c);
        if (d != Complex{}) t.emplace_back(1, 1, d);
        m.setFromTriplets(t.begin(), t.end());
        return m;
    };
    const Sparse id = single(1, 0, 0, 1);
    const Sparse raise = single(0, 0, 1, 0);  // |1><0|
    const Sparse lower = single(0, 1, 0, 0);  // |0><1|
    const Sparse number = single(0, 0, 0, 1);

    auto kron = [](const Sparse& a, const Sparse& b) {
        Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
        std::vector<Eigen::Triplet<Complex>> t;
        for (Eigen::Index ca = 0; ca < a.outerSize(); ++ca) {
            for (Sparse::InnerIterator ia(a, ca); ia; ++ia) {
                for (Eigen::Index cb = 0; cb < b.outerSize(); ++cb) {
                    for (Sparse::InnerIterator ib(b, cb); ib; ++ib) {
                        t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
                    }
                }
            }
        }
        out.setFromTriplets(t.begin(), t.end());
        return out;
    };
    // operator string with ops[s] on site s; site s is bit s, so the highest
    // site is the leftmost Kronecker factor
    auto chain_op = [&](const std::vector<std::pair<int, const Sparse*>>& ops) {
        Sparse acc = id;
        bool first = true;
        for (int s = n - 1; s >= 0; --s) {
            const Sparse* op = &id;
            for (const auto& [site, o] : ops) {
                if (site == s) op = o;
            }
            acc = first ? *op : kron(acc, *op);
            first = false;
        }
        return acc;
    };

    Sparse h(dim, dim);
    for (int i = 0; i < spec.chain_length; ++i) {
        if (spec.onsite[i] != 0.0) h += Complex{spec.onsite[i], 0.0} * chain_op({{i, &number}});
    }
    for (int i = 0; i + 1 < spec.chain_length; ++i) {
        const Complex j{spec.couplings.nearest[i], 0.0};
        h += j * chain_op({{i, &raise}, {i + 1, &lower}});
        h += j * chain_op({{i, &lower}, {i + 1, &raise}});
        if (spec.gamma != 0.0) {
            h += Complex{spec.interaction_strength(), 0.0} * chain_op({{i, &number}, {i + 1, &number}});
        }
    }
    for (int i = 0; i + 2 < spec.chain_length && !spec.couplings.next_nearest.empty(); ++i) {
        const Complex j{spec.couplings.next_nearest[i], 0.0};
        if (j == Complex{}) continue;
        h += j * chain_op({{i, &raise}, {i + 2, &lower}});
        h += j * chain_op({{i, &lower}, {i + 2, &raise}});
    }

    // truncated Taylor series on steps with ||H||_1 dt <= 1/2
    double norm1 = 0.0;
    for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
        double col = 0.0;
        for (Sparse::InnerIterator it(h, c); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(duration) / 0.5)));
    const double dt = duration / steps;
    Eigen::VectorXcd psi = state;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd term = psi;
        Eigen::VectorXcd acc = psi;
        for (int k = 1; k <= 40; ++k) {
            term = (Complex{0.0, -dt / k}) * (h * term).eval();
            acc += term;
            if (term.norm() < 1e-18) break;
        }
        psi = std::move(acc);
    }
    return psi;
}

Eigen::Matrix4cd effective_gate(const HamiltonianSpec& spec) {
    const SystemLayout layout = spec.layout();
    const Propagator prop(spec, 2);
    const Mask first = layout.first_end().bit();
    const Mask last = layout.last_end().bit();
    // basis order |site1 siteN>: 00, 01, 10, 11
    const Mask basis[4] = {0, last, first, first | last};
    Eigen::Matrix4cd g;
    for (int k = 0; k < 4; ++k) {
        const PureState out = prop.evolve(PureState::basis_state(layout, basis[k]), spec.mirror_time());
        for (int j = 0; j < 4; ++j) g(j, k) = out.amplitude(basis[j]);
    }
    return g;
}

}  // namespace spinknit
