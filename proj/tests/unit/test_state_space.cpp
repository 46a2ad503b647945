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

#include <cmath>
#include <random>
#include <vector>

#include "spinknit/error.hpp"
#include "spinknit/state_space.hpp"

using namespace spinknit;

namespace {

std::vector<QubitState> all_ground(const SystemLayout& layout) {
    return std::vector<QubitState>(layout.total_sites(), QubitState::ground());
}

PureState random_state(const SystemLayout& layout, int max_t, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    PureState s(layout);
    for (int t = 0; t <= max_t; ++t) {
        auto& v = s.sector(t);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex{g(rng), g(rng)};
    }
    return s.normalized();
}

}  // namespace

TEST_SUITE("state_space") {

TEST_CASE("sector dimensions") {
    CHECK(make_basis(SystemLayout(9), 2).at(2).dimension() == 36);
    const SystemLayout with_regs(9, {"a", "b", "c", "d"});
    CHECK(make_basis(with_regs, 4).at(4).dimension() == 715);
    CHECK(make_basis(with_regs, 0).at(0).dimension() == 1);
    CHECK_THROWS_AS(make_basis(SystemLayout(3), 4), InvalidArgument);
    CHECK_THROWS_AS(make_basis(SystemLayout(3), -1), InvalidArgument);
}

TEST_CASE("rank and unrank are inverse") {
    BasisSector big(29, 4);
    REQUIRE(big.dimension() == 23751);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, big.dimension() - 1);
    for (int k = 0; k < 2000; ++k) {
        const std::size_t i = pick(rng);
        const Mask m = big.unrank(i);
        CHECK(popcount(m) == 4);
        CHECK(m < (Mask{1} << 29));
        CHECK(big.rank(m) == i);
    }
    BasisSector small(7, 3);
    small.for_each([&](std::size_t i, Mask m) {
        CHECK(small.rank(m) == i);
        CHECK(small.unrank(i) == m);
    });
}

TEST_CASE("layout bookkeeping") {
    SystemLayout l(5, {"x"});
    CHECK(l.total_sites() == 6);
    CHECK(l.chain_site(1).index == 0);
    CHECK(l.chain_site(5) == l.last_end());
    CHECK(l.register_site("x").index == 5);
    CHECK_FALSE(l.find_register("y").has_value());
    CHECK_THROWS_AS(l.chain_site(6), InvalidArgument);
    CHECK_THROWS_AS(SystemLayout(1), InvalidArgument);
    CHECK_THROWS_AS(SystemLayout(3, {"a", "a"}), InvalidArgument);
    const SystemLayout l2 = l.with_register("y").without_register(l.register_site("x"));
    CHECK(l2.registers() == std::vector<std::string>{"y"});
}

TEST_CASE("product states") {
    const SystemLayout l(9);
    auto q = all_ground(l);
    const PureState vac = product_state(l, q);
    CHECK(vac.amplitude(0) == Complex{1.0, 0.0});
    CHECK(vac.norm_squared() == doctest::Approx(1.0));

    q[0] = q[8] = QubitState::plus();
    const PureState pp = product_state(l, q);
    CHECK(std::norm(pp.amplitude(0)) == doctest::Approx(0.25));
    CHECK(std::norm(pp.amplitude(1)) == doctest::Approx(0.25));
    CHECK(std::norm(pp.amplitude(Mask{1} << 8)) == doctest::Approx(0.25));
    CHECK(std::norm(pp.amplitude(1 | (Mask{1} << 8))) == doctest::Approx(0.25));
    CHECK(pp.sectors().at(1).cwiseAbs2().sum() == doctest::Approx(0.5));

    q = all_ground(l);
    q[0] = QubitState::excited();
    const PureState one = product_state(l, q);
    CHECK(one.sectors().size() == 1);
    CHECK(one.sectors().at(1).size() == 9);

    q[0] = QubitState{1.0, 1.0};
    CHECK_THROWS_AS(product_state(l, q), InvalidArgument);
}

TEST_CASE("swap") {
    const SystemLayout l(5, {"r"});
    const PureState s = PureState::basis_state(l, 1);
    const Site r = l.register_site("r");
    const PureState moved = apply_swap(s, Site{0}, r);
    CHECK(moved.amplitude(r.bit()) == Complex{1.0, 0.0});

    std::mt19937_64 rng(3);
    const PureState x = random_state(l, 3, rng);
    const PureState back = apply_swap(apply_swap(x, Site{1}, r), Site{1}, r);
    CHECK(std::abs(inner_product(x, back) - Complex{1.0, 0.0}) < 1e-12);
    CHECK(apply_swap(x, Site{2}, r).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(apply_swap(x, Site{0}, Site{17}), InvalidArgument);

    // injecting |+> through a register equals preparing it in place
    const SystemLayout chain(5);
    PureState via_reg = attach_register(PureState::vacuum(chain), "in", QubitState::plus());
    via_reg = apply_swap(via_reg, Site{0}, via_reg.layout().register_site("in"));
    via_reg = release_register(via_reg, via_reg.layout().register_site("in"), 0);
    auto q = all_ground(chain);
    q[0] = QubitState::plus();
    const PureState direct = product_state(chain, q);
    CHECK((to_full_vector(via_reg) - to_full_vector(direct)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("measurement") {
    const SystemLayout l(3);
    auto q = all_ground(l);
    q[1] = QubitState::plus();
    const auto m = measure_site(product_state(l, q), Site{1});
    CHECK(m.probability[0] == doctest::Approx(0.5));
    CHECK(m.probability[1] == doctest::Approx(0.5));
    CHECK(std::abs(m.post[1]->amplitude(0b010) - 1.0) < 1e-15);

    const auto v = measure_site(PureState::vacuum(l), Site{2});
    CHECK(v.probability[0] == 1.0);
    CHECK_FALSE(v.post[1].has_value());
    CHECK_THROWS_AS(project_site(PureState::vacuum(l), Site{2}, 1), InvalidArgument);

    std::mt19937_64 rng(11);
    int ones = 0;
    for (int k = 0; k < 400; ++k) ones += sample_site(product_state(l, q), Site{1}, rng).first;
    CHECK(ones > 150);
    CHECK(ones < 250);
}

TEST_CASE("partial trace") {
    const SystemLayout l(4);
    std::vector<QubitState> q(4, QubitState::plus());
    const Site pair[] = {Site{0}, Site{3}};
    const DensityMatrix rho = partial_trace(product_state(l, q), pair);
    rho.validate();
    CHECK(rho.purity() == doctest::Approx(1.0));

    PureState bell(l);
    bell.add_amplitude(0, 1.0 / std::sqrt(2.0));
    bell.add_amplitude(0b1001, 1.0 / std::sqrt(2.0));
    const Site first[] = {Site{0}};
    const DensityMatrix r1 = partial_trace(bell, first);
    CHECK(std::abs(r1.matrix()(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(r1.matrix()(0, 1)) < 1e-15);

    // keeping everything reproduces the projector
    std::mt19937_64 rng(5);
    const PureState x = random_state(l, 4, rng);
    const Site everything[] = {Site{3}, Site{2}, Site{1}, Site{0}};
    const DensityMatrix full = partial_trace(x, everything);
    const Eigen::VectorXcd v = to_full_vector(x);
    CHECK((full.matrix() - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    const Site none[] = {Site{0}};
    CHECK_THROWS_AS(partial_trace(x, std::span<const Site>(none, 0)), InvalidArgument);

    for (int k = 0; k < 20; ++k) {
        const PureState y = random_state(SystemLayout(5, {"r"}), 3, rng);
        const Site keep[] = {Site{0}, Site{5}, Site{2}};
        const DensityMatrix d = partial_trace(y, keep);
        d.validate(1e-12);
        const Eigen::VectorXd ev = d.eigenvalues();
        CHECK(ev.minCoeff() > -1e-12);
        CHECK(ev.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("occupations") {
    const SystemLayout l(6);
    const auto vac = occupation_probabilities(PureState::vacuum(l));
    for (double p : vac) CHECK(p == 0.0);
    const auto one = occupation_probabilities(PureState::basis_state(l, 1));
    CHECK(one[0] == 1.0);
    CHECK(one[5] == 0.0);

    std::mt19937_64 rng(9);
    const PureState x = random_state(l, 4, rng);
    double total = 0.0;
    for (double p : occupation_probabilities(x)) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
        total += p;
    }
    CHECK(total == doctest::Approx(excitation_expectation(x)).epsilon(1e-12));
}

TEST_CASE("mirror and flip") {
    const SystemLayout l(9, {"r"});
    const PureState s = PureState::basis_state(l, 1);
    CHECK(mirror(s).amplitude(Mask{1} << 8) == Complex{1.0, 0.0});

    PureState sym(l);
    sym.add_amplitude(0b000000011, 0.5);
    sym.add_amplitude(0b110000000, 0.5);
    sym.add_amplitude(0b000010000 | (Mask{1} << 9), std::sqrt(0.5));
    const PureState m = mirror(sym);
    CHECK(std::abs(inner_product(sym, m)) == doctest::Approx(1.0));
    CHECK(m.amplitude(0b000010000 | (Mask{1} << 9)) == Complex{std::sqrt(0.5), 0.0});

    std::mt19937_64 rng(13);
    const PureState x = random_state(l, 3, rng);
    CHECK(std::abs(inner_product(x, mirror(mirror(x))) - 1.0) < 1e-12);
    CHECK(flip(x).norm() == doctest::Approx(1.0).epsilon(1e-14));

    const PureState full = flip(PureState::vacuum(l));
    CHECK(full.amplitude(l.chain_mask()) == Complex{1.0, 0.0});
    CHECK(full.has_sector(9));
}

TEST_CASE("register lifecycle") {
    const SystemLayout l(4);
    std::mt19937_64 rng(17);
    const PureState x = random_state(l, 2, rng);
    const PureState y = attach_register(x, "r", QubitState::excited());
    const Site r = y.layout().register_site("r");
    CHECK(occupation_probabilities(y)[r.index] == doctest::Approx(1.0));
    const PureState z = release_register(y, r, 1);
    CHECK(std::abs(inner_product(x, z) - 1.0) < 1e-12);

    const PureState w = attach_register(x, "p", QubitState::plus());
    CHECK_THROWS_AS(release_register(w, w.layout().register_site("p"), 0), InvalidArgument);
}

TEST_CASE("full vector round trip") {
    const SystemLayout l(5, {"a", "b"});
    std::mt19937_64 rng(19);
    const PureState x = random_state(l, 4, rng);
    const PureState y = from_full_vector(l, to_full_vector(x));
    CHECK(std::abs(inner_product(x, y) - 1.0) < 1e-13);
}

}  // TEST_SUITE
