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
#include <numbers>
#include <random>

#include "spinknit/error.hpp"
#include "spinknit/hamiltonian.hpp"

using namespace spinknit;

namespace {

// Mirror permutation restricted to a chain-only sector.
Eigen::MatrixXd mirror_matrix(const BasisSector& sector, int n) {
    const auto dim = static_cast<Eigen::Index>(sector.dimension());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    sector.for_each([&](std::size_t i, Mask mask) {
        Mask r = 0;
        for (int s = 0; s < n; ++s) {
            if ((mask >> s) & 1) r |= Mask{1} << (n - 1 - s);
        }
        m(static_cast<Eigen::Index>(sector.rank(r)), static_cast<Eigen::Index>(i)) = 1.0;
    });
    return m;
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("pst couplings") {
    const auto p3 = pst_couplings(3, 1.0);
    REQUIRE(p3.nearest.size() == 2);
    CHECK(p3.nearest[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(p3.nearest[1] == doctest::Approx(std::sqrt(2.0)));
    const auto p9 = pst_couplings(9, 1.0);
    CHECK(p9.nearest[3] == doctest::Approx(std::sqrt(20.0)));
    CHECK(p9.max_coupling() == doctest::Approx(std::sqrt(20.0)));
    for (int n = 2; n <= 30; ++n) CHECK(pst_couplings(n).is_mirror_symmetric());
    CHECK_THROWS_AS(pst_couplings(1), InvalidArgument);
    CHECK_THROWS_AS(pst_couplings(5, 0.0), InvalidArgument);
}

TEST_CASE("next-nearest couplings") {
    const auto zero = with_next_nearest(pst_couplings(7), 0.0);
    for (double j : zero.next_nearest) CHECK(j == 0.0);
    const auto p = with_next_nearest(pst_couplings(3), 0.1);
    REQUIRE(p.next_nearest.size() == 1);
    CHECK(p.next_nearest[0] == doctest::Approx(0.1 * std::sqrt(2.0)));
    CHECK(p.nearest == pst_couplings(3).nearest);
    CHECK_THROWS_AS(with_next_nearest(p, -0.1), InvalidArgument);
}

TEST_CASE("disorder sampling") {
    for (double e : sample_disorder(0.0, 9, 42)) CHECK(e == 0.0);
    const auto a = sample_disorder(0.05, 9, 42);
    const auto b = sample_disorder(0.05, 9, 42);
    CHECK(a == b);
    CHECK(a != sample_disorder(0.05, 9, 43));
    for (double e : a) {
        CHECK(e >= 0.0);
        CHECK(e < 0.05);
    }
    CHECK_THROWS_AS(sample_disorder(-0.1, 9, 1), InvalidArgument);
}

TEST_CASE("normalized perturbed spec") {
    const auto s = HamiltonianSpec::perturbed(9, 0.05, 0.1, 0.0, 1);
    CHECK(s.couplings.max_coupling() == doctest::Approx(1.0));
    CHECK(s.couplings.j0 == doctest::Approx(1.0 / std::sqrt(20.0)));
    CHECK(s.mirror_time() == doctest::Approx(std::numbers::pi / 2.0 * std::sqrt(20.0)));
    CHECK(s.fingerprint() != HamiltonianSpec::perturbed(9, 0.05, 0.1, 0.0, 2).fingerprint());
    CHECK(s.fingerprint() == HamiltonianSpec::perturbed(9, 0.05, 0.1, 0.0, 1).fingerprint());
}

TEST_CASE("sector matrix elements") {
    const auto vac = assemble_sector(HamiltonianSpec::pst(5), BasisSector(5, 0));
    CHECK(vac.rows() == 1);
    CHECK(vac(0, 0) == 0.0);

    HamiltonianSpec two = HamiltonianSpec::pst(2);
    two.onsite = {0.3, -0.2};
    const auto h2 = assemble_sector(two, BasisSector(2, 1));
    CHECK(h2(0, 1) == doctest::Approx(1.0));
    CHECK(h2(0, 0) == doctest::Approx(0.3));
    CHECK(h2(1, 1) == doctest::Approx(-0.2));

    HamiltonianSpec five = HamiltonianSpec::pst(5);
    five.gamma = 0.2;
    five.onsite = {0.01, 0.02, 0.03, 0.04, 0.05};
    BasisSector s(5, 2);
    const auto h5 = assemble_sector(five, s);
    const auto i = static_cast<Eigen::Index>(s.rank(0b00011));
    CHECK(h5(i, i) == doctest::Approx(0.01 + 0.02 + 0.2));
    const auto j = static_cast<Eigen::Index>(s.rank(0b00101));
    CHECK(h5(j, j) == doctest::Approx(0.01 + 0.03));
}

TEST_CASE("dense and sparse assembly agree and are symmetric") {
    const auto spec = HamiltonianSpec::perturbed(8, 0.1, 0.2, 0.05, 3, Normalization::none);
    for (int t = 0; t <= 4; ++t) {
        BasisSector s(8, t);
        const Eigen::MatrixXd d = assemble_sector(spec, s);
        const Eigen::MatrixXd sp = Eigen::MatrixXd(assemble_sector_sparse(spec, s));
        CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((d - sp).cwiseAbs().maxCoeff() < 1e-14);
        const auto [lo, hi] = spectral_bounds(assemble_sector_sparse(spec, s));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
        CHECK(es.eigenvalues().minCoeff() >= lo - 1e-12);
        CHECK(es.eigenvalues().maxCoeff() <= hi + 1e-12);
    }
}

TEST_CASE("mirror symmetry of the unperturbed and next-nearest chains") {
    for (int n = 3; n <= 7; ++n) {
        for (double delta : {0.0, 0.1}) {
            HamiltonianSpec spec = HamiltonianSpec::pst(n);
            spec.couplings = with_next_nearest(spec.couplings, delta);
            for (int t = 0; t <= n; ++t) {
                BasisSector s(n, t);
                const Eigen::MatrixXd h = assemble_sector(spec, s);
                const Eigen::MatrixXd m = mirror_matrix(s, n);
                CHECK((h * m - m * h).norm() < 1e-12);
            }
        }
    }
    // disorder breaks it
    const auto dis = HamiltonianSpec::perturbed(7, 0.1, 0.0, 0.0, 5, Normalization::none);
    BasisSector s(7, 1);
    const Eigen::MatrixXd h = assemble_sector(dis, s);
    const Eigen::MatrixXd m = mirror_matrix(s, 7);
    CHECK((h * m - m * h).norm() > 1e-6);
}

TEST_CASE("single-excitation spectrum is harmonic") {
    for (int n = 2; n <= 25; ++n) {
        const Eigen::MatrixXd h = assemble_sector(HamiltonianSpec::pst(n), BasisSector(n, 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const Eigen::VectorXd ev = es.eigenvalues();
        for (Eigen::Index k = 0; k < ev.size(); ++k) {
            CHECK(std::abs(ev[k] - (2.0 * static_cast<double>(k) - (n - 1))) < 1e-9);
        }
    }
}

TEST_CASE("energy expectation matches the matrix form") {
    const auto spec = HamiltonianSpec::perturbed(6, 0.2, 0.3, 0.1, 8, Normalization::none);
    const SystemLayout l(6, {"r"});
    PureState s(l);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    double expect = 0.0;
    for (int t = 0; t <= 3; ++t) {
        BasisSector sec(7, t);
        auto& v = s.sector(t);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex{g(rng), g(rng)};
        const Eigen::MatrixXd h = assemble_sector(spec, sec);
        expect += (v.adjoint() * h.cast<Complex>() * v)(0, 0).real();
    }
    CHECK(energy_expectation(spec, s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    HamiltonianSpec s = HamiltonianSpec::pst(5);
    s.onsite.pop_back();
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    CHECK_THROWS_AS(HamiltonianSpec::perturbed(5, 0.0, -1.0, 0.0, 0), InvalidArgument);
}

}  // TEST_SUITE
