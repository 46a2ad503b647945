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

#include "spinknit/error.hpp"
#include "spinknit/measures.hpp"

using namespace spinknit;

namespace {

const std::vector<Site> kPair{Site{0}, Site{1}};

DensityMatrix two_qubit(const Eigen::Matrix4cd& m) { return DensityMatrix(kPair, m); }

Eigen::Matrix4cd bell_projector() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd a;
    for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = Complex{g(rng), g(rng)};
    return Eigen::HouseholderQR<Eigen::Matrix2cd>(a).householderQ();
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("concurrence and eof of reference states") {
    CHECK(concurrence(two_qubit(bell_projector())) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eof(two_qubit(bell_projector())) == doctest::Approx(1.0).epsilon(1e-10));
    const Eigen::Matrix4cd mixed = 0.25 * Eigen::Matrix4cd::Identity();
    CHECK(concurrence(two_qubit(mixed)) == 0.0);
    CHECK(eof(two_qubit(mixed)) == 0.0);

    // Werner family: brute-force eigen route against the closed form (3p-1)/2
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8, 0.95}) {
        const Eigen::Matrix4cd w = p * bell_projector() + (1.0 - p) * mixed;
        CHECK(concurrence(two_qubit(w)) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)));
    }
    CHECK(concurrence(two_qubit(0.5 * bell_projector() + 0.5 * mixed)) == doctest::Approx(0.25));
}

TEST_CASE("eof is monotone in concurrence") {
    double prev = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double e = eof_from_concurrence(k / 100.0);
        CHECK(e >= prev);
        prev = e;
    }
    CHECK(eof_from_concurrence(0.0) == 0.0);
    CHECK(eof_from_concurrence(1.0) == 1.0);
}

TEST_CASE("eof is invariant under local unitaries") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Matrix4cd a;
        for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = Complex{g(rng), g(rng)};
        Eigen::Matrix4cd rho = a * a.adjoint();
        rho /= rho.trace();
        const Eigen::Matrix4cd u = kron(random_unitary(rng), random_unitary(rng));
        const Eigen::Matrix4cd rotated = u * rho * u.adjoint();
        CHECK(std::abs(eof(two_qubit(rho)) - eof(two_qubit(rotated))) < 1e-9);
    }
    // a pure entangled state rotated locally keeps C = 1
    const Eigen::Matrix4cd u = kron(random_unitary(rng), random_unitary(rng));
    CHECK(concurrence(two_qubit(u * bell_projector() * u.adjoint())) == doctest::Approx(1.0));
}

TEST_CASE("entropy") {
    const SystemLayout l(3);
    std::vector<QubitState> q(3, QubitState::plus());
    const Site one[] = {Site{1}};
    CHECK(entropy(partial_trace(product_state(l, q), one)) == doctest::Approx(0.0));
    const DensityMatrix half({Site{0}}, 0.5 * Eigen::Matrix2cd::Identity());
    CHECK(entropy(half) == doctest::Approx(1.0));

    // complementary subsystems of a pure state share their entropy
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    PureState x(SystemLayout(5));
    for (int t = 0; t <= 5; ++t) {
        auto& v = x.sector(t);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex{g(rng), g(rng)};
    }
    x = x.normalized();
    const Site a[] = {Site{0}, Site{4}};
    const Site b[] = {Site{1}, Site{2}, Site{3}};
    CHECK(entropy(partial_trace(x, a)) == doctest::Approx(entropy(partial_trace(x, b))).epsilon(1e-10));
}

TEST_CASE("fidelity") {
    const SystemLayout l(4);
    const PureState a = PureState::basis_state(l, 0b0011);
    const PureState b = PureState::basis_state(l, 0b0101);
    CHECK(fidelity(a, a) == 1.0);
    CHECK(fidelity(a, b) == 0.0);
    PureState s(l);
    s.add_amplitude(0b0011, 0.6);
    s.add_amplitude(0b0101, 0.8);
    PureState phased = s;
    phased *= std::polar(1.0, 0.7);
    CHECK(fidelity(s, phased) == doctest::Approx(1.0));
    CHECK(fidelity(s, a) == doctest::Approx(0.36));
    CHECK(fidelity(a, s) == doctest::Approx(0.36));
    CHECK(fidelity(s, a, FidelityConvention::root) == doctest::Approx(0.6));
    CHECK_THROWS_AS(fidelity(a, PureState::vacuum(SystemLayout(5))), InvalidArgument);
}

TEST_CASE("input validation and names") {
    Eigen::Matrix4cd bad = bell_projector();
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS(concurrence(two_qubit(bad)), InvalidArgument);
    CHECK_THROWS_AS(entropy(two_qubit(2.0 * bell_projector())), InvalidArgument);
    CHECK_THROWS_AS(concurrence(DensityMatrix({Site{0}}, Eigen::Matrix2cd::Identity() / 2.0)),
                    InvalidArgument);
    CHECK(metric_kind_from_string(to_string(MetricKind::energy_drift)) == MetricKind::energy_drift);
    CHECK_THROWS_AS(metric_kind_from_string("purity"), InvalidArgument);
    CHECK(fidelity_convention_from_string("root") == FidelityConvention::root);
}

}  // TEST_SUITE
