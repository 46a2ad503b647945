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

#include "spinknit/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "spinknit/error.hpp"

namespace spinknit {

namespace {

constexpr std::array<std::pair<MetricKind, std::string_view>, 8> kKindNames{{
    {MetricKind::eof, "eof"},
    {MetricKind::entropy, "entropy"},
    {MetricKind::fidelity, "fidelity"},
    {MetricKind::occupation, "occupation"},
    {MetricKind::concurrence, "concurrence"},
    {MetricKind::success_probability, "success_probability"},
    {MetricKind::norm_drift, "norm_drift"},
    {MetricKind::energy_drift, "energy_drift"},
}};

// Hermitian square root with negative eigenvalues clipped.
Eigen::Matrix4cd clipped_sqrt(const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    Eigen::Vector4d ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) ev[i] = ev[i] > kEigenvalueClip ? std::sqrt(ev[i]) : 0.0;
    return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::string_view to_string(MetricKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

MetricKind metric_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw InvalidArgument("unknown metric kind '" + std::string(name) + "'");
}

std::string_view to_string(FidelityConvention c) {
    return c == FidelityConvention::squared ? "squared" : "root";
}

FidelityConvention fidelity_convention_from_string(std::string_view name) {
    if (name == "squared") return FidelityConvention::squared;
    if (name == "root") return FidelityConvention::root;
    throw InvalidArgument("unknown fidelity convention '" + std::string(name) + "'");
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double concurrence(const DensityMatrix& rho) {
    if (rho.qubits() != 2) throw InvalidArgument("concurrence needs a two-qubit state");
    rho.validate();
    const Eigen::Matrix4cd r = rho.matrix();
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y (x) sigma_y
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
    const Eigen::Matrix4cd s = clipped_sqrt(r);
    // Hermitian form of rho * tilde with the same spectrum
    Eigen::Matrix4cd h = s * tilde * s;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    for (int i = 0; i < 4; ++i) ev[i] = ev[i] > kEigenvalueClip ? std::sqrt(ev[i]) : 0.0;
    std::sort(ev.data(), ev.data() + 4, std::greater<>());
    return std::clamp(ev[0] - ev[1] - ev[2] - ev[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double eof(const DensityMatrix& rho) { return eof_from_concurrence(concurrence(rho)); }

double entropy(const DensityMatrix& rho) {
    rho.validate();
    double s = 0.0;
    for (double p : rho.eigenvalues()) {
        if (p > kEigenvalueClip) s -= p * std::log2(p);
    }
    return std::clamp(s, 0.0, static_cast<double>(rho.qubits()));
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

double fidelity(const PureState& a, const PureState& b, FidelityConvention convention) {
    const double f = std::abs(inner_product(a, b));
    return convention == FidelityConvention::squared ? f * f : f;
}

}  // namespace spinknit
