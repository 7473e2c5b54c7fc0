/*
 * Copyright 2026 The chiralcurl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chiralcurl/nfgep.hpp"

#include "chiralcurl/dense.hpp"

#include <cmath>

namespace chiralcurl {

namespace {

void check_gamma(const Problem& p, double gamma) {
    if (gamma < 0) fail(Status::invalid_argument, "gamma must be nonnegative");
    if (p.mask().count_inside() > 0 && std::abs(gamma - p.gamma_star()) <= 1e-14 * p.gamma_star())
        fail(Status::invalid_argument, "the null-space-free reduction requires gamma != gamma*");
}

} // namespace

CMat NfgepAssembly::dense_B() const {
    const int m = static_cast<int>(sigma.size());
    CMat B = CMat::Zero(2 * m, 2 * m);
    B.topRightCorner(m, m).diagonal() = kI * sigma.cwiseInverse().cast<cd>();
    B.bottomLeftCorner(m, m).diagonal() = -kI * sigma.cwiseInverse().cast<cd>();
    return B;
}

double NfgepAssembly::b_form(const CVec& y) const {
    const int m = static_cast<int>(sigma.size());
    const cd t = y.head(m).dot(sigma.cwiseInverse().cast<cd>().asDiagonal() * y.tail(m));
    return -2.0 * t.imag();
}

NfgepAssembly assemble_nfgep(const Problem& p, double gamma) {
    check_gamma(p, gamma);
    const auto& sb = p.basis();
    const int n = p.n();
    NfgepAssembly na;
    na.gamma = gamma;
    na.sigma = sb.svd().sigma();
    na.phi = p.phi(gamma);
    const RVec& ii = p.inside3();
    const RVec phinv = na.phi.cwiseInverse();
    const RVec m11 = (1.0 + gamma * gamma * (ii.array() * phinv.array())).matrix();
    const CVec m12 = (-kI * gamma) * (ii.array() * phinv.array()).matrix().cast<cd>();
    const CMat Pr = sb.P_r(), Qr = sb.Q_r();
    na.A_r.resize(4 * n, 4 * n);
    na.A_r.topLeftCorner(2 * n, 2 * n) = Pr.adjoint() * (m11.cast<cd>().asDiagonal() * Pr);
    na.A_r.topRightCorner(2 * n, 2 * n) = Pr.adjoint() * (m12.asDiagonal() * Qr);
    na.A_r.bottomLeftCorner(2 * n, 2 * n) = na.A_r.topRightCorner(2 * n, 2 * n).adjoint();
    na.A_r.bottomRightCorner(2 * n, 2 * n) = Qr.adjoint() * (phinv.cast<cd>().asDiagonal() * Qr);
    return na;
}

NfgepSpectrum solve_nfgep(const NfgepAssembly& na, bool want_vectors, int cap) {
    if (na.dim() > cap)
        fail(Status::resource_cap,
             "reduced dimension " + std::to_string(na.dim()) + " exceeds the dense cap " + std::to_string(cap));
    const int m = static_cast<int>(na.sigma.size());
    const auto S = na.sigma.cast<cd>().asDiagonal();
    // B_r^{-1} = i [0, S; -S, 0]
    CMat M(2 * m, 2 * m);
    M.topRows(m) = kI * (S * na.A_r.bottomRows(m));
    M.bottomRows(m) = -kI * (S * na.A_r.topRows(m));
    EigResult r = eig(M, want_vectors);
    NfgepSpectrum s;
    s.values = std::move(r.values);
    s.vectors = std::move(r.vectors);
    if (want_vectors) s.vectors.colwise().normalize();
    return s;
}

CVec lift_reduced(const Problem& p, const CVec& y) {
    const int n = p.n();
    if (y.size() != 4 * n) fail(Status::invalid_argument, "reduced vector length must be 4n");
    const auto& sb = p.basis();
    const auto& f = sb.svd();
    CVec z(6 * n);
    // P_r = lift[-pi2b, pi1b], Q_r = lift[pi1, pi2]
    z.head(3 * n) = -sb.lift_apply(f.pi2b, y.segment(0, n)) + sb.lift_apply(f.pi1b, y.segment(n, n));
    z.tail(3 * n) = sb.lift_apply(f.pi1, y.segment(2 * n, n)) + sb.lift_apply(f.pi2, y.segment(3 * n, n));
    return z;
}

CVec recover_fields(const Problem& p, double gamma, const CVec& y) {
    check_gamma(p, gamma);
    const int m = 3 * p.n();
    const CVec z = lift_reduced(p, y);
    const RVec& ii = p.inside3();
    const RVec phi = p.phi(gamma);
    CVec he(2 * m);
    for (int k = 0; k < m; ++k) {
        const double eps = ii(k) > 0 ? p.eps_i() : p.eps_o();
        const cd zeta = -kI * gamma * ii(k), xi = kI * gamma * ii(k);
        // [-1, -zeta; xi, eps]^{-1} = -(1/phi) [eps, zeta; -xi, -1]
        const cd z1 = z(k), z2 = z(m + k);
        he(k) = kI * (-(eps * z1 + zeta * z2) / phi(k));
        he(m + k) = kI * (-(-xi * z1 - z2) / phi(k));
    }
    return he;
}

Eigen::Matrix2cd derivative_kernel(double eps_i, double gamma) {
    const double g2 = gamma * gamma;
    const double s = 1.0 / ((eps_i - g2) * (eps_i - g2));
    Eigen::Matrix2cd W;
    W << 2 * gamma * eps_i * s, -kI * (eps_i + g2) * s, kI * (eps_i + g2) * s, 2 * gamma * s;
    return W;
}

double derivative_indicator(const Problem& p, const NfgepAssembly& na, const CVec& y) {
    if (na.gamma >= p.gamma_star() && p.mask().count_inside() > 0)
        fail(Status::invalid_argument, "derivative indicator requires gamma < gamma*");
    const double a = y.dot(na.A_r * y).real();
    if (!(a > 0)) fail(Status::invalid_argument, "derivative indicator requires y^H A_r y > 0");
    const CVec yn = y / std::sqrt(a);
    const CVec z = lift_reduced(p, yn);
    const int m = 3 * p.n();
    const Eigen::Matrix2cd W = derivative_kernel(p.eps_i(), na.gamma);
    const RVec& ii = p.inside3();
    double d = 0;
    for (int k = 0; k < m; ++k) {
        if (ii(k) == 0) continue;
        const Eigen::Vector2cd v(z(k), z(m + k));
        d += v.dot(W * v).real();
    }
    return d;
}

int reduced_type(cd omega, const CVec& y, const NfgepAssembly& na, double tol) {
    const double ny = y.norm();
    if (ny == 0 || omega == 0.0) return 0;
    const double b = na.b_form(y / ny);
    if (std::abs(b) <= tol) return 0;
    return (omega.real() > 0) == (b > 0) ? 1 : -1;
}

} // namespace chiralcurl
