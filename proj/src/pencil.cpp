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

#include "chiralcurl/pencil.hpp"

#include "chiralcurl/dense.hpp"

#include <cmath>

namespace chiralcurl {

Problem::Problem(LatticeSpec spec, MaterialMask mask, Vec3 tau)
    : spec_(std::move(spec)), mask_(std::move(mask)) {
    if (mask_.size() != spec_.size()) fail(Status::config_error, "material mask size does not match the grid");
    curl_ = std::make_shared<CurlBlocks>(assemble_curl(spec_));
    basis_ = std::make_shared<SpectralBasis>(spec_, tau);
    inside3_ = mask_.inside_diag3();
}

RVec Problem::phi(double gamma) const {
    const double e_in = mask_.eps_i - gamma * gamma;
    return (inside3_.array() * e_in + (1.0 - inside3_.array()) * mask_.eps_o).matrix();
}

PencilAssembly assemble_pencil(const Problem& p, double gamma) {
    const int m = 3 * p.n();
    if (2 * m > kDefaultDimensionCap * 4)
        fail(Status::resource_cap, "pencil dimension " + std::to_string(2 * m) + " exceeds the dense assembly limit");
    PencilAssembly pa;
    pa.gamma = gamma;
    pa.gamma_star = p.gamma_star();
    const CMat C = p.curl().dense_C();
    const RVec& ii = p.inside3();
    pa.A = CMat::Zero(2 * m, 2 * m);
    pa.A.topRightCorner(m, m) = -kI * C;
    pa.A.bottomLeftCorner(m, m) = kI * C.adjoint();
    pa.A.bottomRightCorner(m, m) =
        -gamma * (ii.cast<cd>().asDiagonal() * C + C.adjoint() * ii.cast<cd>().asDiagonal());
    pa.B.resize(2 * m);
    pa.B.head(m).setOnes();
    pa.B.tail(m) = p.phi(gamma);
    return pa;
}

RayleighScalars rayleigh(const Problem& p, double gamma, const CVec& e) {
    if (e.size() != 3 * p.n()) fail(Status::invalid_argument, "rayleigh: vector length must be 3n");
    if (e.norm() == 0.0) fail(Status::invalid_argument, "rayleigh: zero vector");
    const RVec& ii = p.inside3();
    const CVec Ce = p.apply_C(e);
    RayleighScalars r;
    r.c = Ce.squaredNorm();
    r.a_i = (ii.array() * e.array().abs2()).sum();
    r.a_o = (e.array().abs2()).sum() - r.a_i;
    r.b = 2.0 * e.dot(ii.cast<cd>().asDiagonal() * Ce).real();
    const double D = p.eps_o() * r.a_o + (p.eps_i() - gamma * gamma) * r.a_i;
    r.delta = gamma * gamma * r.b * r.b + 4.0 * r.c * D;
    const double scale = p.eps_o() * r.a_o + std::max(p.eps_i(), gamma * gamma) * r.a_i;
    if (std::abs(D) <= 1e-14 * scale) {
        r.linear_fallback = true;
        if (std::abs(gamma * r.b) > 0.0) {
            r.omega_plus = r.omega_minus = r.c / (gamma * r.b);
        } else {
            r.undefined = true;
            r.omega_plus = r.omega_minus = std::numeric_limits<double>::quiet_NaN();
        }
        return r;
    }
    const cd sq = std::sqrt(cd(r.delta, 0.0));
    r.omega_plus = (gamma * r.b + sq) / (-2.0 * D);
    r.omega_minus = (gamma * r.b - sq) / (-2.0 * D);
    return r;
}

double qep_residual(const Problem& p, double gamma, cd omega, const CVec& e) {
    if (e.size() != 3 * p.n()) fail(Status::invalid_argument, "qep_residual: vector length must be 3n");
    const double ne = e.norm();
    if (ne == 0.0) fail(Status::invalid_argument, "qep_residual: zero vector");
    const RVec& ii = p.inside3();
    const CVec Ce = p.apply_C(e);
    const CVec q = p.apply_CH(Ce) -
                   omega * gamma * (ii.cast<cd>().asDiagonal() * Ce + p.apply_CH(ii.cast<cd>().asDiagonal() * e)) -
                   omega * omega * (p.phi(gamma).cast<cd>().asDiagonal() * e);
    return q.norm() / ne;
}

CVec convert_eigenvector(const Problem& p, double gamma, Conversion dir, cd omega, const CVec& v) {
    const int m = 3 * p.n();
    const auto Ii = p.inside3().cast<cd>().asDiagonal();
    switch (dir) {
    case Conversion::maxwell_to_pencil: {
        if (v.size() != 2 * m) fail(Status::invalid_argument, "convert: vector length must be 6n");
        CVec out(2 * m);
        out.head(m) = v.tail(m) - kI * gamma * (Ii * v.head(m));
        out.tail(m) = v.head(m);
        return out;
    }
    case Conversion::pencil_to_maxwell: {
        if (v.size() != 2 * m) fail(Status::invalid_argument, "convert: vector length must be 6n");
        CVec out(2 * m);
        out.head(m) = v.tail(m);
        out.tail(m) = v.head(m) + kI * gamma * (Ii * v.tail(m));
        return out;
    }
    case Conversion::e_to_h: {
        if (v.size() != m) fail(Status::invalid_argument, "convert: vector length must be 3n");
        if (omega == 0.0) fail(Status::invalid_argument, "convert: e to h requires omega != 0");
        return kI * (gamma * (Ii * v) - p.apply_C(v) / omega);
    }
    }
    fail(Status::invalid_argument, "convert: unknown direction");
}

double maxwell_residual(const Problem& p, double gamma, cd omega, const CVec& eh) {
    const int m = 3 * p.n();
    if (eh.size() != 2 * m) fail(Status::invalid_argument, "maxwell_residual: vector length must be 6n");
    const CVec e = eh.head(m), h = eh.tail(m);
    const RVec& ii = p.inside3();
    const auto Ii = ii.cast<cd>().asDiagonal();
    const RVec eps = (ii.array() * p.eps_i() + (1.0 - ii.array()) * p.eps_o()).matrix();
    // [C 0; 0 C^H][e; h] = i omega [zeta mu; -eps -xi][e; h]
    const CVec l1 = p.apply_C(e), l2 = p.apply_CH(h);
    const CVec m1 = -kI * gamma * (Ii * e) + h;
    const CVec m2 = -(eps.cast<cd>().asDiagonal() * e) - kI * gamma * (Ii * h);
    const double r = std::sqrt((l1 - kI * omega * m1).squaredNorm() + (l2 - kI * omega * m2).squaredNorm());
    const double s = std::sqrt(l1.squaredNorm() + l2.squaredNorm()) +
                     std::abs(omega) * std::sqrt(m1.squaredNorm() + m2.squaredNorm());
    return s > 0 ? r / s : r;
}

namespace {
constexpr double kInfiniteRatio = 1e-6;
} // namespace

PencilSpectrum solve_dense_pencil(const PencilAssembly& pa, bool want_vectors, int cap) {
    const int N = pa.dim();
    if (N > cap)
        fail(Status::resource_cap,
             "pencil dimension " + std::to_string(N) + " exceeds the dense cap " + std::to_string(cap));
    PencilSpectrum s;
    s.values.resize(N);
    s.infinite.assign(N, 0);
    s.trivial.assign(N, 0);
    const double bmax = pa.B.cwiseAbs().maxCoeff();
    const double bmin = pa.B.cwiseAbs().minCoeff();
    if (bmin > 1e-12 * bmax) {
        const CMat M = pa.B.cwiseInverse().cast<cd>().asDiagonal() * pa.A;
        EigResult r = eig(M, want_vectors);
        s.values = r.values;
        s.vectors = std::move(r.vectors);
    } else {
        GenEigResult r = eig_generalized(pa.A, pa.dense_B(), want_vectors);
        const double amax = pa.A.cwiseAbs().maxCoeff();
        for (int j = 0; j < N; ++j) {
            if (std::abs(r.beta(j)) * amax <= kInfiniteRatio * std::abs(r.alpha(j)) * bmax) {
                s.infinite[j] = 1;
                ++s.count_infinite;
                s.values(j) = cd(std::numeric_limits<double>::infinity(), 0.0);
            } else {
                s.values(j) = r.alpha(j) / r.beta(j);
            }
        }
        s.vectors = std::move(r.vectors);
    }
    if (want_vectors) s.vectors.colwise().normalize();
    return s;
}

void label_trivial_zeros(PencilSpectrum& s, const CMat& L, double zero_tol, double rtol) {
    if (s.vectors.size() == 0) fail(Status::invalid_argument, "trivial-zero labeling needs eigenvectors");
    const CMat Q = orth(L);
    for (int j = 0; j < s.values.size(); ++j) {
        if (s.infinite[j] || std::abs(s.values(j)) > zero_tol) continue;
        const CVec x = s.vectors.col(j);
        const CVec r = x - Q * (Q.adjoint() * x);
        if (r.norm() <= rtol * x.norm()) s.trivial[j] = 1;
    }
}

} // namespace chiralcurl
