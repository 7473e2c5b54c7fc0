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

#include "chiralcurl/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace chiralcurl {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

cd cis(double turns) { return std::polar(1.0, 2 * kPi * turns); }

Eigen::Vector3cd cross(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

} // namespace

struct FftPlans {
    // axis l: forward (sign -1) and backward (sign +1), in-place, unaligned
    fftw_plan fwd[3]{};
    fftw_plan bwd[3]{};

    explicit FftPlans(const std::array<int, 3>& d) {
        const int n1 = d[0], n2 = d[1], n3 = d[2];
        const int n = n1 * n2 * n3;
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto* buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        const fftw_iodim axis[3] = {{n1, 1, 1}, {n2, n1, n1}, {n3, n1 * n2, n1 * n2}};
        const fftw_iodim rest[3][2] = {{{n2, n1, n1}, {n3, n1 * n2, n1 * n2}},
                                       {{n1, 1, 1}, {n3, n1 * n2, n1 * n2}},
                                       {{n1, 1, 1}, {n2, n1, n1}}};
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        for (int l = 0; l < 3; ++l) {
            fwd[l] = fftw_plan_guru_dft(1, &axis[l], 2, rest[l], buf, buf, FFTW_FORWARD, flags);
            bwd[l] = fftw_plan_guru_dft(1, &axis[l], 2, rest[l], buf, buf, FFTW_BACKWARD, flags);
        }
        fftw_free(buf);
        for (int l = 0; l < 3; ++l)
            if (!fwd[l] || !bwd[l]) fail(Status::internal_error, "FFTW planning failed");
    }
    ~FftPlans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (int l = 0; l < 3; ++l) {
            fftw_destroy_plan(fwd[l]);
            fftw_destroy_plan(bwd[l]);
        }
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    static void run(fftw_plan p, cd* y) {
        auto* f = reinterpret_cast<fftw_complex*>(y);
        fftw_execute_dft(p, f, f);
    }
};

RVec SvdFactors::sigma() const {
    RVec r(2 * s.size());
    r << s, s;
    return r;
}

SpectralBasis::SpectralBasis(const LatticeSpec& spec, Vec3 tau)
    : n_(spec.size()), dims_{spec.n1(), spec.n2(), spec.n3()}, tau_(tau) {
    for (int l = 0; l < 3; ++l) delta_[l] = spec.delta(l);
    const int n1 = dims_[0], n2 = dims_[1], n3 = dims_[2];
    const double N1 = n1, N2 = n2, N3 = n3;
    const double m1 = spec.m1(), m2 = spec.m2(), mh1 = spec.mhat1();
    const double k1 = spec.kappa_hat(0), k2 = spec.kappa_hat(1), k3 = spec.kappa_hat(2);

    for (int l = 0; l < 3; ++l) {
        alpha_[l].resize(n_);
        lambda_[l].resize(n_);
    }
    for (int q3 = 0; q3 < n3; ++q3)
        for (int q2 = 0; q2 < n2; ++q2)
            for (int q1 = 0; q1 < n1; ++q1) {
                const int j = q1 + n1 * (q2 + n2 * q3);
                const double i1 = q1 + 1, i2 = q2 + 1, i3 = q3 + 1;
                alpha_[0][j] = cis((k1 + i1) / N1);
                alpha_[1][j] = cis((k2 + i2) / N2 - m1 * i1 / (N1 * N2));
                alpha_[2][j] = cis((k3 + i3) / N3 - m2 * i2 / (N2 * N3) - mh1 * i1 / (N1 * N3) +
                                   m1 * m2 * i1 / (N1 * N2 * N3));
            }
    for (int l = 0; l < 3; ++l) lambda_[l] = (alpha_[l].array() - 1.0) / delta_[l];
    lambda_q_ = lambda_[0].cwiseAbs2() + lambda_[1].cwiseAbs2() + lambda_[2].cwiseAbs2();

    // FFT twiddles
    g0_.resize(n_);
    g1_.resize(n_);
    g2_.resize(n_);
    const double rn = 1.0 / std::sqrt(double(n_));
    for (int p3 = 0; p3 < n3; ++p3)
        for (int b = 0; b < n2; ++b)
            for (int a = 0; a < n1; ++a) {
                const int j = a + n1 * (b + n2 * p3);
                // g2 indexed (q1 = a, q2 = b, p3)
                g2_[j] = cis(p3 / N3 - m2 * (b + 1) * p3 / (N2 * N3));
                // g1 indexed (q1 = a, p2 = b, p3)
                g1_[j] = cis(b / N2 + (a + 1) * (-m1 * b / (N1 * N2) - mh1 * p3 / (N1 * N3) +
                                                 m1 * m2 * p3 / (N1 * N2 * N3)));
                // g0 indexed (p1 = a, p2 = b, p3)
                g0_[j] = cis(a / N1 + k1 * a / N1 + k2 * b / N2 + k3 * p3 / N3) * rn;
            }
    plans_ = std::make_shared<FftPlans>(dims_);

    // tau must give pairwise distinct tau_l delta_l
    auto same = [&](int a, int b) {
        const double x = tau_[a] * delta_[a], y = tau_[b] * delta_[b];
        return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
    };
    while (same(0, 1)) {
        tau_[1] += 1.0;
        tau_adjusted_ = true;
    }
    while (same(0, 2) || same(1, 2)) {
        tau_[2] += 1.0;
        tau_adjusted_ = true;
    }

    const double smax = std::sqrt(lambda_q_.maxCoeff());
    if (std::sqrt(lambda_q_.minCoeff()) <= 1e-13 * smax) return; // k = 0: no SVD factors

    auto f = std::make_shared<SvdFactors>();
    f->s = lambda_q_.cwiseSqrt();
    for (Field3* F : {&f->pi0, &f->pi0b, &f->pi1, &f->pi1b, &f->pi2, &f->pi2b}) F->resize(3, n_);
    const Eigen::Vector3cd t(tau_[0], tau_[1], tau_[2]);
    for (int j = 0; j < n_; ++j) {
        const Eigen::Vector3cd lam(lambda_[0][j], lambda_[1][j], lambda_[2][j]);
        const Eigen::Vector3cd lamc = lam.conjugate();
        const double s = f->s[j];
        const Eigen::Vector3cd p = cross(t, lamc), pb = cross(t, lam);
        const double np = p.norm();
        if (np <= 1e-14 * s * t.norm()) fail(Status::internal_error, "degenerate Lambda_p column");
        f->pi0.col(j) = lam / s;
        f->pi0b.col(j) = lamc / s;
        f->pi2.col(j) = p / np;
        f->pi2b.col(j) = pb / np;
        f->pi1b.col(j) = cross(lam, p) / (np * s);
        f->pi1.col(j) = cross(lamc, pb) / (np * s);
    }
    svd_ = f;
}

const SvdFactors& SpectralBasis::svd() const {
    if (!svd_) fail(Status::config_error, "SVD factors require a nonzero Bloch vector k");
    return *svd_;
}

CVec SpectralBasis::basis_vector(int i1, int i2, int i3) const {
    const int j = offset_of(i1, i2, i3, dims_);
    const int n1 = dims_[0], n2 = dims_[1], n3 = dims_[2];
    CVec v(n_);
    const double rn = 1.0 / std::sqrt(double(n_));
    cd a3 = 1.0;
    for (int p3 = 0; p3 < n3; ++p3) {
        cd a2 = 1.0;
        for (int p2 = 0; p2 < n2; ++p2) {
            cd a1 = 1.0;
            for (int p1 = 0; p1 < n1; ++p1) {
                v[p1 + n1 * (p2 + n2 * p3)] = a3 * a2 * a1 * rn;
                a1 *= alpha_[0][j];
            }
            a2 *= alpha_[1][j];
        }
        a3 *= alpha_[2][j];
    }
    return v;
}

CMat SpectralBasis::dense_T() const {
    CMat T(n_, n_);
    for (int j = 0; j < n_; ++j) {
        const auto node = node_of(j, dims_);
        T.col(j) = basis_vector(node[0], node[1], node[2]);
    }
    return T;
}

void SpectralBasis::apply_T(const cd* x, cd* y) const {
    if (y != x) std::copy(x, x + n_, y);
    FftPlans::run(plans_->bwd[2], y);
    for (int j = 0; j < n_; ++j) y[j] *= g2_[j];
    FftPlans::run(plans_->bwd[1], y);
    for (int j = 0; j < n_; ++j) y[j] *= g1_[j];
    FftPlans::run(plans_->bwd[0], y);
    for (int j = 0; j < n_; ++j) y[j] *= g0_[j];
}

void SpectralBasis::apply_T_adjoint(const cd* x, cd* y) const {
    for (int j = 0; j < n_; ++j) y[j] = x[j] * std::conj(g0_[j]);
    FftPlans::run(plans_->fwd[0], y);
    for (int j = 0; j < n_; ++j) y[j] *= std::conj(g1_[j]);
    FftPlans::run(plans_->fwd[1], y);
    for (int j = 0; j < n_; ++j) y[j] *= std::conj(g2_[j]);
    FftPlans::run(plans_->fwd[2], y);
}

CVec SpectralBasis::apply_T(const CVec& x) const {
    if (x.size() != n_) fail(Status::invalid_argument, "apply_T: length mismatch");
    CVec y(n_);
    apply_T(x.data(), y.data());
    return y;
}

CVec SpectralBasis::apply_T_adjoint(const CVec& x) const {
    if (x.size() != n_) fail(Status::invalid_argument, "apply_T_adjoint: length mismatch");
    CVec y(n_);
    apply_T_adjoint(x.data(), y.data());
    return y;
}

CMat SpectralBasis::apply_T(const CMat& X) const {
    if (X.rows() != n_) fail(Status::invalid_argument, "apply_T: row mismatch");
    CMat Y(n_, X.cols());
    for (int c = 0; c < X.cols(); ++c) apply_T(X.col(c).data(), Y.col(c).data());
    return Y;
}

CMat SpectralBasis::apply_T_adjoint(const CMat& X) const {
    if (X.rows() != n_) fail(Status::invalid_argument, "apply_T_adjoint: row mismatch");
    CMat Y(n_, X.cols());
    for (int c = 0; c < X.cols(); ++c) apply_T_adjoint(X.col(c).data(), Y.col(c).data());
    return Y;
}

CMat SpectralBasis::lift(const Field3& f) const {
    const CMat T = apply_T(CMat(CMat::Identity(n_, n_)));
    CMat L(3 * n_, n_);
    for (int l = 0; l < 3; ++l) L.middleRows(l * n_, n_) = T * f.row(l).transpose().asDiagonal();
    return L;
}

CMat SpectralBasis::P_r() const {
    const auto& f = svd();
    CMat P(3 * n_, 2 * n_);
    P << -lift(f.pi2b), lift(f.pi1b);
    return P;
}

CMat SpectralBasis::Q_r() const {
    const auto& f = svd();
    CMat Q(3 * n_, 2 * n_);
    Q << lift(f.pi1), lift(f.pi2);
    return Q;
}

CMat SpectralBasis::P_0() const { return lift(svd().pi0b); }
CMat SpectralBasis::Q_0() const { return lift(svd().pi0); }

CVec SpectralBasis::lift_apply(const Field3& f, const CVec& y) const {
    if (y.size() != n_) fail(Status::invalid_argument, "lift_apply: length mismatch");
    CVec z(3 * n_);
    for (int l = 0; l < 3; ++l) {
        const CVec w = f.row(l).transpose().cwiseProduct(y);
        apply_T(w.data(), z.data() + l * n_);
    }
    return z;
}

CVec SpectralBasis::lift_apply_adjoint(const Field3& f, const CVec& z) const {
    if (z.size() != 3 * n_) fail(Status::invalid_argument, "lift_apply_adjoint: length mismatch");
    CVec y = CVec::Zero(n_);
    CVec w(n_);
    for (int l = 0; l < 3; ++l) {
        apply_T_adjoint(z.data() + l * n_, w.data());
        y += f.row(l).transpose().conjugate().cwiseProduct(w);
    }
    return y;
}

} // namespace chiralcurl
