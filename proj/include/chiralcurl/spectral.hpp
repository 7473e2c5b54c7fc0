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

#pragma once

#include "chiralcurl/lattice.hpp"

#include <memory>

namespace chiralcurl {

/// Per-frequency 3-vectors stored column-wise: column j belongs to t_j.
using Field3 = Eigen::Matrix<cd, 3, Eigen::Dynamic>;

struct SvdFactors {
    Field3 pi0, pi0b, pi1, pi1b, pi2, pi2b;
    RVec s; // sqrt(Lambda_q), length n

    /// Sigma = diag(s, s), length 2n.
    RVec sigma() const;
};

struct FftPlans;

class SpectralBasis {
public:
    explicit SpectralBasis(const LatticeSpec& spec, Vec3 tau = {1, 2, 3});

    int n() const { return n_; }
    const std::array<int, 3>& dims() const { return dims_; }
    const CVec& alpha(int l) const { return alpha_[l]; }
    const CVec& lambda(int l) const { return lambda_[l]; }
    const RVec& lambda_q() const { return lambda_q_; }
    const Vec3& tau() const { return tau_; }
    bool tau_adjusted() const { return tau_adjusted_; }
    double delta(int l) const { return delta_[l]; }

    bool has_svd() const { return svd_ != nullptr; }
    /// Throws when k = 0 (Lambda_q singular).
    const SvdFactors& svd() const;

    /// Column t_j for 1-based node <i1,i2,i3>, from the closed form.
    CVec basis_vector(int i1, int i2, int i3) const;
    /// Dense T assembled column by column from the closed form.
    CMat dense_T() const;

    void apply_T(const cd* x, cd* y) const;
    void apply_T_adjoint(const cd* x, cd* y) const;
    CVec apply_T(const CVec& x) const;
    CVec apply_T_adjoint(const CVec& x) const;
    CMat apply_T(const CMat& X) const;
    CMat apply_T_adjoint(const CMat& X) const;

    /// (I_3 (x) T) [diag(F_1); diag(F_2); diag(F_3)] as a dense 3n x n matrix.
    CMat lift(const Field3& f) const;
    CMat P_r() const;
    CMat Q_r() const;
    CMat P_0() const;
    CMat Q_0() const;

    /// Matrix-free products with the lifted factors.
    CVec lift_apply(const Field3& f, const CVec& y) const;
    CVec lift_apply_adjoint(const Field3& f, const CVec& z) const;

private:
    int n_;
    std::array<int, 3> dims_;
    Vec3 delta_;
    Vec3 tau_;
    bool tau_adjusted_ = false;
    std::array<CVec, 3> alpha_, lambda_;
    RVec lambda_q_;
    std::shared_ptr<const SvdFactors> svd_;
    std::shared_ptr<const FftPlans> plans_;
    CVec g0_, g1_, g2_; // diagonal twiddles of the FFT factorization
};

} // namespace chiralcurl
