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

#include "doctest.h"
#include "fixtures.hpp"

using namespace chiralcurl;

namespace {

std::vector<LatticeSpec> lattices() {
    return {fx::cubic(3, 4, 5), fx::cubic(4, 4, 4), fx::fcc(4, 6, 5), fx::fcc(2, 3, 2),
            fx::shifted(4, 5, 6, 2, 1, 3, 2, 1, 1, 1, 0), fx::shifted(3, 4, 3, 1, 2, 2, 0, 0, 0, 0, 0),
            fx::shifted(4, 3, 2, 0, 1, 3, 2, 1, 0, 1, 1)};
}

CMat random_cmat(int r, int c, std::mt19937& rng) {
    std::normal_distribution<double> g;
    CMat X(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) X(i, j) = cd(g(rng), g(rng));
    return X;
}

} // namespace

TEST_CASE("T is unitary and diagonalizes each curl block") {
    for (const auto& s : lattices()) {
        SpectralBasis sb(s);
        const auto d = fx::dense_curl(s);
        const CMat T = sb.dense_T();
        const int n = s.size();
        CHECK((T.adjoint() * T - CMat::Identity(n, n)).norm() < 1e-11);
        const CMat* Cs[3] = {&d.C1, &d.C2, &d.C3};
        for (int l = 0; l < 3; ++l) {
            const CMat D = T.adjoint() * (*Cs[l]) * T;
            CMat L = CMat::Zero(n, n);
            L.diagonal() = sb.lambda(l);
            CHECK((D - L).norm() / std::max(1.0, L.norm()) < 1e-12);
        }
    }
}

TEST_CASE("FFT products agree with the dense basis") {
    std::mt19937 rng(11);
    for (const auto& s : lattices()) {
        SpectralBasis sb(s);
        const CMat T = sb.dense_T();
        const CMat X = random_cmat(s.size(), 3, rng);
        CHECK((sb.apply_T(X) - T * X).norm() < 1e-11 * X.norm());
        CHECK((sb.apply_T_adjoint(X) - T.adjoint() * X).norm() < 1e-11 * X.norm());
        const CVec x = X.col(0);
        CHECK((sb.apply_T_adjoint(sb.apply_T(x)) - x).norm() < 1e-12 * x.norm());
    }
}

TEST_CASE("closed-form basis vectors are eigenvectors of the oracle curl") {
    const auto s = fx::fcc(4, 6, 5);
    SpectralBasis sb(s);
    const auto d = fx::dense_curl(s);
    for (auto [i1, i2, i3] : std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 5, 3}, {4, 6, 5}}) {
        const CVec t = sb.basis_vector(i1, i2, i3);
        const int j = offset_of(i1, i2, i3, sb.dims());
        CHECK(std::abs(t.norm() - 1.0) < 1e-12);
        CHECK((d.C1 * t - sb.lambda(0)(j) * t).norm() < 1e-11);
        CHECK((d.C2 * t - sb.lambda(1)(j) * t).norm() < 1e-11);
        CHECK((d.C3 * t - sb.lambda(2)(j) * t).norm() < 1e-11);
    }
}

TEST_CASE("SVD of the block curl") {
    for (const auto& s : lattices()) {
        SpectralBasis sb(s);
        REQUIRE(sb.has_svd());
        const CMat C = fx::block_curl(fx::dense_curl(s));
        const CMat Pr = sb.P_r(), Qr = sb.Q_r(), P0 = sb.P_0(), Q0 = sb.Q_0();
        const int n = s.size();
        CMat P(3 * n, 3 * n), Q(3 * n, 3 * n);
        P << Pr, P0;
        Q << Qr, Q0;
        CHECK((P.adjoint() * P - CMat::Identity(3 * n, 3 * n)).norm() < 1e-10);
        CHECK((Q.adjoint() * Q - CMat::Identity(3 * n, 3 * n)).norm() < 1e-10);
        const RVec sig = sb.svd().sigma();
        const CMat R = C * Qr - Pr * sig.cast<cd>().asDiagonal();
        CHECK(R.norm() / C.norm() < 1e-12);
        CHECK((C * Q0).norm() / C.norm() < 1e-12);
        CHECK((C.adjoint() * P0).norm() / C.norm() < 1e-12);
        // singular values against LAPACK-grade dense SVD
        Eigen::BDCSVD<CMat> svd(C);
        RVec sv = svd.singularValues();
        RVec ours(3 * n);
        ours << sig, RVec::Zero(n);
        std::sort(ours.data(), ours.data() + ours.size(), std::greater<double>());
        CHECK((sv - ours).norm() < 1e-10 * sv(0));
    }
}

TEST_CASE("matrix-free lift agrees with the dense factor") {
    std::mt19937 rng(3);
    const auto s = fx::shifted(4, 5, 6, 2, 1, 3, 2, 1, 1, 1, 0);
    SpectralBasis sb(s);
    const auto& f = sb.svd();
    const CMat L = sb.lift(f.pi1);
    const CVec y = random_cmat(s.size(), 1, rng);
    const CVec z = random_cmat(3 * s.size(), 1, rng);
    CHECK((sb.lift_apply(f.pi1, y) - L * y).norm() < 1e-11 * y.norm());
    CHECK((sb.lift_apply_adjoint(f.pi1, z) - L.adjoint() * z).norm() < 1e-11 * z.norm());
}

TEST_CASE("zero Bloch vector leaves the SVD unavailable") {
    const auto s = fx::cubic(3, 3, 3, {0, 0, 0});
    SpectralBasis sb(s);
    CHECK_FALSE(sb.has_svd());
    CHECK_THROWS_AS(sb.svd(), Error);
}

TEST_CASE("tau is adjusted when tau_l delta_l collide") {
    const auto s = fx::cubic(4, 4, 4);
    SpectralBasis sb(s, {1, 1, 1});
    CHECK(sb.tau_adjusted());
    const auto t = sb.tau();
    CHECK(t[0] * sb.delta(0) != t[1] * sb.delta(1));
    CHECK(t[0] * sb.delta(0) != t[2] * sb.delta(2));
    CHECK(t[1] * sb.delta(1) != t[2] * sb.delta(2));
}
