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

#include "chiralcurl/dense.hpp"
#include "chiralcurl/nfgep.hpp"

#include "doctest.h"
#include "fixtures.hpp"

using namespace chiralcurl;

namespace {

CVec nonzero(const CVec& w, double tol) {
    std::vector<cd> v;
    for (int j = 0; j < w.size(); ++j)
        if (std::abs(w(j)) > tol) v.push_back(w(j));
    return Eigen::Map<CVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

TEST_CASE("reduced spectrum equals the nonzero pencil spectrum") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const double gs = p.gamma_star();
    for (double f : {0.2, 0.5, 0.9, 1.2, 1.5}) {
        const double g = f * gs;
        const auto full = solve_dense_pencil(assemble_pencil(p, g), false);
        const double wmax = full.values.cwiseAbs().maxCoeff();
        const CVec nz = nonzero(full.values, 1e-8 * wmax);
        const auto red = solve_nfgep(assemble_nfgep(p, g), false);
        REQUIRE(nz.size() == red.values.size());
        CHECK(fx::multiset_distance(nz, red.values) < 1e-8 * wmax);
    }
}

TEST_CASE("reduced pair on the fcc lattice") {
    const auto s = fx::fcc(4, 3, 4);
    Problem p(s, fx::plus_center(s));
    const double g = 0.7 * p.gamma_star();
    const auto full = solve_dense_pencil(assemble_pencil(p, g), false);
    const double wmax = full.values.cwiseAbs().maxCoeff();
    const auto red = solve_nfgep(assemble_nfgep(p, g), false);
    CHECK(fx::multiset_distance(nonzero(full.values, 1e-8 * wmax), red.values) < 1e-8 * wmax);
}

TEST_CASE("A_r is positive definite below gamma* and indefinite above") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const double gs = p.gamma_star();
    for (double f : {0.2, 0.5, 0.9}) {
        const auto na = assemble_nfgep(p, f * gs);
        CHECK((na.A_r - na.A_r.adjoint()).norm() < 1e-12 * na.A_r.norm());
        CHECK(eigvalsh(na.A_r)(0) > 0);
    }
    bool indefinite = false;
    for (double f : {1.2, 1.5}) indefinite = indefinite || eigvalsh(assemble_nfgep(p, f * gs).A_r)(0) < 0;
    CHECK(indefinite);
    const auto na = assemble_nfgep(p, 1.0);
    const CMat B = na.dense_B();
    CHECK((B - B.adjoint()).norm() == 0.0);
    CHECK(singular_values(B).minCoeff() > 0);
}

TEST_CASE("gamma = 0 reduces to diag(I, Q_r^H Phi^{-1} Q_r)") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const auto na = assemble_nfgep(p, 0.0);
    const int n = s.size();
    const CMat Qr = p.basis().Q_r();
    const CMat expect22 = Qr.adjoint() * p.phi(0.0).cwiseInverse().cast<cd>().asDiagonal() * Qr;
    CHECK((na.A_r.topLeftCorner(2 * n, 2 * n) - CMat::Identity(2 * n, 2 * n)).norm() < 1e-12);
    CHECK(na.A_r.topRightCorner(2 * n, 2 * n).norm() < 1e-12);
    CHECK((na.A_r.bottomRightCorner(2 * n, 2 * n) - expect22).norm() < 1e-12);
}

TEST_CASE("gamma* is rejected") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    CHECK_THROWS_AS(assemble_nfgep(p, p.gamma_star()), Error);
    CHECK_THROWS_AS(recover_fields(p, p.gamma_star(), CVec::Zero(4 * s.size())), Error);
}

TEST_CASE("recovered fields solve the Maxwell system") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const int m = 3 * s.size();
    for (double g : {0.0, 2.0, 4.0}) {
        const auto na = assemble_nfgep(p, g);
        const auto red = solve_nfgep(na, true);
        for (int j = 0; j < red.values.size(); j += 7) {
            const cd w = red.values(j);
            const CVec he = recover_fields(p, g, red.vectors.col(j));
            CVec eh(2 * m);
            eh << he.tail(m), he.head(m);
            CHECK(maxwell_residual(p, g, w, eh) < 1e-8);
            const auto r = rayleigh(p, g, eh.head(m));
            const double d = std::min(std::abs(w - r.omega_plus), std::abs(w - r.omega_minus));
            CHECK(d < 1e-8 * std::max(1.0, std::abs(w)));
        }
    }
    CHECK(recover_fields(p, 1.0, CVec::Zero(4 * s.size())).norm() == 0.0);
}

TEST_CASE("vacuum recovery is the block map i(-P_r y1, Q_r y2)") {
    const auto s = fx::cubic(3, 3, 3);
    Problem p(s, fx::empty_mask(s, 13, 1));
    const int n = s.size();
    const CVec y = CVec::Random(4 * n);
    const CVec he = recover_fields(p, 0.0, y);
    const CVec expect_h = -kI * (p.basis().P_r() * y.head(2 * n));
    const CVec expect_e = kI * (p.basis().Q_r() * y.tail(2 * n));
    CHECK((he.head(3 * n) - expect_h).norm() < 1e-12);
    CHECK((he.tail(3 * n) - expect_e).norm() < 1e-12);
}

TEST_CASE("derivative kernel inertia and determinant") {
    for (double ei : {13.0, 4.0}) {
        for (double g : {0.5, 1.5, 1.9}) {
            const Eigen::Matrix2cd W = derivative_kernel(ei, g);
            const RVec w = eigvalsh(W);
            CHECK(w(0) < 0);
            CHECK(w(1) > 0);
            const double d1 = 4 * g * (ei + 1) / ((ei - g * g) * (ei - g * g));
            const double d2 = -1.0 / (4 * g * (ei + 1));
            CHECK(W.determinant().real() == doctest::Approx(d1 * d2));
        }
    }
}

TEST_CASE("derivative indicator vanishes without medium") {
    const auto s = fx::cubic(3, 3, 3);
    Problem p(s, fx::empty_mask(s));
    const auto na = assemble_nfgep(p, 1.0);
    const auto red = solve_nfgep(na, true);
    CHECK(derivative_indicator(p, na, red.vectors.col(0)) == 0.0);
}

TEST_CASE("eigenvalue drift follows omega' = omega d") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const double g = 0.9 * p.gamma_star(), h = 1e-5;
    const auto na = assemble_nfgep(p, g);
    const auto red = solve_nfgep(na, true);
    const auto lo = solve_nfgep(assemble_nfgep(p, g - h), true);
    const auto hi = solve_nfgep(assemble_nfgep(p, g + h), true);
    auto track = [&](const NfgepSpectrum& sp, const CVec& x) {
        int best = 0;
        double ov = -1;
        for (int j = 0; j < sp.values.size(); ++j) {
            const double o = std::abs(sp.vectors.col(j).dot(x));
            if (o > ov) {
                ov = o;
                best = j;
            }
        }
        return sp.values(best).real();
    };
    int tested = 0;
    for (int j = 0; j < red.values.size(); ++j) {
        const double w = red.values(j).real();
        const CVec y = red.vectors.col(j);
        const double d = derivative_indicator(p, na, y);
        if (std::abs(d) <= 1e-10) continue;
        const double fd = (track(hi, y) - track(lo, y)) / (2 * h);
        CHECK(fd == doctest::Approx(w * d).epsilon(1e-3).scale(1e-6));
        if (d > 0) CHECK((fd >= -1e-8) == (w > 0));
        ++tested;
    }
    CHECK(tested > 0);
}

TEST_CASE("reduced types are positive below gamma*") {
    const auto s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const auto na = assemble_nfgep(p, 2.0);
    const auto red = solve_nfgep(na, true);
    for (int j = 0; j < red.values.size(); ++j) CHECK(reduced_type(red.values(j), red.vectors.col(j), na) == 1);
}
