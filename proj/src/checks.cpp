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

#include "chiralcurl/checks.hpp"

#include "chiralcurl/continuation.hpp"
#include "chiralcurl/dense.hpp"

#include <cmath>
#include <limits>

namespace chiralcurl {

DiagonalizationCheck check_diagonalization(const Problem& p, double rtol) {
    const auto& sb = p.basis();
    const auto& curl = p.curl();
    const int n = p.n();
    const CMat T = sb.apply_T(CMat(CMat::Identity(n, n)));
    DiagonalizationCheck c;
    for (int l = 0; l < 3; ++l) {
        const CMat Cl(curl.Cl[l]);
        CMat D = sb.apply_T_adjoint(CMat(Cl * T));
        D.diagonal() -= sb.lambda(l);
        c.residual = std::max(c.residual, D.norm());
        c.scale = std::max(c.scale, Cl.norm());
    }
    c.pass = c.residual <= rtol * c.scale;
    return c;
}

SvdCheck check_svd(const Problem& p) {
    const auto& sb = p.basis();
    const int n = p.n();
    const CMat C = p.curl().dense_C();
    const CMat Pr = sb.P_r(), Qr = sb.Q_r();
    const RVec sig = sb.svd().sigma();
    SvdCheck c;
    c.factor_residual = (C - Pr * sig.cast<cd>().asDiagonal() * Qr.adjoint()).norm() / C.norm();
    c.rank = numerical_rank(C, 1e-10);
    CMat Q(3 * n, 3 * n);
    Q << Qr, sb.Q_0();
    c.unitarity = (Q.adjoint() * Q - CMat::Identity(3 * n, 3 * n)).norm();
    c.pass = c.factor_residual <= 1e-10 && c.rank == 2 * n && c.unitarity <= 1e-12;
    return c;
}

CensusCheck check_census(const Problem& p, double gamma, double rtol) {
    if (p.mask().count_inside() > 0 && !(gamma < p.gamma_star()))
        fail(Status::invalid_argument, "census check requires gamma < gamma*");
    const PencilAssembly pa = assemble_pencil(p, gamma);
    const PencilSpectrum s = solve_dense_pencil(pa, false);
    CensusCheck c;
    c.gamma = gamma;
    c.tol = rtol * singular_values(pa.A)(0);
    for (int j = 0; j < s.values.size(); ++j) {
        const cd w = s.values(j);
        if (std::abs(w) <= c.tol) ++c.zero;
        else if (std::abs(w.imag()) > c.tol) ++c.nonreal;
        else if (w.real() > 0) ++c.positive;
        else ++c.negative;
    }
    const int n = p.n();
    c.pass = c.zero == 2 * n && c.positive == 2 * n && c.negative == 2 * n && c.nonreal == 0;
    return c;
}

double matched_distance(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const int m = static_cast<int>(a.size());
    RMat cost(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cost(i, j) = std::abs(a(i) - b(j));
    const auto as = assign_min_cost(cost);
    double d = 0;
    for (int i = 0; i < m; ++i) d = std::max(d, cost(i, as[i]));
    return d;
}

EquivalenceCheck check_nfgep_equivalence(const Problem& p, double gamma, double rtol) {
    EquivalenceCheck c;
    c.gamma = gamma;
    const PencilSpectrum full = solve_dense_pencil(assemble_pencil(p, gamma), false);
    const double wmax = full.values.cwiseAbs().maxCoeff();
    std::vector<cd> nz;
    for (int j = 0; j < full.values.size(); ++j)
        if (std::abs(full.values(j)) > rtol * wmax) nz.push_back(full.values(j));
    const NfgepSpectrum red = solve_nfgep(assemble_nfgep(p, gamma), false);
    c.full_nonzero = static_cast<int>(nz.size());
    c.reduced = static_cast<int>(red.values.size());
    const CVec a = Eigen::Map<const CVec>(nz.data(), static_cast<Eigen::Index>(nz.size()));
    c.distance = matched_distance(a, red.values) / wmax;
    c.pass = c.full_nonzero == c.reduced && c.distance <= rtol;
    return c;
}

} // namespace chiralcurl
