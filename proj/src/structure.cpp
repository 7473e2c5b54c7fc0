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

#include "chiralcurl/structure.hpp"

#include "chiralcurl/dense.hpp"

#include <algorithm>
#include <cmath>

namespace chiralcurl {

InertiaSignature inertia_of_values(const RVec& w, double abs_tol) {
    InertiaSignature s;
    s.tol = abs_tol;
    for (int j = 0; j < w.size(); ++j) {
        if (w(j) > abs_tol) ++s.p_plus;
        else if (w(j) < -abs_tol) ++s.p_minus;
        else ++s.p_zero;
    }
    return s;
}

InertiaSignature inertia(const CMat& H, double rtol) {
    if (H.rows() != H.cols()) fail(Status::invalid_argument, "inertia: matrix must be square");
    if (H.size() == 0) return {};
    const double nh = H.norm();
    if ((H - H.adjoint()).norm() > 1e-12 * std::max(nh, 1e-300))
        fail(Status::invalid_argument, "inertia: matrix is not Hermitian");
    const RVec w = eigvalsh(H);
    return inertia_of_values(w, rtol * w.cwiseAbs().maxCoeff());
}

CMat null_basis(const Problem& p, double gamma) {
    const auto& sb = p.basis();
    const int n = p.n();
    const CMat Q0 = sb.Q_0(), P0 = sb.P_0();
    CMat L = CMat::Zero(6 * n, 2 * n);
    L.topLeftCorner(3 * n, n) = (-kI * gamma) * (p.inside3().cast<cd>().asDiagonal() * Q0);
    L.topRightCorner(3 * n, n) = P0;
    L.bottomLeftCorner(3 * n, n) = Q0;
    return L;
}

std::vector<int> inside_rows3(const Problem& p) {
    std::vector<int> rows;
    const int n = p.n();
    const auto in = p.mask().inside_offsets();
    for (int l = 0; l < 3; ++l)
        for (int j : in) rows.push_back(l * n + j);
    return rows;
}

CMat null_b_basis(const Problem& p) {
    const auto rows = inside_rows3(p);
    const int n = p.n();
    CMat N = CMat::Zero(6 * n, static_cast<Eigen::Index>(rows.size()));
    for (size_t c = 0; c < rows.size(); ++c) N(3 * n + rows[c], static_cast<Eigen::Index>(c)) = 1.0;
    return N;
}

UMatrices u_matrices(const Problem& p) {
    const auto& sb = p.basis();
    const CMat Q0 = sb.Q_0();
    const RVec& ii = p.inside3();
    const CMat IiQ0 = ii.cast<cd>().asDiagonal() * Q0;
    UMatrices u;
    u.U0 = Q0 - IiQ0;
    u.U1 = sb.P_r().adjoint() * IiQ0;
    u.U2 = sb.P_0().adjoint() * IiQ0;
    const RVec sv = singular_values(u.U2);
    u.norm_U2 = sv.size() ? sv(0) : 0.0;
    u.rank_U2 = u.norm_U2 > 0 ? static_cast<int>((sv.array() > 1e-10 * u.norm_U2).count()) : 0;
    return u;
}

RegularityResult regularity_test(const Problem& p) {
    RegularityResult r;
    if (p.mask().count_inside() == 0) return r;
    const CMat QL = orth(null_basis(p, p.gamma_star()));
    const auto rows = inside_rows3(p);
    const int n = p.n();
    // columns of (I - QL QL^H) N(B)
    CMat R(6 * n, static_cast<Eigen::Index>(rows.size()));
    for (size_t c = 0; c < rows.size(); ++c) {
        const int i = 3 * n + rows[c];
        R.col(static_cast<Eigen::Index>(c)) = -QL * QL.row(i).adjoint();
        R(i, static_cast<Eigen::Index>(c)) += 1.0;
    }
    const RVec sv = singular_values(R);
    r.min_sine = sv.size() ? sv.minCoeff() : 1.0;
    r.dim_intersection = static_cast<int>((sv.array() < 1e-8).count());
    r.is_regular = r.dim_intersection == 0;
    return r;
}

CMat jordan_matrix(const Problem& p) {
    const auto rows = inside_rows3(p);
    const CMat C = p.curl().dense_C();
    const CMat S = C + C.adjoint();
    const int k = static_cast<int>(rows.size());
    CMat J(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) J(a, b) = -p.gamma_star() * S(rows[a], rows[b]);
    return J;
}

CVec jordan_witness(const Problem& p, int offset) {
    const int n = p.n();
    if (offset < 0 || offset >= n) fail(Status::invalid_argument, "witness node out of range");
    const SpMat& M = p.curl().skew.stacked;
    CVec v = CVec::Zero(6 * n);
    for (int r = 0; r < 3 * n; ++r) {
        for (SpMat::InnerIterator it(M, r); it; ++it)
            if (it.col() == offset) v(3 * n + r) = it.value();
    }
    return v;
}

JordanReport jordan_block_test(const Problem& p, const RegularityResult* reg, int max_witnesses) {
    JordanReport jr;
    if (p.mask().count_inside() == 0) {
        jr.conclusive = true;
        return jr;
    }
    RegularityResult local;
    if (!reg) {
        local = regularity_test(p);
        reg = &local;
    }
    jr.conclusive = reg->is_regular;
    const CMat J = jordan_matrix(p);
    const RVec w = eigvalsh(J);
    const double scale = std::max(w.cwiseAbs().maxCoeff(), p.gamma_star() / p.spec().delta(0));
    jr.nullity = static_cast<int>((w.array().abs() <= 1e-10 * scale).count());
    jr.has_defective_infinity = jr.conclusive && jr.nullity > 0;

    const auto split = classify_boundary(p.mask(), p.curl());
    jr.interior_nodes = split.interior;
    const PencilAssembly pa = assemble_pencil(p, p.gamma_star());
    const double an = singular_values(pa.A)(0);
    const int n = p.n();
    const RVec ii = p.inside3();
    for (int j : split.interior) {
        if (static_cast<int>(jr.witnesses.size()) >= max_witnesses) break;
        const CVec v = jordan_witness(p, j);
        const double nv = v.norm();
        const CVec Bv = pa.B.cast<cd>().cwiseProduct(v);
        const CVec Av = pa.A * v;
        const CVec tail = ii.cast<cd>().cwiseProduct(Av.tail(3 * n));
        jr.max_b_residual = std::max(jr.max_b_residual, Bv.norm() / nv);
        jr.max_range_residual = std::max(jr.max_range_residual, tail.norm() / (an * nv));
        jr.witnesses.push_back(v);
    }
    return jr;
}

InfiniteCensus infinite_eigen_census(const Problem& p, const PencilAssembly& pa, const PencilSpectrum& s,
                                     const JordanReport& jr) {
    InfiniteCensus c;
    const int in = p.mask().count_inside();
    c.count_infinite = s.count_infinite;
    c.count_defective = jr.conclusive ? jr.nullity : 0;
    c.bound = 6 * in;
    c.expected = 3 * in + c.count_defective;
    c.within_bound = c.count_infinite <= c.bound;
    if (s.vectors.size() == 0) return c;
    const int N = static_cast<int>(s.values.size());
    double scale = 0;
    for (int j = 0; j < N; ++j)
        if (!s.infinite[j]) scale = std::max(scale, std::abs(s.values(j)));
    const double sep = 1e-8 * std::max(scale, 1.0);
    for (int j = 0; j < N; ++j) {
        if (s.infinite[j]) continue;
        const cd w = s.values(j);
        if (std::abs(w.imag()) > sep || std::abs(w) <= sep) continue;
        bool simple = true;
        for (int k = 0; k < N && simple; ++k)
            if (k != j && !s.infinite[k] && std::abs(s.values(k) - w) <= sep) simple = false;
        if (simple && sign_characteristic(s.vectors.col(j), pa.B) == 1) ++c.positive_type_finite;
    }
    return c;
}

CongruenceReport small_alpha_congruence(const Problem& p, double gamma, double alpha, const UMatrices& u) {
    if (alpha == 0.0) fail(Status::invalid_argument, "small-alpha congruence requires alpha != 0");
    if (p.mask().count_inside() > 0 && std::abs(gamma - p.gamma_star()) <= 1e-14 * p.gamma_star())
        fail(Status::invalid_argument, "small-alpha congruence requires gamma != gamma*");
    const int n = p.n();
    const PencilAssembly pa = assemble_pencil(p, gamma);
    CMat H = pa.A;
    H.diagonal() -= (alpha * pa.B).cast<cd>();
    CongruenceReport r;
    r.direct = inertia(H, 1e-12);

    const int sa = alpha > 0 ? 1 : -1;
    InertiaSignature b;
    // -alpha I_{3n}
    (sa > 0 ? b.p_minus : b.p_plus) += 3 * n;
    // Sigma^2 / alpha
    (sa > 0 ? b.p_plus : b.p_minus) += 2 * n;
    const double ei = p.eps_i(), eo = p.eps_o();
    const CMat W = eo * (u.U0.adjoint() * u.U0) + ei * (u.U1.adjoint() * u.U1) +
                   (ei - gamma * gamma) * (u.U2.adjoint() * u.U2);
    const InertiaSignature iw = inertia(0.5 * (W + W.adjoint()), 1e-10);
    b.p_zero += iw.p_zero;
    (sa > 0 ? b.p_minus : b.p_plus) += iw.p_plus;
    (sa > 0 ? b.p_plus : b.p_minus) += iw.p_minus;
    b.tol = iw.tol;
    r.block = b;
    r.match = r.direct == r.block;
    return r;
}

namespace {

bool line_outside(const MaterialMask& m, const std::array<int, 3>& d, int axis, int a, int b) {
    for (int i = 1; i <= d[axis]; ++i) {
        std::array<int, 3> c{};
        c[axis] = i;
        c[(axis + 1) % 3] = a;
        c[(axis + 2) % 3] = b;
        if (m.inside[offset_of(c[0], c[1], c[2], d)]) return false;
    }
    return true;
}

} // namespace

AppendixReport appendix_condition(const Problem& p) {
    AppendixReport r;
    const auto& mask = p.mask();
    const auto& sb = p.basis();
    const std::array<int, 3> d = sb.dims();
    for (int axis = 0; axis < 3; ++axis) {
        const int na = d[(axis + 1) % 3], nb = d[(axis + 2) % 3];
        for (int a = 1; a <= na && !r.segments[axis].found; ++a)
            for (int b = 1; b <= nb; ++b)
                if (line_outside(mask, d, axis, a, b)) {
                    r.segments[axis] = {true, a, b};
                    break;
                }
    }
    r.segments_found = r.segments[0].found && r.segments[1].found && r.segments[2].found;

    const int n = p.n();
    const double tol = 1e-10;
    auto eq = [&](cd x, cd y) { return std::abs(x - y) <= tol; };
    const cd one(1.0, 0.0);
    struct Family {
        const char* name;
        std::vector<int> idx;
    };
    std::vector<Family> fam = {{"n123", {}}, {"n12", {}}, {"n23", {}}, {"n13", {}},
                               {"n1", {}},   {"n2", {}},  {"n3", {}}};
    for (int j = 0; j < n; ++j) {
        const cd a1 = sb.alpha(0)(j), a2 = sb.alpha(1)(j), a3 = sb.alpha(2)(j);
        const bool u1 = eq(a1, one), u2 = eq(a2, one), u3 = eq(a3, one);
        if (u1 && u2 && u3) continue;
        if (!u1 && !u2 && !u3 && eq(a1, a2) && eq(a2, a3)) fam[0].idx.push_back(j);
        else if (u3 && !u1 && eq(a1, a2)) fam[1].idx.push_back(j);
        else if (u1 && !u2 && eq(a2, a3)) fam[2].idx.push_back(j);
        else if (u2 && !u1 && eq(a1, a3)) fam[3].idx.push_back(j);
        else if (u2 && u3) fam[4].idx.push_back(j);
        else if (u1 && u3) fam[5].idx.push_back(j);
        else if (u1 && u2) fam[6].idx.push_back(j);
    }
    const auto out = mask.outside_offsets();
    auto restricted_T = [&](const std::vector<int>& cols) {
        CMat X = CMat::Zero(n, static_cast<Eigen::Index>(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c) {
            const auto node = node_of(cols[c], d);
            X.col(static_cast<Eigen::Index>(c)) = sb.basis_vector(node[0], node[1], node[2]);
        }
        CMat R(static_cast<Eigen::Index>(out.size()), X.cols());
        for (size_t i = 0; i < out.size(); ++i) R.row(static_cast<Eigen::Index>(i)) = X.row(out[i]);
        return R;
    };
    std::vector<int> all;
    bool flags_ok = true;
    for (const auto& f : fam) {
        bool full = true;
        if (!f.idx.empty()) {
            const CMat R = restricted_T(f.idx);
            full = R.rows() >= R.cols() && numerical_rank(R, 1e-10) == R.cols();
        }
        r.u_rank_flags.emplace_back(f.name, full);
        r.set_sizes.emplace_back(f.name, static_cast<int>(f.idx.size()));
        flags_ok = flags_ok && full;
        all.insert(all.end(), f.idx.begin(), f.idx.end());
    }
    // U_1 = [V(1) (x) V(1) (x) V(1)]: full column rank iff D_o is nonempty
    const bool u1_full = !out.empty();
    r.u_rank_flags.emplace_back("U1", u1_full);
    r.set_sizes.emplace_back("U1", 1);
    if (!all.empty()) {
        const CMat R = restricted_T(all);
        r.union_full_rank = R.rows() >= R.cols() && numerical_rank(R, 1e-10) == R.cols();
    }
    if (mask.count_inside() == 0) {
        r.regularity_guaranteed = true;
        return r;
    }
    r.regularity_guaranteed = r.segments_found && flags_ok && u1_full && r.union_full_rank;
    return r;
}

int sign_characteristic(const CVec& x, const RVec& B_diag, double tol) {
    const double nx = x.squaredNorm();
    if (nx == 0) return 0;
    const double q = (B_diag.array() * x.array().abs2()).sum() / nx;
    if (std::abs(q) <= tol) return 0;
    return q > 0 ? 1 : -1;
}

int sign_characteristic(const CVec& x, const CMat& B, double tol) {
    const double nx = x.squaredNorm();
    if (nx == 0) return 0;
    const double q = x.dot(B * x).real() / nx;
    if (std::abs(q) <= tol) return 0;
    return q > 0 ? 1 : -1;
}

} // namespace chiralcurl
