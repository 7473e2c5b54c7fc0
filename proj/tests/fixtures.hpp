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

#include "chiralcurl/curl.hpp"
#include "chiralcurl/lattice.hpp"

#include <cmath>
#include <limits>
#include <vector>
#include <random>

namespace fx {

using namespace chiralcurl;

inline LatticeSpec cubic(int n1, int n2, int n3, Vec3 k = {0.1, 0.2, 0.3}) {
    LatticeParams p;
    p.n = {n1, n2, n3};
    p.k = k;
    return LatticeSpec(p);
}

/// Face-centred cubic primitive cell: m11 = m12 = n1/2, m2 = n2/3.
inline LatticeSpec fcc(int n1, int n2, int n3, Vec3 k = {0.11, -0.07, 0.23}) {
    const double c = 1.0 / std::sqrt(2.0);
    LatticeParams p;
    p.a = {{{c, 0, 0}, {c * 0.5, c * std::sqrt(3.0) / 2, 0}, {c * 0.5, c * std::sqrt(3.0) / 6, c * std::sqrt(2.0 / 3.0)}}};
    p.n = {n1, n2, n3};
    p.k = k;
    p.m11 = n1 / 2;
    p.m12 = n1 / 2;
    p.m13 = 0;
    p.m2 = n2 / 3;
    return LatticeSpec(p);
}

/// Lattice with general shifts built from orthogonal ahat (lengths 1, 1.3, 0.8).
inline LatticeSpec shifted(int n1, int n2, int n3, int m2, int m11, int m12, int m13, int r2, int r11, int r12,
                           int r13, Vec3 k = {0.13, -0.11, 0.07}) {
    LatticeParams p;
    p.n = {n1, n2, n3};
    p.k = k;
    p.m2 = m2;
    p.m11 = m11;
    p.m12 = m12;
    p.m13 = m13;
    p.rho2 = r2;
    p.rho11 = r11;
    p.rho12 = r12;
    p.rho13 = r13;
    return LatticeSpec::from_orthogonal({{{1, 0, 0}, {0, 1.3, 0}, {0, 0, 0.8}}}, p);
}

/// Dense oracle of the curl blocks from explicit Kronecker products.
struct DenseCurl {
    CMat C1, C2, C3;
};

inline CMat jblock(int nn, int m, double th, int rho) {
    CMat J = CMat::Zero(nn, nn);
    const cd pref = std::polar(1.0, th * rho);
    for (int r = 0; r < nn; ++r) {
        if (r < m) J(r, nn - m + r) = pref * std::polar(1.0, -th);
        else J(r, r - m) = pref;
    }
    return J;
}

inline CMat kmat(int nb, const CMat& X) {
    const int b = static_cast<int>(X.rows());
    CMat M = CMat::Zero(nb * b, nb * b);
    for (int i = 0; i + 1 < nb; ++i) M.block(i * b, (i + 1) * b, b, b).setIdentity();
    M.block((nb - 1) * b, 0, b, b) += X;
    return M;
}

inline CMat kron(const CMat& A, const CMat& B) {
    CMat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

inline DenseCurl dense_curl(const LatticeSpec& s) {
    const auto& p = s.params();
    const int n1 = s.n1(), n2 = s.n2(), n3 = s.n3(), n = s.size();
    const double t1 = s.theta(0), t2 = s.theta(1), t3 = s.theta(2);
    const CMat J11 = jblock(n1, p.m11, t1, p.rho11), J12 = jblock(n1, p.m12, t1, p.rho12),
               J13 = jblock(n1, p.m13, t1, p.rho13);
    CMat J2 = CMat::Zero(n1 * n2, n1 * n2);
    const cd pref = std::polar(1.0, t2 * p.rho2);
    for (int b = 0; b < n2; ++b) {
        if (b < p.m2) J2.block(b * n1, (n2 - p.m2 + b) * n1, n1, n1) = pref * std::polar(1.0, -t2) * J13;
        else J2.block(b * n1, (b - p.m2) * n1, n1, n1) = pref * J12;
    }
    const CMat I = CMat::Identity(n, n);
    CMat one(1, 1);
    one(0, 0) = std::polar(1.0, t1);
    DenseCurl d;
    d.C1 = (-I + kron(CMat::Identity(n3 * n2, n3 * n2), kmat(n1, one))) / s.delta(0);
    d.C2 = (-I + kron(CMat::Identity(n3, n3), kmat(n2, std::polar(1.0, t2) * J11))) / s.delta(1);
    d.C3 = (-I + kmat(n3, std::polar(1.0, t3) * J2)) / s.delta(2);
    return d;
}

inline CMat block_curl(const DenseCurl& d) {
    const int n = static_cast<int>(d.C1.rows());
    CMat C = CMat::Zero(3 * n, 3 * n);
    C.block(0, n, n, n) = -d.C3;
    C.block(0, 2 * n, n, n) = d.C2;
    C.block(n, 0, n, n) = d.C3;
    C.block(n, 2 * n, n, n) = -d.C1;
    C.block(2 * n, 0, n, n) = -d.C2;
    C.block(2 * n, n, n, n) = d.C1;
    return C;
}

inline int center_offset(const LatticeSpec& s) {
    return offset_of(s.n1() / 2 + 1, s.n2() / 2 + 1, s.n3() / 2 + 1, {s.n1(), s.n2(), s.n3()});
}

/// Centre node and its six axis neighbours inside the medium.
inline MaterialMask plus_center(const LatticeSpec& s, double eps_i = 13.0, double eps_o = 1.0) {
    return plus_mask(s, s.n1() / 2 + 1, s.n2() / 2 + 1, s.n3() / 2 + 1, eps_i, eps_o);
}

inline MaterialMask empty_mask(const LatticeSpec& s, double eps_i = 13.0, double eps_o = 1.0) {
    return mask_from_offsets(s, {}, eps_i, eps_o);
}

inline int count_if_real(const CVec& w, double tol) {
    int c = 0;
    for (int j = 0; j < w.size(); ++j) c += std::abs(w(j).imag()) <= tol;
    return c;
}

/// Greedy nearest-neighbour multiset distance between two spectra of equal size.
inline double multiset_distance(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<char> used(b.size(), 0);
    double worst = 0;
    for (int i = 0; i < a.size(); ++i) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(a(i) - b(j));
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        used[best] = 1;
        worst = std::max(worst, bd);
    }
    return worst;
}

} // namespace fx
