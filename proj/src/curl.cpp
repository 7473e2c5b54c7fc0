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

#include "chiralcurl/curl.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <vector>

namespace chiralcurl {

namespace {

using Trip = Eigen::Triplet<cd>;

cd phase(double t) { return std::polar(1.0, t); }

SpMat from_triplets(int rows, int cols, const std::vector<Trip>& t) {
    SpMat A(rows, cols);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    return A;
}

// Column and value of the single entry in row r of shift_block(size, m, theta, rho).
std::pair<int, cd> shift_entry(int size, int m, double theta, int rho, int r) {
    const cd pref = phase(theta * rho);
    if (r < m) return {size - m + r, pref * phase(-theta)};
    return {r - m, pref};
}

} // namespace

SpMat shift_block(int size, int m, double theta, int rho) {
    if (m < 0 || m > size) fail(Status::invalid_argument, "shift block: split out of range");
    std::vector<Trip> t;
    for (int r = 0; r < size; ++r) {
        auto [c, v] = shift_entry(size, m, theta, rho, r);
        t.emplace_back(r, c, v);
    }
    return from_triplets(size, size, t);
}

ShiftBlocks assemble_shift_blocks(const LatticeSpec& spec) {
    const auto& p = spec.params();
    const int n1 = spec.n1(), n2 = spec.n2();
    const double th1 = spec.theta(0), th2 = spec.theta(1);
    ShiftBlocks s;
    s.J11 = shift_block(n1, p.m11, th1, p.rho11);
    s.J12 = shift_block(n1, p.m12, th1, p.rho12);
    s.J13 = shift_block(n1, p.m13, th1, p.rho13);
    std::vector<Trip> t;
    const cd pref = phase(th2 * p.rho2);
    for (int b = 0; b < n2; ++b) {
        const bool wrap = b < p.m2;
        const int bc = wrap ? n2 - p.m2 + b : b - p.m2;
        const SpMat& J = wrap ? s.J13 : s.J12;
        const cd f = wrap ? pref * phase(-th2) : pref;
        for (int r = 0; r < n1; ++r)
            for (SpMat::InnerIterator it(J, r); it; ++it)
                t.emplace_back(b * n1 + r, bc * n1 + int(it.col()), f * it.value());
    }
    s.J2 = from_triplets(n1 * n2, n1 * n2, t);
    return s;
}

CurlBlocks assemble_curl(const LatticeSpec& spec) {
    const auto sb = assemble_shift_blocks(spec);
    const int n1 = spec.n1(), n2 = spec.n2(), n3 = spec.n3();
    const int n = spec.size();
    const double th[3] = {spec.theta(0), spec.theta(1), spec.theta(2)};
    CurlBlocks cb;
    cb.dims = {n1, n2, n3};

    std::array<std::vector<Trip>, 3> t;
    for (int l = 0; l < 3; ++l) t[l].reserve(2 * n);
    for (int i3 = 0; i3 < n3; ++i3)
        for (int i2 = 0; i2 < n2; ++i2)
            for (int i1 = 0; i1 < n1; ++i1) {
                const int j = i1 + n1 * (i2 + n2 * i3);
                // C1: I (x) I (x) K_{n1}(e^{i th1})
                if (i1 < n1 - 1) t[0].emplace_back(j, j + 1, 1.0);
                else t[0].emplace_back(j, j - (n1 - 1), phase(th[0]));
                // C2: I (x) K_{n2}(e^{i th2} J11)
                if (i2 < n2 - 1) t[1].emplace_back(j, j + n1, 1.0);
                else
                    for (SpMat::InnerIterator it(sb.J11, i1); it; ++it)
                        t[1].emplace_back(j, int(it.col()) + n1 * n2 * i3, phase(th[1]) * it.value());
                // C3: K_{n3}(e^{i th3} J2)
                if (i3 < n3 - 1) t[2].emplace_back(j, j + n1 * n2, 1.0);
                else
                    for (SpMat::InnerIterator it(sb.J2, i1 + n1 * i2); it; ++it)
                        t[2].emplace_back(j, int(it.col()), phase(th[2]) * it.value());
            }
    for (int l = 0; l < 3; ++l) {
        const double inv = 1.0 / spec.delta(l);
        for (auto& e : t[l]) e = Trip(e.row(), e.col(), e.value() * inv);
        for (int j = 0; j < n; ++j) t[l].emplace_back(j, j, -inv);
        cb.Cl[l] = from_triplets(n, n, t[l]);
        cb.Clh[l] = SpMat(cb.Cl[l].adjoint());
        cb.Clh[l].makeCompressed();
    }

    std::vector<Trip> tc;
    auto put = [&](int br, int bc, const SpMat& A, double s) {
        for (int r = 0; r < n; ++r)
            for (SpMat::InnerIterator it(A, r); it; ++it)
                tc.emplace_back(br * n + r, bc * n + int(it.col()), s * it.value());
    };
    put(0, 1, cb.Cl[2], -1);
    put(0, 2, cb.Cl[1], 1);
    put(1, 0, cb.Cl[2], 1);
    put(1, 2, cb.Cl[0], -1);
    put(2, 0, cb.Cl[1], -1);
    put(2, 1, cb.Cl[0], 1);
    cb.C = from_triplets(3 * n, 3 * n, tc);
    cb.skew = skew_parts(cb);
    return cb;
}

SkewParts skew_parts(const CurlBlocks& b) {
    SkewParts s;
    const int n = b.n();
    std::vector<Trip> t;
    for (int l = 0; l < 3; ++l) {
        s.M[l] = SpMat(b.Cl[l] - b.Clh[l]);
        s.M[l].prune(cd(0));
        s.M[l].makeCompressed();
        for (int r = 0; r < n; ++r)
            for (SpMat::InnerIterator it(s.M[l], r); it; ++it) t.emplace_back(l * n + r, int(it.col()), it.value());
    }
    s.stacked = from_triplets(3 * n, n, t);
    return s;
}

void write_matrix_market(const SpMat& A, const std::string& path) {
    std::ofstream os(path);
    if (!os) fail(Status::invalid_argument, "cannot open " + path);
    os << "%%MatrixMarket matrix coordinate complex general\n";
    os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
    os << std::setprecision(17);
    for (int r = 0; r < A.outerSize(); ++r)
        for (SpMat::InnerIterator it(A, r); it; ++it)
            os << r + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

} // namespace chiralcurl
