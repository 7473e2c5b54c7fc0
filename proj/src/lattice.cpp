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

#include "chiralcurl/lattice.hpp"
#include "chiralcurl/curl.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chiralcurl {

namespace {

Vec3 axpy(const Vec3& x, double s, const Vec3& y) {
    return {x[0] + s * y[0], x[1] + s * y[1], x[2] + s * y[2]};
}

double norm3(const Vec3& v) { return std::sqrt(dot3(v, v)); }

int wrap(int i, int n) {
    int r = (i - 1) % n;
    if (r < 0) r += n;
    return r + 1;
}

void validate(const LatticeParams& p, const std::array<Vec3, 3>& ahat) {
    for (int l = 0; l < 3; ++l)
        if (p.n[l] < 1) fail(Status::config_error, "lattice: grid count n" + std::to_string(l + 1) + " must be >= 1");
    const int n1 = p.n[0];
    auto in01 = [](int r) { return r == 0 || r == 1; };
    auto inm12 = [](int r) { return r >= -1 && r <= 2; };
    if (!in01(p.rho2) || !in01(p.rho11)) fail(Status::config_error, "lattice: rho2 and rho11 must be 0 or 1");
    if (!inm12(p.rho12) || !inm12(p.rho13)) fail(Status::config_error, "lattice: rho12 and rho13 must lie in [-1, 2]");
    const int dr = p.rho12 - p.rho13 - p.rho11;
    if (dr != 0 && dr != 1) fail(Status::config_error, "lattice: rho12 - rho13 - rho11 must be 0 or 1");
    if (p.m2 < 0 || p.m2 > p.n[1]) fail(Status::config_error, "lattice: m2 out of [0, n2]");
    for (int m : {p.m11, p.m12, p.m13})
        if (m < 0 || m > n1) fail(Status::config_error, "lattice: m1l out of [0, n1]");
    const int dm = p.m12 - p.m13 - p.m11;
    if (dm != 0 && dm != n1) fail(Status::config_error, "lattice: m12 - m13 - m11 must be 0 or n1");
    if ((dm == 0) != (dr == 0))
        fail(Status::config_error,
             "lattice: shift constraints must pair as (m12-m13-m11, rho12-rho13-rho11) = (0,0) or (n1,1)");
    for (int l = 0; l < 3; ++l)
        if (norm3(ahat[l]) <= 0) fail(Status::config_error, "lattice: degenerate lattice vectors");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(dot3(ahat[i], ahat[j])) > 1e-10 * norm3(ahat[i]) * norm3(ahat[j]))
                fail(Status::config_error, "lattice: orthogonalized vectors ahat are not mutually orthogonal");
    for (int l = 0; l < 3; ++l) {
        const double ka = dot3(p.k, p.a[l]);
        if (ka < -2.0 / 3.0 - 1e-12 || ka > 5.0 / 6.0 + 1e-12)
            fail(Status::config_error, "lattice: k . a" + std::to_string(l + 1) + " outside [-2/3, 5/6]");
    }
}

std::array<Vec3, 3> orthogonalize(const LatticeParams& p) {
    const double n1 = p.n[0], n2 = p.n[1];
    const double c21 = p.rho11 - p.m11 / n1;
    const double c32 = p.rho2 - p.m2 / n2;
    const double c31 = p.rho12 - p.m12 / n1 - p.rho2 * c21;
    std::array<Vec3, 3> h;
    h[0] = p.a[0];
    h[1] = axpy(p.a[1], c21, h[0]);
    h[2] = axpy(axpy(p.a[2], c32, h[1]), c31, h[0]);
    return h;
}

} // namespace

LatticeSpec::LatticeSpec(const LatticeParams& p) : p_(p) {
    for (int l = 0; l < 3; ++l)
        if (p.n[l] < 1) fail(Status::config_error, "lattice: empty grid");
    ahat_ = orthogonalize(p_);
    validate(p_, ahat_);
    for (int l = 0; l < 3; ++l) delta_[l] = norm3(ahat_[l]) / p_.n[l];
}

LatticeSpec LatticeSpec::from_orthogonal(const std::array<Vec3, 3>& ahat, const LatticeParams& shifts) {
    LatticeParams p = shifts;
    const double n1 = p.n[0], n2 = p.n[1];
    const double c21 = p.rho11 - p.m11 / n1;
    const double c32 = p.rho2 - p.m2 / n2;
    const double c31 = p.rho12 - p.m12 / n1 - p.rho2 * c21;
    p.a[0] = ahat[0];
    p.a[1] = axpy(ahat[1], -c21, ahat[0]);
    p.a[2] = axpy(axpy(ahat[2], -c32, ahat[1]), -c31, ahat[0]);
    return LatticeSpec(p);
}

int linear_index(int i1, int i2, int i3, const std::array<int, 3>& d) {
    const int a = wrap(i1, d[0]), b = wrap(i2, d[1]), c = wrap(i3, d[2]);
    return (c - 1) * d[0] * d[1] + (b - 1) * d[0] + a;
}

std::array<int, 3> node_of(int offset, const std::array<int, 3>& d) {
    const int i1 = offset % d[0];
    const int i2 = (offset / d[0]) % d[1];
    const int i3 = offset / (d[0] * d[1]);
    return {i1 + 1, i2 + 1, i3 + 1};
}

MaterialMask::MaterialMask(std::vector<char> in, double ei, double eo)
    : inside(std::move(in)), eps_i(ei), eps_o(eo) {
    if (!(ei > 0) || !(eo > 0)) fail(Status::config_error, "material: permittivities must be positive");
}

int MaterialMask::count_inside() const {
    return static_cast<int>(std::count(inside.begin(), inside.end(), char(1)));
}

std::vector<int> MaterialMask::inside_offsets() const {
    std::vector<int> r;
    for (int j = 0; j < size(); ++j)
        if (inside[j]) r.push_back(j);
    return r;
}

std::vector<int> MaterialMask::outside_offsets() const {
    std::vector<int> r;
    for (int j = 0; j < size(); ++j)
        if (!inside[j]) r.push_back(j);
    return r;
}

double MaterialMask::gamma_star() const { return std::sqrt(eps_i); }

RVec MaterialMask::inside_diag3() const {
    const int n = size();
    RVec d(3 * n);
    for (int l = 0; l < 3; ++l)
        for (int j = 0; j < n; ++j) d[l * n + j] = inside[j] ? 1.0 : 0.0;
    return d;
}

Vec3 node_position(const LatticeSpec& spec, int i1, int i2, int i3) {
    Vec3 x{0, 0, 0};
    const int idx[3] = {i1, i2, i3};
    for (int l = 0; l < 3; ++l) x = axpy(x, double(idx[l] - 1) / spec.n(l), spec.a(l));
    return x;
}

namespace {

Vec3 frac_to_phys(const LatticeSpec& spec, const Vec3& f) {
    Vec3 x{0, 0, 0};
    for (int l = 0; l < 3; ++l) x = axpy(x, f[l], spec.a(l));
    return x;
}

constexpr double kTie = 1e-12;

bool in_sphere(const Vec3& y, double r) { return dot3(y, y) <= r * r * (1 + kTie) + 1e-14; }

bool in_spheroid(const Vec3& y, const Vec3& axis, double h, double r) {
    if (h <= 0) return in_sphere(y, r);
    const double s = dot3(y, axis) / (2 * h);
    const double perp2 = std::max(0.0, dot3(y, y) - s * s);
    if (r <= 0) return perp2 <= 1e-14 && s * s <= h * h * (1 + kTie);
    return s * s / (h * h) + perp2 / (r * r) <= 1 + kTie;
}

} // namespace

MaterialMask build_mask(const Geometry& g, const LatticeSpec& spec, double eps_i, double eps_o) {
    for (const auto& s : g.spheres)
        if (s.radius < 0) fail(Status::config_error, "geometry: sphere radius must be nonnegative");
    for (const auto& s : g.spheroids)
        if (s.radius < 0) fail(Status::config_error, "geometry: spheroid radius must be nonnegative");
    const int n = spec.size();
    std::vector<char> in(n, 0);
    const std::array<int, 3> dims{spec.n1(), spec.n2(), spec.n3()};
    for (int j = 0; j < n; ++j) {
        const auto node = node_of(j, dims);
        const Vec3 x = node_position(spec, node[0], node[1], node[2]);
        bool hit = false;
        for (int t1 = -1; t1 <= 1 && !hit; ++t1)
            for (int t2 = -1; t2 <= 1 && !hit; ++t2)
                for (int t3 = -1; t3 <= 1 && !hit; ++t3) {
                    const Vec3 xt = frac_to_phys(spec, {double(t1), double(t2), double(t3)});
                    const Vec3 y0 = axpy(x, 1.0, xt);
                    for (const auto& s : g.spheres) {
                        const Vec3 c = frac_to_phys(spec, s.center);
                        if (in_sphere(axpy(y0, -1.0, c), s.radius)) { hit = true; break; }
                    }
                    if (hit) break;
                    for (const auto& s : g.spheroids) {
                        const Vec3 p = frac_to_phys(spec, s.p), q = frac_to_phys(spec, s.q);
                        const Vec3 c{(p[0] + q[0]) / 2, (p[1] + q[1]) / 2, (p[2] + q[2]) / 2};
                        const Vec3 axis = axpy(q, -1.0, p);
                        const double h = norm3(axis) / 2;
                        if (in_spheroid(axpy(y0, -1.0, c), axis, h, s.radius)) { hit = true; break; }
                    }
                }
        in[j] = hit ? 1 : 0;
    }
    return MaterialMask(std::move(in), eps_i, eps_o);
}

MaterialMask mask_from_offsets(const LatticeSpec& spec, const std::vector<int>& offsets, double eps_i,
                               double eps_o) {
    std::vector<char> in(spec.size(), 0);
    for (int j : offsets) {
        if (j < 0 || j >= spec.size()) fail(Status::invalid_argument, "mask: offset out of range");
        in[j] = 1;
    }
    return MaterialMask(std::move(in), eps_i, eps_o);
}

MaterialMask plus_mask(const LatticeSpec& spec, int i1, int i2, int i3, double eps_i, double eps_o) {
    const std::array<int, 3> d{spec.n1(), spec.n2(), spec.n3()};
    std::vector<int> offs;
    const int step[7][3] = {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& s : step) offs.push_back(offset_of(i1 + s[0], i2 + s[1], i3 + s[2], d));
    return mask_from_offsets(spec, offs, eps_i, eps_o);
}

std::vector<int> neighbor_set(int i1, int i2, int i3, const CurlBlocks& curl) {
    const int j = offset_of(i1, i2, i3, curl.dims);
    std::set<int> s{j};
    for (int l = 0; l < 3; ++l) {
        for (SpMat::InnerIterator it(curl.Cl[l], j); it; ++it)
            if (it.value() != cd(0)) s.insert(static_cast<int>(it.col()));
        for (SpMat::InnerIterator it(curl.Clh[l], j); it; ++it)
            if (it.value() != cd(0)) s.insert(static_cast<int>(it.col()));
    }
    return {s.begin(), s.end()};
}

BoundarySplit classify_boundary(const MaterialMask& mask, const CurlBlocks& curl) {
    BoundarySplit out;
    for (int j = 0; j < mask.size(); ++j) {
        if (!mask.inside[j]) continue;
        const auto node = node_of(j, curl.dims);
        const auto nb = neighbor_set(node[0], node[1], node[2], curl);
        const bool all_in = std::all_of(nb.begin(), nb.end(), [&](int q) { return mask.inside[q] != 0; });
        (all_in ? out.interior : out.boundary).push_back(j);
    }
    return out;
}

} // namespace chiralcurl
