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

#include "chiralcurl/common.hpp"

#include <vector>

namespace chiralcurl {

/// Raw lattice parameters as supplied by a caller or a config file.
struct LatticeParams {
    std::array<Vec3, 3> a{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::array<int, 3> n{4, 4, 4};
    Vec3 k{0.1, 0.2, 0.3};
    int m2 = 0, m11 = 0, m12 = 0, m13 = 0;
    int rho2 = 0, rho11 = 0, rho12 = 0, rho13 = 0;
};

/// Validated Bravais lattice with grid and Bloch data.
class LatticeSpec {
public:
    explicit LatticeSpec(const LatticeParams& p);

    /// Builds a lattice whose orthogonalized vectors are the given mutually
    /// orthogonal ahat, recovering a1, a2, a3 from the shift parameters.
    static LatticeSpec from_orthogonal(const std::array<Vec3, 3>& ahat, const LatticeParams& shifts);

    const LatticeParams& params() const { return p_; }
    int n(int l) const { return p_.n[l]; }
    int n1() const { return p_.n[0]; }
    int n2() const { return p_.n[1]; }
    int n3() const { return p_.n[2]; }
    int size() const { return p_.n[0] * p_.n[1] * p_.n[2]; }
    const Vec3& a(int l) const { return p_.a[l]; }
    const Vec3& ahat(int l) const { return ahat_[l]; }
    const Vec3& k() const { return p_.k; }
    double delta(int l) const { return delta_[l]; }
    /// 2 pi k . a_l
    double theta(int l) const { return 2 * kPi * dot3(p_.k, p_.a[l]); }
    /// k . ahat_l
    double kappa_hat(int l) const { return dot3(p_.k, ahat_[l]); }

    int m1() const { return p_.m11; }
    int m2() const { return p_.m2; }
    int rho1() const { return p_.rho11; }
    int rho2() const { return p_.rho2; }
    int mhat1() const { return p_.m12; }
    int rhohat1() const { return p_.rho12; }
    bool k_is_zero() const { return p_.k[0] == 0 && p_.k[1] == 0 && p_.k[2] == 0; }

private:
    LatticeParams p_;
    std::array<Vec3, 3> ahat_{};
    Vec3 delta_{};
};

/// 1-based, wrap-reducing linear index <i1,i2,i3> in [1, n].
int linear_index(int i1, int i2, int i3, const std::array<int, 3>& dims);

/// 0-based storage offset of node <i1,i2,i3> (1-based, wrapped).
inline int offset_of(int i1, int i2, int i3, const std::array<int, 3>& dims) {
    return linear_index(i1, i2, i3, dims) - 1;
}

/// 1-based node coordinates of a 0-based offset.
std::array<int, 3> node_of(int offset, const std::array<int, 3>& dims);

struct MaterialMask {
    std::vector<char> inside; // indexed by 0-based offset
    double eps_i = 13.0;
    double eps_o = 1.0;

    MaterialMask() = default;
    MaterialMask(std::vector<char> in, double ei, double eo);

    int size() const { return static_cast<int>(inside.size()); }
    int count_inside() const;
    std::vector<int> inside_offsets() const;
    std::vector<int> outside_offsets() const;
    double gamma_star() const;
    /// Length-3n 0/1 diagonal of I_3 (x) I^(i).
    RVec inside_diag3() const;
};

struct Sphere {
    Vec3 center{0.5, 0.5, 0.5}; // fractional coordinates
    double radius = 0.25;       // physical length
};

/// Spheroid with its axis running between two fractional endpoints.
struct Spheroid {
    Vec3 p{0, 0, 0};
    Vec3 q{0.5, 0.5, 0};
    double radius = 0.1; // transverse semi-axis
};

struct Geometry {
    std::vector<Sphere> spheres;
    std::vector<Spheroid> spheroids;
};

/// Physical position of node <i1,i2,i3>.
Vec3 node_position(const LatticeSpec& spec, int i1, int i2, int i3);

MaterialMask build_mask(const Geometry& g, const LatticeSpec& spec, double eps_i, double eps_o);

/// Mask from explicit 0-based offsets.
MaterialMask mask_from_offsets(const LatticeSpec& spec, const std::vector<int>& offsets, double eps_i,
                               double eps_o);

/// Node plus its six axis neighbours on the index grid.
MaterialMask plus_mask(const LatticeSpec& spec, int i1, int i2, int i3, double eps_i, double eps_o);

class CurlBlocks;

/// Node itself together with its lattice neighbours read off the curl pattern.
std::vector<int> neighbor_set(int i1, int i2, int i3, const CurlBlocks& curl);

struct BoundarySplit {
    std::vector<int> boundary;
    std::vector<int> interior;
};

BoundarySplit classify_boundary(const MaterialMask& mask, const CurlBlocks& curl);

} // namespace chiralcurl
