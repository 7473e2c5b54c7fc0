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
#include "chiralcurl/spectral.hpp"

#include <limits>
#include <memory>
#include <vector>

namespace chiralcurl {

/// Lattice, material and the derived operators shared by all gamma-dependent work.
class Problem {
public:
    Problem(LatticeSpec spec, MaterialMask mask, Vec3 tau = {1, 2, 3});

    const LatticeSpec& spec() const { return spec_; }
    const MaterialMask& mask() const { return mask_; }
    const CurlBlocks& curl() const { return *curl_; }
    const SpectralBasis& basis() const { return *basis_; }
    int n() const { return spec_.size(); }
    double gamma_star() const { return mask_.gamma_star(); }
    double eps_i() const { return mask_.eps_i; }
    double eps_o() const { return mask_.eps_o; }

    /// Diagonal of I_3 (x) I^(i).
    const RVec& inside3() const { return inside3_; }
    /// Diagonal of Phi(gamma) = I_3 (x) [eps_o I^(o) + (eps_i - gamma^2) I^(i)].
    RVec phi(double gamma) const;

    CVec apply_C(const CVec& e) const { return curl_->C * e; }
    CVec apply_CH(const CVec& h) const { return curl_->C.adjoint() * h; }

private:
    LatticeSpec spec_;
    MaterialMask mask_;
    std::shared_ptr<const CurlBlocks> curl_;
    std::shared_ptr<const SpectralBasis> basis_;
    RVec inside3_;
};

/// Dense Hermitian pair (A_gamma, B_gamma); B is diagonal and stored as a vector.
struct PencilAssembly {
    double gamma = 0;
    double gamma_star = 0;
    CMat A;
    RVec B;

    int dim() const { return static_cast<int>(B.size()); }
    CMat dense_B() const { return B.cast<cd>().asDiagonal(); }
};

PencilAssembly assemble_pencil(const Problem& p, double gamma);

struct RayleighScalars {
    double a_i = 0, a_o = 0, b = 0, c = 0;
    double delta = 0;
    cd omega_plus, omega_minus;
    /// Quadratic coefficient vanished; omega_plus holds c/(gamma b) when defined.
    bool linear_fallback = false;
    bool undefined = false;
};

RayleighScalars rayleigh(const Problem& p, double gamma, const CVec& e);

/// ||Q_gamma(omega) e|| / ||e||.
double qep_residual(const Problem& p, double gamma, cd omega, const CVec& e);

enum class Conversion { maxwell_to_pencil, pencil_to_maxwell, e_to_h };

/// maxwell vectors are [e; h], pencil vectors [h - i gamma I_i e; e]; e_to_h maps e to h.
CVec convert_eigenvector(const Problem& p, double gamma, Conversion dir, cd omega, const CVec& v);

/// Relative residual of the discrete Maxwell system for [e; h].
double maxwell_residual(const Problem& p, double gamma, cd omega, const CVec& eh);

struct PencilSpectrum {
    CVec values; // infinite eigenvalues are stored as +inf
    std::vector<char> infinite;
    std::vector<char> trivial; // zero eigenvalues whose vectors lie in range(L_gamma)
    CMat vectors;              // unit-norm columns when requested
    int count_infinite = 0;
};

inline constexpr int kDefaultDimensionCap = 4000;

/// Dense reference solve. Uses QZ when B is singular, otherwise B^{-1}A.
PencilSpectrum solve_dense_pencil(const PencilAssembly& pa, bool want_vectors, int cap = kDefaultDimensionCap);

/// Marks zero eigenvalues whose eigenvectors lie in range(L) to rtol.
void label_trivial_zeros(PencilSpectrum& s, const CMat& L, double zero_tol, double rtol = 1e-8);

} // namespace chiralcurl
