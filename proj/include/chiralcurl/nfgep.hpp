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

#include "chiralcurl/pencil.hpp"

namespace chiralcurl {

/// Null-space-free pair (A_r, B_r) of size 4n; B_r = i [0, S^{-1}; -S^{-1}, 0].
struct NfgepAssembly {
    double gamma = 0;
    CMat A_r;
    RVec sigma; // diagonal of Sigma, length 2n
    RVec phi;   // diagonal of Phi(gamma), length 3n

    int dim() const { return static_cast<int>(A_r.rows()); }
    CMat dense_B() const;
    /// y^H B_r y.
    double b_form(const CVec& y) const;
};

NfgepAssembly assemble_nfgep(const Problem& p, double gamma);

struct NfgepSpectrum {
    CVec values;
    CMat vectors; // unit-norm columns when requested
};

NfgepSpectrum solve_nfgep(const NfgepAssembly& na, bool want_vectors, int cap = kDefaultDimensionCap);

/// z_r = diag(P_r, Q_r) y_r.
CVec lift_reduced(const Problem& p, const CVec& y);

/// [h; e] recovered from an NFGEP vector.
CVec recover_fields(const Problem& p, double gamma, const CVec& y);

/// The 2 x 2 kernel W(gamma) of the derivative indicator.
Eigen::Matrix2cd derivative_kernel(double eps_i, double gamma);

/// d(gamma) for y normalized to y^H A_r y = 1 (the normalization is applied here).
double derivative_indicator(const Problem& p, const NfgepAssembly& na, const CVec& y);

/// Sign characteristic of a simple real NFGEP eigenpair in the convention of the
/// full pencil: sign(omega * y^H B_r y) for unit y, 0 when |y^H B_r y| <= tol.
int reduced_type(cd omega, const CVec& y, const NfgepAssembly& na, double tol = 1e-8);

} // namespace chiralcurl
