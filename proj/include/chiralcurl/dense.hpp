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

namespace chiralcurl {

/// Eigenvalues (and optionally right eigenvectors) of a general square matrix.
struct EigResult {
    CVec values;
    CMat vectors; // empty unless requested
};

/// Generalized eigenvalues as (alpha, beta) pairs, lambda = alpha / beta.
struct GenEigResult {
    CVec alpha;
    CVec beta;
    CMat vectors;
};

EigResult eig(const CMat& M, bool want_vectors);
GenEigResult eig_generalized(const CMat& A, const CMat& B, bool want_vectors);

/// Ascending eigenvalues of a Hermitian matrix (lower triangle used).
RVec eigvalsh(const CMat& H);
void eigh(const CMat& H, RVec& w, CMat& V);

/// Orthonormal basis of the column space of a full-column-rank matrix.
CMat orth(const CMat& X);

/// Singular values in descending order.
RVec singular_values(const CMat& X);

/// Numerical rank with relative threshold rtol * sigma_max.
int numerical_rank(const CMat& X, double rtol = 1e-10);

} // namespace chiralcurl
