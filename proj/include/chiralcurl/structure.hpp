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

#include <string>
#include <utility>
#include <vector>

namespace chiralcurl {

struct InertiaSignature {
    int p_plus = 0, p_minus = 0, p_zero = 0;
    double tol = 0; // absolute threshold actually used

    int dim() const { return p_plus + p_minus + p_zero; }
    bool operator==(const InertiaSignature& o) const {
        return p_plus == o.p_plus && p_minus == o.p_minus && p_zero == o.p_zero;
    }
};

/// Inertia with the zero class |w| <= rtol * max|w|.
InertiaSignature inertia(const CMat& H, double rtol = 1e-10);
InertiaSignature inertia_of_values(const RVec& w, double abs_tol);

/// L_gamma: 6n x 2n, columns span null(A_gamma).
CMat null_basis(const Problem& p, double gamma);

/// N(B) = [0; I_3 (x) I_sigma^(i)]: 6n x 3|D_i|.
CMat null_b_basis(const Problem& p);

/// Positions of the D_i rows of I_3 (x) I_sigma^(i) in a 3n vector.
std::vector<int> inside_rows3(const Problem& p);

struct UMatrices {
    CMat U0, U1, U2;
    int rank_U2 = 0;
    double norm_U2 = 0;
};

UMatrices u_matrices(const Problem& p);

struct RegularityResult {
    bool is_regular = true;
    int dim_intersection = 0;
    double min_sine = 1; // smallest principal-angle sine between range(L) and null(B)
};

/// Decided at gamma* by principal angles between range(L_gamma*) and null(B), threshold 1e-8.
RegularityResult regularity_test(const Problem& p);

/// -gamma* (I_3 (x) I_sigma)^H [C + C^H] (I_3 (x) I_sigma).
CMat jordan_matrix(const Problem& p);

struct JordanReport {
    bool conclusive = false;
    bool has_defective_infinity = false;
    int nullity = 0;
    std::vector<int> interior_nodes;  // 0-based offsets in the interior of D_i
    std::vector<CVec> witnesses;      // [0; M e_j] for the listed nodes
    double max_b_residual = 0;        // max ||B v|| / ||v||
    double max_range_residual = 0;    // max ||(A v) restricted to null(B) rows|| / (||A|| ||v||)
};

/// The regularity result decides conclusiveness; pass nullptr to compute it here.
JordanReport jordan_block_test(const Problem& p, const RegularityResult* reg = nullptr, int max_witnesses = 8);

/// [0; M e_j] for a 0-based node offset j.
CVec jordan_witness(const Problem& p, int offset);

struct InfiniteCensus {
    int count_infinite = 0;
    int count_defective = 0;
    int bound = 0;            // 6 |D_i|
    int expected = 0;         // 3 |D_i| + count_defective
    int positive_type_finite = 0;
    bool within_bound = true;
};

/// spectrum must come from a solve at gamma* with eigenvectors.
InfiniteCensus infinite_eigen_census(const Problem& p, const PencilAssembly& pa, const PencilSpectrum& s,
                                     const JordanReport& jr);

struct CongruenceReport {
    InertiaSignature direct;
    InertiaSignature block;
    bool match = false;
};

CongruenceReport small_alpha_congruence(const Problem& p, double gamma, double alpha, const UMatrices& u);

struct SegmentWitness {
    bool found = false;
    int fixed_a = 0, fixed_b = 0; // the two fixed 1-based coordinates of the line
};

struct AppendixReport {
    std::array<SegmentWitness, 3> segments;
    bool segments_found = false;
    /// Full-column-rank flags keyed n123, n12, n23, n13, n1, n2, n3, U1; empty index sets count as full.
    std::vector<std::pair<std::string, bool>> u_rank_flags;
    std::vector<std::pair<std::string, int>> set_sizes;
    bool union_full_rank = true;
    bool regularity_guaranteed = false;
};

AppendixReport appendix_condition(const Problem& p);

/// sign(x^H B x) for unit x, 0 when |x^H B x| <= tol.
int sign_characteristic(const CVec& x, const RVec& B_diag, double tol = 1e-8);
int sign_characteristic(const CVec& x, const CMat& B, double tol = 1e-8);

} // namespace chiralcurl
