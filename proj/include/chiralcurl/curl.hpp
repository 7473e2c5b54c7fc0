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

#include "chiralcurl/lattice.hpp"

#include <string>

namespace chiralcurl {

struct ShiftBlocks {
    SpMat J11, J12, J13; // n1 x n1
    SpMat J2;            // n1 n2 x n1 n2
};

struct SkewParts {
    std::array<SpMat, 3> M; // M_l = C_l - C_l^H
    SpMat stacked;          // [M1; M2; M3], 3n x n
};

class CurlBlocks {
public:
    std::array<int, 3> dims{};
    std::array<SpMat, 3> Cl;  // C1, C2, C3
    std::array<SpMat, 3> Clh; // adjoints
    SpMat C;                  // 3n x 3n block single-curl
    SkewParts skew;

    int n() const { return dims[0] * dims[1] * dims[2]; }
    CMat dense_C() const { return CMat(C); }
};

/// Phase-weighted cyclic shift with split at m and prefactor exp(i theta rho).
SpMat shift_block(int size, int m, double theta, int rho);

ShiftBlocks assemble_shift_blocks(const LatticeSpec& spec);

CurlBlocks assemble_curl(const LatticeSpec& spec);

SkewParts skew_parts(const CurlBlocks& blocks);

/// Matrix Market coordinate export (complex general).
void write_matrix_market(const SpMat& A, const std::string& path);

} // namespace chiralcurl
