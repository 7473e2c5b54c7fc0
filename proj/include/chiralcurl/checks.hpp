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

struct DiagonalizationCheck {
    double residual = 0; // max_l ||T^H C_l T - Lambda_l||_F
    double scale = 0;    // max_l ||C_l||_F
    bool pass = false;
};

DiagonalizationCheck check_diagonalization(const Problem& p, double rtol = 1e-12);

struct SvdCheck {
    double factor_residual = 0; // ||C - P_r Sigma Q_r^H||_F / ||C||_F
    int rank = 0;
    double unitarity = 0;       // ||[Q_r Q_0]^H [Q_r Q_0] - I||_F
    bool pass = false;
};

SvdCheck check_svd(const Problem& p);

struct CensusCheck {
    double gamma = 0;
    int zero = 0, positive = 0, negative = 0, nonreal = 0;
    double tol = 0;
    bool pass = false;
};

/// Classifies the dense pencil spectrum below gamma* with |omega| <= rtol ||A||_2 counted as zero.
CensusCheck check_census(const Problem& p, double gamma, double rtol = 1e-9);

struct EquivalenceCheck {
    double gamma = 0;
    int full_nonzero = 0, reduced = 0;
    double distance = 0; // optimal-matching max distance, relative to the spectral radius
    bool pass = false;
};

EquivalenceCheck check_nfgep_equivalence(const Problem& p, double gamma, double rtol = 1e-8);

/// Largest pair distance in the minimum-sum one-to-one matching between two spectra of equal size.
double matched_distance(const CVec& a, const CVec& b);

} // namespace chiralcurl
