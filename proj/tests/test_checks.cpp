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

#include "chiralcurl/checks.hpp"

#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

using namespace chiralcurl;

TEST_CASE("diagonalization residual is at rounding level on skewed lattices") {
    for (const LatticeSpec& s : {fx::fcc(4, 3, 3), fx::shifted(4, 5, 6, 2, 1, 3, 2, 1, 1, 1, 0)}) {
        Problem p(s, fx::empty_mask(s));
        const auto d = check_diagonalization(p);
        CHECK(d.pass);
        CHECK(d.residual <= 1e-12 * d.scale);
    }
}

TEST_CASE("svd check reports rank 2n") {
    const LatticeSpec s = fx::cubic(3, 3, 4);
    Problem p(s, fx::plus_center(s));
    const auto c = check_svd(p);
    CHECK(c.pass);
    CHECK(c.rank == 2 * s.size());
}

TEST_CASE("census below the threshold splits into three equal groups") {
    const LatticeSpec s = fx::cubic(3, 3, 3);
    Problem p(s, fx::plus_center(s));
    const auto c = check_census(p, 0.5 * p.gamma_star());
    const int n = s.size();
    CHECK(c.pass);
    CHECK(c.zero == 2 * n);
    CHECK(c.positive == 2 * n);
    CHECK(c.negative == 2 * n);
    CHECK(c.nonreal == 0);
}

TEST_CASE("reduced spectrum equals the nonzero full spectrum on both sides of the threshold") {
    const LatticeSpec s = fx::cubic(3, 3, 3);
    Problem p(s, fx::plus_center(s));
    for (double f : {0.4, 1.3}) {
        const auto e = check_nfgep_equivalence(p, f * p.gamma_star());
        CHECK(e.pass);
        CHECK(e.full_nonzero == 4 * s.size());
        CHECK(e.reduced == 4 * s.size());
    }
}

TEST_CASE("matched distance agrees with exhaustive permutation search") {
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        CVec a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a(i) = cd(g(rng), g(rng));
            b(i) = cd(g(rng), g(rng));
        }
        std::vector<int> perm(5);
        std::iota(perm.begin(), perm.end(), 0);
        double best_sum = INFINITY, best_max = 0;
        do {
            double sum = 0, worst = 0;
            for (int i = 0; i < 5; ++i) {
                sum += std::abs(a(i) - b(perm[i]));
                worst = std::max(worst, std::abs(a(i) - b(perm[i])));
            }
            if (sum < best_sum) {
                best_sum = sum;
                best_max = worst;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(matched_distance(a, b) == doctest::Approx(best_max).epsilon(1e-12));
    }
    CVec a(3);
    a << cd(1, 0), cd(2, 1), cd(-3, 0.5);
    const CVec b = a.reverse();
    CHECK(matched_distance(a, b) == doctest::Approx(0.0));
}
