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

#include "chiralcurl/dense.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

namespace chiralcurl {

namespace {

lapack_complex_double* lc(cd* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check(lapack_int info, const char* what) {
    if (info != 0) fail(Status::internal_error, std::string(what) + " failed with info " + std::to_string(info));
}

} // namespace

EigResult eig(const CMat& M, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(M.rows());
    CMat a = M;
    EigResult r;
    r.values.resize(n);
    if (want_vectors) r.vectors.resize(n, n);
    cd dummy;
    check(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, lc(a.data()), n, lc(r.values.data()),
                        lc(&dummy), 1, want_vectors ? lc(r.vectors.data()) : lc(&dummy), want_vectors ? n : 1),
          "zgeev");
    return r;
}

GenEigResult eig_generalized(const CMat& A, const CMat& B, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMat a = A, b = B;
    GenEigResult r;
    r.alpha.resize(n);
    r.beta.resize(n);
    if (want_vectors) r.vectors.resize(n, n);
    cd dummy;
    check(LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, lc(a.data()), n, lc(b.data()), n,
                        lc(r.alpha.data()), lc(r.beta.data()), lc(&dummy), 1,
                        want_vectors ? lc(r.vectors.data()) : lc(&dummy), want_vectors ? n : 1),
          "zggev");
    return r;
}

RVec eigvalsh(const CMat& H) {
    const lapack_int n = static_cast<lapack_int>(H.rows());
    CMat a = H;
    RVec w(n);
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, lc(a.data()), n, w.data()), "zheevd");
    return w;
}

void eigh(const CMat& H, RVec& w, CMat& V) {
    const lapack_int n = static_cast<lapack_int>(H.rows());
    V = H;
    w.resize(n);
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lc(V.data()), n, w.data()), "zheevd");
}

CMat orth(const CMat& X) {
    const lapack_int m = static_cast<lapack_int>(X.rows()), k = static_cast<lapack_int>(X.cols());
    if (k == 0) return CMat(m, 0);
    CMat q = X;
    CVec tau(k);
    check(LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, k, lc(q.data()), m, lc(tau.data())), "zgeqrf");
    check(LAPACKE_zungqr(LAPACK_COL_MAJOR, m, k, k, lc(q.data()), m, lc(tau.data())), "zungqr");
    return q;
}

RVec singular_values(const CMat& X) {
    if (X.size() == 0) return RVec(0);
    return Eigen::BDCSVD<CMat>(X).singularValues();
}

int numerical_rank(const CMat& X, double rtol) {
    const RVec s = singular_values(X);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<int>((s.array() > rtol * s(0)).count());
}

} // namespace chiralcurl
