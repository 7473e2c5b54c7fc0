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

#include "chiralcurl/continuation.hpp"

#include "chiralcurl/dense.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace chiralcurl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool at_gamma_star(const Problem& p, double gamma) {
    return p.mask().count_inside() > 0 && std::abs(gamma - p.gamma_star()) <= 1e-14 * p.gamma_star();
}

double finite_scale(const CVec& v) {
    double s = 0;
    for (int j = 0; j < v.size(); ++j)
        if (std::isfinite(v(j).real())) s = std::max(s, std::abs(v(j)));
    return s;
}

} // namespace

bool is_real_value(cd z) { return std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z.real())); }

SampleSpectrum solve_sample(const Problem& p, double gamma, bool with_types, int cap) {
    const int n = p.n();
    if (6 * n > cap)
        fail(Status::resource_cap,
             "pencil dimension " + std::to_string(6 * n) + " exceeds the dense cap " + std::to_string(cap));
    SampleSpectrum s;
    s.gamma = gamma;
    if (at_gamma_star(p, gamma)) {
        const PencilAssembly pa = assemble_pencil(p, gamma);
        PencilSpectrum sp = solve_dense_pencil(pa, true, cap);
        label_trivial_zeros(sp, null_basis(p, gamma), 1e-8 * std::max(1.0, finite_scale(sp.values)));
        const int N = static_cast<int>(sp.values.size());
        s.values = sp.values;
        s.infinite = sp.infinite;
        s.trivial = sp.trivial;
        s.types.assign(N, 0);
        if (with_types)
            for (int j = 0; j < N; ++j)
                if (!sp.infinite[j] && !sp.trivial[j] && is_real_value(sp.values(j)))
                    s.types[j] = sign_characteristic(sp.vectors.col(j), pa.B);
        s.full_pencil = true;
        return s;
    }
    const NfgepAssembly na = assemble_nfgep(p, gamma);
    const NfgepSpectrum r = solve_nfgep(na, with_types, cap);
    const int m = static_cast<int>(r.values.size());
    s.values = CVec::Zero(m + 2 * n);
    s.values.head(m) = r.values;
    s.types.assign(m + 2 * n, 0);
    s.infinite.assign(m + 2 * n, 0);
    s.trivial.assign(m + 2 * n, 0);
    for (int j = m; j < m + 2 * n; ++j) s.trivial[j] = 1;
    if (with_types)
        for (int j = 0; j < m; ++j)
            if (is_real_value(r.values(j))) s.types[j] = reduced_type(r.values(j), r.vectors.col(j), na);
    return s;
}

std::vector<int> assign_min_cost(const RMat& cost) {
    const int N = static_cast<int>(cost.rows());
    if (cost.cols() != N) fail(Status::invalid_argument, "assignment requires a square cost matrix");
    // potentials u (rows), v (columns); way[] holds the augmenting path
    std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0);
    std::vector<int> match(N + 1, 0), way(N + 1, 0);
    for (int i = 1; i <= N; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(N + 1, kInf);
        std::vector<char> used(N + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= N; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= N; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row(N, -1);
    for (int j = 1; j <= N; ++j)
        if (match[j] > 0) row[match[j] - 1] = j - 1;
    return row;
}

namespace {

struct MatchResult {
    std::vector<int> perm; // index in a -> index in b
    bool ambiguous = false;
};

MatchResult match_spectra(const SampleSpectrum& a, const SampleSpectrum& b) {
    const int N = static_cast<int>(a.values.size());
    if (static_cast<int>(b.values.size()) != N) fail(Status::internal_error, "spectrum sizes differ between samples");
    MatchResult res;
    res.perm.assign(N, -1);

    std::vector<int> ta, tb, ra, rb;
    for (int j = 0; j < N; ++j) (a.trivial[j] ? ta : ra).push_back(j);
    for (int j = 0; j < N; ++j) (b.trivial[j] ? tb : rb).push_back(j);
    if (ta.size() == tb.size()) {
        for (size_t k = 0; k < ta.size(); ++k) res.perm[ta[k]] = tb[k];
    } else {
        ra.clear();
        rb.clear();
        for (int j = 0; j < N; ++j) ra.push_back(j), rb.push_back(j);
    }

    const double scale = std::max(finite_scale(a.values), finite_scale(b.values));
    const double penalty = 10.0 * (1.0 + scale);
    const double big = 2.0 * scale + 1.0;
    auto cost = [&](int i, int j) {
        const bool ia = a.infinite[i], ib = b.infinite[j];
        if (ia && ib) return 0.0;
        if (ia) return big - std::abs(b.values(j));
        if (ib) return big - std::abs(a.values(i));
        const cd x = a.values(i), y = b.values(j);
        const double d = std::abs(x - y);
        // the quadratic term only separates assignments of equal total distance
        return d + 1e-6 * d * d / (1.0 + scale) + (is_real_value(x) != is_real_value(y) ? penalty : 0.0);
    };

    const int M = static_cast<int>(ra.size());
    RMat Cm(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) Cm(i, j) = cost(ra[i], rb[j]);

    // accept well-separated mutual nearest neighbours, assign the rest optimally
    std::vector<int> best_row(M), best_col(M);
    std::vector<double> second_row(M, kInf), second_col(M, kInf);
    for (int i = 0; i < M; ++i) {
        int bi = 0;
        double b1 = kInf, b2 = kInf;
        for (int j = 0; j < M; ++j) {
            const double c = Cm(i, j);
            if (c < b1) b2 = b1, b1 = c, bi = j;
            else if (c < b2) b2 = c;
        }
        best_row[i] = bi;
        second_row[i] = b2;
    }
    for (int j = 0; j < M; ++j) {
        int bj = 0;
        double b1 = kInf, b2 = kInf;
        for (int i = 0; i < M; ++i) {
            const double c = Cm(i, j);
            if (c < b1) b2 = b1, b1 = c, bj = i;
            else if (c < b2) b2 = c;
        }
        best_col[j] = bj;
        second_col[j] = b2;
    }
    std::vector<char> done_r(M, 0), done_c(M, 0);
    for (int i = 0; i < M; ++i) {
        const int j = best_row[i];
        if (best_col[j] != i) continue;
        if (Cm(i, j) < 0.25 * std::min(second_row[i], second_col[j])) {
            res.perm[ra[i]] = rb[j];
            done_r[i] = done_c[j] = 1;
        }
    }
    std::vector<int> rr, cc;
    for (int i = 0; i < M; ++i)
        if (!done_r[i]) rr.push_back(i);
    for (int j = 0; j < M; ++j)
        if (!done_c[j]) cc.push_back(j);
    const int K = static_cast<int>(rr.size());
    if (K > 0) {
        RMat sub(K, K);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) sub(i, j) = Cm(rr[i], cc[j]);
        const auto as = assign_min_cost(sub);
        for (int i = 0; i < K; ++i) res.perm[ra[rr[i]]] = rb[cc[as[i]]];
        // a tie is an alternative assignment of two distinct values with equal cost
        const double eps = 1e-14 * (1.0 + scale);
        auto same = [](const SampleSpectrum& s, int i, int j) {
            if (s.infinite[i] || s.infinite[j]) return s.infinite[i] && s.infinite[j];
            return std::abs(s.values(i) - s.values(j)) <= 1e-8 * (1.0 + std::abs(s.values(i)));
        };
        for (int i = 0; i < K && !res.ambiguous; ++i)
            for (int k = i + 1; k < K && !res.ambiguous; ++k) {
                const int x = rr[i], y = rr[k];
                if (same(a, ra[x], ra[y])) continue;
                const int jx = cc[as[i]], jy = cc[as[k]];
                if (same(b, rb[jx], rb[jy])) continue;
                const double cur = Cm(x, jx) + Cm(y, jy), alt = Cm(x, jy) + Cm(y, jx);
                if (std::abs(cur - alt) <= eps && cur > eps) res.ambiguous = true;
            }
    }
    return res;
}

std::vector<SampleSpectrum> solve_all(const Problem& p, const std::vector<double>& gammas, int threads, int cap) {
    std::vector<SampleSpectrum> out(gammas.size());
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= gammas.size()) return;
            try {
                out[k] = solve_sample(p, gammas[k], true, cap);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
                next = gammas.size();
            }
        }
    };
    const int t = std::max(1, std::min<int>(threads, static_cast<int>(gammas.size())));
    if (t == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < t; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    return out;
}

int conjugate_partner(const std::vector<cd>& vals, int c) {
    const cd target = std::conj(vals[c]);
    int best = -1;
    double bd = kInf;
    for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
        if (k == c || !std::isfinite(vals[k].real())) continue;
        const double d = std::abs(vals[k] - target);
        if (d < bd) bd = d, best = k;
    }
    return best;
}

EigenCurveSet link_curves(const Problem& p, const std::vector<double>& gammas,
                          const std::vector<SampleSpectrum>& spec) {
    EigenCurveSet set;
    set.gamma_star = p.gamma_star();
    set.gammas = gammas;
    const int S = static_cast<int>(gammas.size());
    const int N = static_cast<int>(spec[0].values.size());
    set.matching.assign(S, std::vector<int>(N));
    std::iota(set.matching[0].begin(), set.matching[0].end(), 0);
    for (int s = 0; s + 1 < S; ++s) {
        const MatchResult m = match_spectra(spec[s], spec[s + 1]);
        if (m.ambiguous) set.ambiguous.emplace_back(gammas[s], gammas[s + 1]);
        auto& next = set.matching[s + 1];
        for (int c = 0; c < N; ++c) next[c] = m.perm[set.matching[s][c]];

        // keep conjugate pairs paired
        std::vector<cd> prev(N), cur(N);
        for (int c = 0; c < N; ++c) {
            prev[c] = spec[s].infinite[set.matching[s][c]] ? cd(kInf, 0) : spec[s].values(set.matching[s][c]);
            cur[c] = spec[s + 1].infinite[next[c]] ? cd(kInf, 0) : spec[s + 1].values(next[c]);
        }
        std::vector<char> seen(N, 0);
        for (int c = 0; c < N; ++c) {
            if (seen[c] || !std::isfinite(prev[c].real()) || is_real_value(prev[c]) || prev[c].imag() < 0) continue;
            const int partner = conjugate_partner(prev, c);
            if (partner < 0) continue;
            seen[c] = seen[partner] = 1;
            if (!std::isfinite(cur[c].real()) || is_real_value(cur[c])) continue;
            const int holder = conjugate_partner(cur, c);
            if (holder < 0 || holder == partner) continue;
            if (std::abs(cur[holder] - std::conj(cur[c])) >= std::abs(cur[partner] - std::conj(cur[c]))) continue;
            std::swap(next[partner], next[holder]);
            std::swap(cur[partner], cur[holder]);
        }
    }
    set.curves.assign(N, std::vector<CurvePoint>(S));
    set.trivial.assign(N, 0);
    for (int c = 0; c < N; ++c) {
        bool triv = true;
        for (int s = 0; s < S; ++s) {
            const int j = set.matching[s][c];
            CurvePoint& pt = set.curves[c][s];
            pt.infinite = spec[s].infinite[j];
            pt.value = pt.infinite ? cd(kInf, 0) : spec[s].values(j);
            pt.type = spec[s].types[j];
            triv = triv && spec[s].trivial[j];
        }
        set.trivial[c] = triv;
    }
    return set;
}

} // namespace

EigenCurveSet sweep(const Problem& p, std::vector<double> grid, const SweepOptions& opt) {
    if (grid.empty()) fail(Status::invalid_argument, "sweep requires a nonempty gamma grid");
    for (size_t k = 0; k + 1 < grid.size(); ++k)
        if (grid[k + 1] < grid[k]) fail(Status::invalid_argument, "sweep grid must be increasing");
    for (double g : grid)
        if (g < 0) fail(Status::invalid_argument, "sweep grid must be nonnegative");
    std::vector<SampleSpectrum> spec = solve_all(p, grid, opt.threads, opt.cap);
    EigenCurveSet set = link_curves(p, grid, spec);
    for (int round = 0; round < opt.max_halvings; ++round) {
        std::vector<double> extra;
        for (int s = 0; s + 1 < set.num_samples(); ++s) {
            if (set.gammas[s + 1] <= set.gammas[s]) continue;
            bool shrink = false;
            for (int c = 0; c < set.num_curves() && !shrink; ++c) {
                const auto& a = set.curves[c][s];
                const auto& b = set.curves[c][s + 1];
                if (a.infinite || b.infinite || is_real_value(a.value)) continue;
                shrink = std::abs(b.value.imag()) < 0.5 * std::abs(a.value.imag());
            }
            if (shrink) extra.push_back(0.5 * (set.gammas[s] + set.gammas[s + 1]));
        }
        if (extra.empty()) break;
        std::vector<SampleSpectrum> more = solve_all(p, extra, opt.threads, opt.cap);
        for (auto& m : more) spec.push_back(std::move(m));
        std::sort(spec.begin(), spec.end(),
                  [](const SampleSpectrum& x, const SampleSpectrum& y) { return x.gamma < y.gamma; });
        std::vector<double> g(spec.size());
        for (size_t k = 0; k < spec.size(); ++k) g[k] = spec[k].gamma;
        set = link_curves(p, g, spec);
    }
    return set;
}

std::string to_string(EventKind k) {
    switch (k) {
    case EventKind::imaginary_birth: return "imaginary_birth";
    case EventKind::collision_split: return "collision_split";
    case EventKind::real_collision_merge: return "real_collision_merge";
    case EventKind::new_ground_state: return "new_ground_state";
    }
    return "unknown";
}

std::vector<BifurcationEvent> detect_events(const EigenCurveSet& set) {
    std::vector<BifurcationEvent> events;
    const int S = set.num_samples(), N = set.num_curves();
    if (S < 2) return events;
    auto nonreal = [](const CurvePoint& pt) { return !pt.infinite && !is_real_value(pt.value); };
    auto is_ambiguous = [&](double lo, double hi) {
        for (const auto& [a, b] : set.ambiguous)
            if (a == lo && b == hi) return true;
        return false;
    };
    auto values_at = [&](int s) {
        std::vector<cd> v(N);
        for (int c = 0; c < N; ++c) v[c] = set.curves[c][s].infinite ? cd(kInf, 0) : set.curves[c][s].value;
        return v;
    };
    auto ground = [&](int s) {
        int best = -1;
        double bv = kInf;
        for (int c = 0; c < N; ++c) {
            const auto& pt = set.curves[c][s];
            if (set.trivial[c] || pt.infinite || !is_real_value(pt.value)) continue;
            const double x = pt.value.real();
            if (x > 0 && x < bv) bv = x, best = c;
        }
        return best;
    };

    std::vector<char> from_split(N, 0);
    for (int s = 0; s + 1 < S; ++s) {
        const double g0 = set.gammas[s], g1 = set.gammas[s + 1];
        const bool straddle = set.gamma_star > 0 && g0 <= set.gamma_star && set.gamma_star < g1;
        const bool amb = is_ambiguous(g0, g1);
        const auto v0 = values_at(s), v1 = values_at(s + 1);
        std::vector<char> used(N, 0);
        for (int c = 0; c < N; ++c) {
            if (used[c]) continue;
            const auto& a = set.curves[c][s];
            const auto& b = set.curves[c][s + 1];
            if (nonreal(b) && !nonreal(a)) {
                int partner = conjugate_partner(v1, c);
                const bool paired = partner >= 0 && !used[partner] && !nonreal(set.curves[partner][s]);
                BifurcationEvent ev;
                const bool from_inf = a.infinite || (paired && set.curves[partner][s].infinite);
                ev.kind = (straddle || from_inf) ? EventKind::imaginary_birth : EventKind::real_collision_merge;
                ev.location = b.value.imag() >= 0 ? b.value : std::conj(b.value);
                ev.gamma_lo = ev.coarse_lo = g0;
                ev.gamma_hi = ev.coarse_hi = g1;
                ev.gamma_located = 0.5 * (g0 + g1);
                ev.curves = {c, paired ? partner : -1};
                ev.confident = paired && !amb;
                used[c] = 1;
                if (paired) used[partner] = 1;
                events.push_back(ev);
            } else if (nonreal(a) && !b.infinite && is_real_value(b.value)) {
                const int partner = conjugate_partner(v0, c);
                const bool paired = partner >= 0 && !used[partner] && !set.curves[partner][s + 1].infinite &&
                                    is_real_value(set.curves[partner][s + 1].value);
                BifurcationEvent ev;
                ev.kind = EventKind::collision_split;
                ev.location = cd(a.value.real(), 0.0);
                ev.gamma_lo = ev.coarse_lo = g0;
                ev.gamma_hi = ev.coarse_hi = g1;
                ev.gamma_located = 0.5 * (g0 + g1);
                ev.confident = paired && !amb;
                used[c] = 1;
                from_split[c] = 1;
                if (paired) {
                    used[partner] = 1;
                    from_split[partner] = 1;
                    const auto& pb = set.curves[partner][s + 1];
                    const bool c_left = b.value.real() <= pb.value.real();
                    ev.curves = {c_left ? c : partner, c_left ? partner : c};
                    ev.types_after = {set.curves[ev.curves[0]][s + 1].type, set.curves[ev.curves[1]][s + 1].type};
                    ev.has_types = true;
                } else {
                    ev.curves = {c, -1};
                }
                events.push_back(ev);
            }
        }
        const int gprev = ground(s), gnext = ground(s + 1);
        if (gnext >= 0 && gnext != gprev && from_split[gnext]) {
            BifurcationEvent ev;
            ev.kind = EventKind::new_ground_state;
            ev.location = set.curves[gnext][s + 1].value;
            ev.gamma_lo = ev.coarse_lo = g0;
            ev.gamma_hi = ev.coarse_hi = g1;
            ev.gamma_located = 0.5 * (g0 + g1);
            ev.curves = {gnext, gprev};
            ev.confident = !amb;
            events.push_back(ev);
        }
    }
    return events;
}

namespace {

int count_nonreal(const CVec& w) {
    int k = 0;
    for (int j = 0; j < w.size(); ++j)
        if (std::isfinite(w(j).real()) && !is_real_value(w(j))) ++k;
    return k;
}

int count_nonreal_near(const CVec& w, double center, double radius) {
    int k = 0;
    for (int j = 0; j < w.size(); ++j)
        if (std::isfinite(w(j).real()) && !is_real_value(w(j)) && std::abs(w(j) - center) <= radius) ++k;
    return k;
}

// |Im| of the nearest nonreal value and the gap of the two nearest real values around center
double local_radius(const CVec& lo, const CVec& hi, double center) {
    double im = 0, best = kInf;
    for (int j = 0; j < lo.size(); ++j)
        if (std::isfinite(lo(j).real()) && !is_real_value(lo(j)) && std::abs(lo(j) - center) < best)
            best = std::abs(lo(j) - center), im = std::abs(lo(j).imag());
    std::vector<double> d;
    for (int j = 0; j < hi.size(); ++j)
        if (std::isfinite(hi(j).real()) && is_real_value(hi(j))) d.push_back(std::abs(hi(j).real() - center));
    std::sort(d.begin(), d.end());
    const double gap = d.size() >= 2 ? d[1] : 0.0;
    return 1.1 * std::max({best, im, gap}) + 1e-9 * (1.0 + std::abs(center));
}

} // namespace

BifurcationEvent refine_event(const BifurcationEvent& ev, const SpectrumFn& solver, double tol) {
    BifurcationEvent out = ev;
    double lo = ev.gamma_lo, hi = ev.gamma_hi;
    if (!(hi > lo)) return out;
    const CVec wlo = solver(lo), whi = solver(hi);
    std::function<int(const CVec&)> indicator;
    if (ev.kind == EventKind::imaginary_birth) {
        indicator = count_nonreal;
    } else if (ev.kind == EventKind::collision_split || ev.kind == EventKind::real_collision_merge) {
        const double center = ev.location.real();
        const double radius = ev.kind == EventKind::collision_split ? local_radius(wlo, whi, center)
                                                                    : local_radius(whi, wlo, center);
        indicator = [center, radius](const CVec& w) { return count_nonreal_near(w, center, radius); };
    } else {
        return out;
    }
    const int before = indicator(wlo);
    if (indicator(whi) == before) {
        out.confident = false;
        return out;
    }
    for (int depth = 0; depth < 60 && hi - lo > tol; ++depth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (indicator(solver(mid)) == before) lo = mid;
        else hi = mid;
    }
    out.gamma_lo = lo;
    out.gamma_hi = hi;
    out.gamma_located = 0.5 * (lo + hi);
    out.confident = hi - lo <= tol;
    if (ev.kind == EventKind::collision_split) {
        const CVec w = solver(lo);
        double best = kInf;
        for (int j = 0; j < w.size(); ++j)
            if (std::isfinite(w(j).real()) && !is_real_value(w(j)) && std::abs(w(j) - ev.location) < best)
                best = std::abs(w(j) - ev.location), out.location = cd(w(j).real(), 0.0);
    }
    return out;
}

namespace {

// type of the smallest positive nontrivial real value
int ground_type(const SampleSpectrum& s) {
    int t = 0;
    double bv = kInf;
    for (int j = 0; j < s.values.size(); ++j) {
        if (s.trivial[j] || s.infinite[j] || !is_real_value(s.values(j))) continue;
        const double x = s.values(j).real();
        if (x > 0 && x < bv) bv = x, t = s.types[j];
    }
    return t;
}

void split_types(const Problem& p, BifurcationEvent& ev, int cap) {
    const SampleSpectrum s = solve_sample(p, ev.gamma_hi, true, cap);
    std::vector<std::pair<double, int>> near;
    for (int j = 0; j < s.values.size(); ++j)
        if (!s.trivial[j] && !s.infinite[j] && is_real_value(s.values(j))) near.emplace_back(s.values(j).real(), j);
    if (near.size() < 2) return;
    const double c = ev.location.real();
    std::partial_sort(near.begin(), near.begin() + 2, near.end(), [c](const auto& x, const auto& y) {
        return std::abs(x.first - c) < std::abs(y.first - c);
    });
    auto l = near[0], r = near[1];
    if (l.first > r.first) std::swap(l, r);
    ev.types_after = {s.types[l.second], s.types[r.second]};
    ev.has_types = true;
}

} // namespace

void refine_events(const Problem& p, std::vector<BifurcationEvent>& events, double tol, int cap) {
    SpectrumFn solver = [&p, cap](double g) { return solve_sample(p, g, false, cap).values; };
    for (size_t k = 0; k < events.size(); ++k) {
        BifurcationEvent& ev = events[k];
        bool shared = false;
        if (ev.kind == EventKind::imaginary_birth)
            for (size_t q = 0; q < k; ++q)
                if (events[q].kind == ev.kind && events[q].coarse_lo == ev.coarse_lo &&
                    events[q].coarse_hi == ev.coarse_hi) {
                    ev.gamma_lo = events[q].gamma_lo;
                    ev.gamma_hi = events[q].gamma_hi;
                    ev.gamma_located = events[q].gamma_located;
                    shared = true;
                    break;
                }
        if (shared) continue;
        if (ev.kind == EventKind::new_ground_state) {
            const BifurcationEvent* split = nullptr;
            for (size_t q = 0; q < k; ++q)
                if (events[q].kind == EventKind::collision_split && events[q].coarse_lo == ev.coarse_lo &&
                    events[q].coarse_hi == ev.coarse_hi &&
                    (events[q].curves[0] == ev.curves[0] || events[q].curves[1] == ev.curves[0]))
                    split = &events[q];
            if (split) {
                ev.gamma_lo = split->gamma_lo;
                ev.gamma_hi = split->gamma_hi;
                ev.gamma_located = split->gamma_located;
                ev.location = split->location;
                ev.confident = split->confident;
                continue;
            }
            double lo = ev.gamma_lo, hi = ev.gamma_hi;
            const SampleSpectrum a = solve_sample(p, lo, true, cap), b = solve_sample(p, hi, true, cap);
            const int t0 = ground_type(a), t1 = ground_type(b);
            if (t0 == t1 || t0 == 0 || t1 == 0) {
                ev.confident = false;
                continue;
            }
            for (int depth = 0; depth < 60 && hi - lo > tol; ++depth) {
                const double mid = 0.5 * (lo + hi);
                if (ground_type(solve_sample(p, mid, true, cap)) == t0) lo = mid;
                else hi = mid;
            }
            ev.gamma_lo = lo;
            ev.gamma_hi = hi;
            ev.gamma_located = 0.5 * (lo + hi);
            ev.confident = hi - lo <= tol;
            continue;
        }
        ev = refine_event(ev, solver, tol);
        if (ev.kind == EventKind::collision_split) split_types(p, ev, cap);
    }
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int m = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

ScalingFit collision_scaling(const Problem& p, const BifurcationEvent& ev, std::vector<double> offsets) {
    ScalingFit f;
    f.offsets = offsets;
    const double g1 = ev.gamma_located, c = ev.location.real();
    bool ok = true;
    for (double d : offsets) {
        const CVec lo = solve_sample(p, g1 - d, false).values;
        double best = kInf, im = 0;
        for (int j = 0; j < lo.size(); ++j)
            if (std::isfinite(lo(j).real()) && !is_real_value(lo(j)) && lo(j).imag() > 0 &&
                std::abs(lo(j) - c) < best)
                best = std::abs(lo(j) - c), im = lo(j).imag();
        const CVec hi = solve_sample(p, g1 + d, false).values;
        std::vector<double> r;
        for (int j = 0; j < hi.size(); ++j)
            if (std::isfinite(hi(j).real()) && is_real_value(hi(j)) && std::abs(hi(j)) > 0) r.push_back(hi(j).real());
        std::sort(r.begin(), r.end(), [c](double x, double y) { return std::abs(x - c) < std::abs(y - c); });
        const double gap = r.size() >= 2 ? std::abs(r[0] - r[1]) : 0.0;
        ok = ok && im > 0 && gap > 0;
        f.imag_parts.push_back(im);
        f.splits.push_back(gap);
    }
    f.ok = ok && offsets.size() >= 2;
    if (f.ok) {
        f.slope_imag = fit_slope(offsets, f.imag_parts);
        f.slope_split = fit_slope(offsets, f.splits);
    }
    return f;
}

InertiaJump event_inertia_jump(const Problem& p, const BifurcationEvent& ev, int cap) {
    if (6 * p.n() > cap) fail(Status::resource_cap, "pencil dimension exceeds the dense cap");
    const double w0 = ev.location.real();
    auto sig = [&](double g) {
        const PencilAssembly pa = assemble_pencil(p, g);
        CMat H = pa.A;
        H.diagonal() -= (w0 * pa.B).cast<cd>();
        return inertia(H, 1e-10);
    };
    InertiaJump j;
    j.before = sig(ev.coarse_lo);
    j.after = sig(ev.coarse_hi);
    j.d_plus = j.after.p_plus - j.before.p_plus;
    j.d_minus = j.after.p_minus - j.before.p_minus;
    j.d_zero = j.after.p_zero - j.before.p_zero;
    j.dichotomy = j.d_zero == 0 && j.d_plus == -j.d_minus;
    return j;
}

ImaginaryAxisReport verify_imaginary_axis(const Problem& p, const std::vector<double>& gammas, int cap) {
    ImaginaryAxisReport rep;
    const double gs = p.gamma_star();
    const int n = p.n();
    const RVec& ii = p.inside3();
    std::vector<std::vector<cd>> per_gamma;
    for (double g : gammas) {
        if (!(g > gs)) fail(Status::invalid_argument, "imaginary-axis check requires gamma > gamma*");
        const NfgepAssembly na = assemble_nfgep(p, g);
        const NfgepSpectrum r = solve_nfgep(na, true, cap);
        std::vector<cd> here;
        for (int j = 0; j < r.values.size(); ++j) {
            const cd w = r.values(j);
            if (is_real_value(w) || w.imag() < 0) continue;
            const CVec eh = recover_fields(p, g, r.vectors.col(j));
            const CVec e = eh.tail(3 * n);
            const CVec Ce = p.apply_C(e);
            ImaginaryAxisSample s;
            s.gamma = g;
            s.omega = w;
            double out_max = 0;
            for (int k = 0; k < 3 * n; ++k)
                if (ii(k) == 0) out_max = std::max(out_max, std::abs(e(k)));
            s.outside_leak = out_max / e.cwiseAbs().maxCoeff();
            const cd q = e.dot(ii.cast<cd>().cwiseProduct(Ce));
            s.real_coupling = std::abs(q.real()) / (e.norm() * Ce.norm());
            const double aw = std::abs(w);
            const double pred = Ce.norm() / e.norm() / std::sqrt(g * g - p.eps_i());
            s.formula_error = std::abs(aw - pred) / aw;
            const double ai = ii.cwiseProduct(e.cwiseAbs2()).sum();
            const double ao = e.squaredNorm() - ai;
            const double pred2 = Ce.squaredNorm() / ((g * g - p.eps_i()) * ai - p.eps_o() * ao);
            s.identity_error = std::abs(aw * aw - pred2) / (aw * aw);
            rep.max_leak = std::max(rep.max_leak, s.outside_leak);
            rep.max_coupling = std::max(rep.max_coupling, s.real_coupling);
            rep.max_formula_error = std::max(rep.max_formula_error, s.formula_error);
            rep.max_identity_error = std::max(rep.max_identity_error, s.identity_error);
            rep.samples.push_back(s);
            here.push_back(w);
        }
        per_gamma.push_back(std::move(here));
    }
    rep.leak_ok = !rep.samples.empty() && rep.max_leak <= 1e-8;
    rep.formula_ok = !rep.samples.empty() && rep.max_formula_error <= 1e-6;
    bool mono = per_gamma.size() >= 2 && !rep.samples.empty();
    for (size_t k = 0; mono && k + 1 < per_gamma.size(); ++k) {
        const auto& a = per_gamma[k];
        const auto& b = per_gamma[k + 1];
        if (a.size() != b.size() || a.empty() || !(gammas[k + 1] > gammas[k])) {
            mono = false;
            break;
        }
        const int m = static_cast<int>(a.size());
        RMat cost(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) cost(i, j) = std::abs(a[i] - b[j]);
        const auto as = assign_min_cost(cost);
        for (int i = 0; i < m; ++i)
            if (!(std::abs(b[as[i]]) < std::abs(a[i]))) mono = false;
    }
    rep.monotone = mono;
    return rep;
}

} // namespace chiralcurl
