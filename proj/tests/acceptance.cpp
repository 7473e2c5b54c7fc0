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
#include "chiralcurl/continuation.hpp"
#include "chiralcurl/structure.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace chiralcurl;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures += failures.empty() ? what : ", " + what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int m) {
    std::vector<double> g(m);
    for (int k = 0; k < m; ++k) g[k] = a + (b - a) * k / (m - 1);
    return g;
}

int count_kind(const std::vector<BifurcationEvent>& ev, EventKind k) {
    return static_cast<int>(std::count_if(ev.begin(), ev.end(), [k](const auto& e) { return e.kind == k; }));
}

Vec3 random_k(std::mt19937& rng, const LatticeParams& base) {
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (;;) {
        const Vec3 k{u(rng), u(rng), u(rng)};
        if (std::sqrt(dot3(k, k)) < 0.05) continue;
        LatticeParams q = base;
        q.k = k;
        try {
            LatticeSpec s(q);
            (void)s;
            return k;
        } catch (const Error&) {
        }
    }
}

LatticeSpec with_k(const LatticeSpec& s, const Vec3& k) {
    LatticeParams q = s.params();
    q.k = k;
    return LatticeSpec(q);
}

LatticeSpec fcc_k(int n1, int n2, int n3, std::mt19937& rng) {
    const LatticeSpec s = fx::fcc(n1, n2, n3);
    return with_k(s, random_k(rng, s.params()));
}

LatticeSpec cubic_k(int n1, int n2, int n3, std::mt19937& rng) {
    const LatticeSpec s = fx::cubic(n1, n2, n3);
    return with_k(s, random_k(rng, s.params()));
}

/// Sweep shared by the bifurcation and inertia criteria.
struct LocalSweep {
    std::unique_ptr<Problem> p;
    EigenCurveSet set;
    std::vector<BifurcationEvent> events;
};

const LocalSweep& local_sweep() {
    static LocalSweep ls = [] {
        LocalSweep r;
        const LatticeSpec s = fx::cubic(4, 4, 4);
        r.p = std::make_unique<Problem>(s, fx::plus_center(s));
        const double gs = r.p->gamma_star();
        SweepOptions opt;
        opt.max_halvings = 2;
        r.set = sweep(*r.p, linspace(gs - 0.05, gs + 0.25, 16), opt);
        r.events = detect_events(r.set);
        refine_events(*r.p, r.events, 1e-9);
        return r;
    }();
    return ls;
}

void diagonalization(Outcome& o) {
    std::mt19937 rng(101);
    std::vector<std::pair<std::string, LatticeSpec>> fx;
    fx.emplace_back("cubic 4x4x4", cubic_k(4, 4, 4, rng));
    fx.emplace_back("cubic 5x6x4", cubic_k(5, 6, 4, rng));
    fx.emplace_back("fcc 4x6x6", fcc_k(4, 6, 6, rng));
    fx.emplace_back("fcc 6x6x5", fcc_k(6, 6, 5, rng));
    {
        const LatticeSpec s = fx::shifted(4, 5, 6, 2, 1, 3, 2, 1, 1, 1, 0);
        fx.emplace_back("shifted 4x5x6", with_k(s, random_k(rng, s.params())));
    }
    double worst = 0, slowest = 0;
    for (const auto& [name, s] : fx) {
        const auto t0 = std::chrono::steady_clock::now();
        Problem p(s, fx::empty_mask(s));
        const auto d = check_diagonalization(p);
        const double t = seconds_since(t0);
        worst = std::max(worst, d.residual / d.scale);
        slowest = std::max(slowest, t);
        o.require(d.pass, name + " residual");
        o.require(t < 10.0, name + " runtime");
    }
    o.detail << fx.size() << " fixtures, max relative residual " << worst << ", slowest " << slowest << " s";
}

void svd_structure(Outcome& o) {
    std::mt19937 rng(202);
    int count = 0;
    double fr = 0, un = 0;
    for (const LatticeSpec& s : {cubic_k(4, 4, 4, rng), fcc_k(4, 6, 6, rng), cubic_k(5, 5, 5, rng)}) {
        Problem p(s, fx::plus_center(s));
        const auto c = check_svd(p);
        o.require(c.factor_residual <= 1e-10, "factor residual");
        o.require(c.rank == 2 * s.size(), "rank");
        o.require(c.unitarity <= 1e-12, "unitarity");
        fr = std::max(fr, c.factor_residual);
        un = std::max(un, c.unitarity);
        ++count;
    }
    o.detail << count << " fixtures, factor residual " << fr << ", unitarity " << un;
}

void census(Outcome& o) {
    const LatticeSpec s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s, 13.0, 1.0));
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = check_census(p, 2.0);
    const double t = seconds_since(t0);
    const int n = s.size();
    o.require(c.zero == 2 * n && c.positive == 2 * n && c.negative == 2 * n && c.nonreal == 0, "counts");
    o.require(t < 30.0, "runtime");
    o.detail << "n=" << n << " zero/positive/negative/nonreal = " << c.zero << "/" << c.positive << "/"
             << c.negative << "/" << c.nonreal << ", " << t << " s";
}

void equivalence(Outcome& o) {
    const LatticeSpec s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    double worst = 0;
    for (double f : {0.5, 0.9, 1.2}) {
        const auto e = check_nfgep_equivalence(p, f * p.gamma_star(), 1e-8);
        o.require(e.pass, "gamma factor " + std::to_string(f));
        worst = std::max(worst, e.distance);
    }
    o.detail << "max relative matched distance " << worst;
}

void jordan(Outcome& o) {
    std::mt19937 rng(303);
    std::vector<std::pair<std::string, Problem>> cases;
    {
        const LatticeSpec s = fx::cubic(4, 4, 4);
        cases.emplace_back("plus 4^3", Problem(s, fx::plus_center(s)));
    }
    {
        const LatticeSpec s = fcc_k(4, 6, 6, rng);
        cases.emplace_back("plus fcc 4x6x6", Problem(s, fx::plus_center(s)));
    }
    {
        const LatticeSpec s = cubic_k(5, 5, 5, rng);
        std::vector<int> box;
        for (int i = 2; i <= 4; ++i)
            for (int j = 2; j <= 4; ++j)
                for (int k = 2; k <= 4; ++k) box.push_back(offset_of(i, j, k, {5, 5, 5}));
        cases.emplace_back("box 5^3", Problem(s, mask_from_offsets(s, box, 13.0, 1.0)));
    }
    int checked = 0;
    double br = 0, rr = 0;
    for (const auto& [name, p] : cases) {
        const auto jr = jordan_block_test(p);
        o.require(jr.nullity >= 1, name + " nullity");
        o.require(!jr.witnesses.empty(), name + " witness");
        o.require(jr.max_b_residual <= 1e-10, name + " Bv");
        o.require(jr.max_range_residual <= 1e-10, name + " Av");
        br = std::max(br, jr.max_b_residual);
        rr = std::max(rr, jr.max_range_residual);
        ++checked;
    }
    o.detail << checked << " masks, max |Bv| " << br << ", max range residual " << rr;
}

void imaginary_axis(Outcome& o) {
    const LatticeSpec s = fx::cubic(4, 4, 4);
    Problem p(s, fx::plus_center(s));
    const double gs = p.gamma_star();
    const auto rep = verify_imaginary_axis(p, {gs + 1e-3, gs + 2e-3, gs + 3e-3});
    o.require(!rep.samples.empty(), "no nonreal eigenvalues");
    o.require(rep.formula_ok, "modulus formula");
    o.require(rep.leak_ok, "outside components");
    o.require(rep.monotone, "monotone modulus");
    o.detail << rep.samples.size() << " nonreal pairs, max formula error " << rep.max_formula_error
             << ", max outside leak " << rep.max_leak << ", monotone " << rep.monotone;
}

void bifurcation_geometry(Outcome& o) {
    const LocalSweep& ls = local_sweep();
    const auto it = std::find_if(ls.events.begin(), ls.events.end(),
                                 [](const auto& e) { return e.kind == EventKind::collision_split; });
    if (it == ls.events.end()) {
        o.require(false, "no collision detected");
        return;
    }
    const auto fit = collision_scaling(*ls.p, *it);
    o.require(fit.ok, "scaling fit");
    o.require(std::abs(fit.slope_imag - 0.5) <= 0.05, "imaginary-part slope");
    o.require(std::abs(fit.slope_split - 0.5) <= 0.05, "split slope");
    o.require(it->has_types && it->types_after[0] == 1 && it->types_after[1] == -1, "post-split types");
    o.require(it->gamma_hi - it->gamma_lo <= 1e-9, "bracket width");
    o.detail << "gamma_1 - gamma* = " << it->gamma_located - ls.p->gamma_star() << ", slopes " << fit.slope_imag
             << " / " << fit.slope_split << ", types (" << it->types_after[0] << ", " << it->types_after[1]
             << "), bracket width " << it->gamma_hi - it->gamma_lo;
}

void inertia_bookkeeping(Outcome& o) {
    {
        const LatticeSpec s = fx::cubic(4, 4, 4);
        Problem p(s, fx::plus_center(s));
        std::mt19937 rng(404);
        std::uniform_real_distribution<double> u(0.05, 2.0 * p.gamma_star());
        int bad = 0;
        for (int t = 0; t < 10; ++t) {
            const auto sig = inertia(assemble_pencil(p, u(rng)).A);
            bad += sig.p_plus != sig.p_minus;
        }
        o.require(bad == 0, "p+ != p- for A_gamma");
        o.detail << "A_gamma balanced at 10 gammas: " << (bad == 0);
    }
    {
        const LatticeSpec s = fx::cubic(5, 5, 5);
        Problem p(s, fx::plus_center(s));
        const UMatrices u = u_matrices(p);
        int match = 0;
        for (double f : {0.8, 1.3})
            for (double a : {1e-6, -1e-6}) {
                const auto cr = small_alpha_congruence(p, f * p.gamma_star(), a, u);
                match += cr.match;
            }
        o.require(match == 4, "small-alpha congruence");
        o.detail << "; congruence " << match << "/4";
    }
    const LocalSweep& ls = local_sweep();
    int ok = 0;
    for (const auto& ev : ls.events) ok += event_inertia_jump(*ls.p, ev).dichotomy;
    o.require(!ls.events.empty(), "no events");
    o.require(ok == static_cast<int>(ls.events.size()), "event dichotomy");
    o.detail << "; dichotomy at " << ok << "/" << ls.events.size() << " events";
}

void pair_count(Outcome& o) {
    {
        const LatticeSpec s = fx::cubic(4, 4, 4);
        Problem p(s, fx::plus_center(s));
        const double gs = p.gamma_star();
        SweepOptions opt;
        opt.max_halvings = 2;
        const auto set = sweep(p, linspace(0.9 * gs, 2.0 * gs, 40), opt);
        const auto ev = detect_events(set);
        const int births = count_kind(ev, EventKind::imaginary_birth);
        const int rank = u_matrices(p).rank_U2;
        o.require(births <= rank, "births exceed rank U2");
        o.detail << "births " << births << " <= rank U2 " << rank << " (merges " << count_kind(ev, EventKind::real_collision_merge)
                 << ", splits " << count_kind(ev, EventKind::collision_split) << ")";
    }
    std::mt19937 rng(505);
    int nonzero = 0, total = 0;
    for (int n : {5, 6}) {
        const LatticeSpec s = cubic_k(n, n, n, rng);
        std::uniform_int_distribution<int> node(0, s.size() - 1);
        for (int t = 0; t < 3; ++t) {
            std::vector<int> offs;
            for (int q = 0; q <= t * 2; ++q) offs.push_back(node(rng));
            Problem p(s, mask_from_offsets(s, offs, 13.0, 1.0));
            nonzero += u_matrices(p).rank_U2 > 0;
            ++total;
        }
    }
    o.require(nonzero == total, "U2 vanished");
    o.detail << "; U2 nonzero on " << nonzero << "/" << total << " masks";
}

void appendix(Outcome& o) {
    std::mt19937 rng(606);
    int guaranteed = 0, consistent = 0;
    for (int t = 0; t < 20; ++t) {
        const int n = 6 + t % 3;
        const LatticeSpec s = cubic_k(n, n, n, rng);
        std::uniform_int_distribution<int> coord(1, n), len(1, 3);
        std::vector<int> offs;
        const int kind = t % 4;
        if (kind == 0) {
            offs.push_back(offset_of(coord(rng), coord(rng), coord(rng), {n, n, n}));
        } else if (kind == 1 || kind == 2) {
            const int i0 = coord(rng), j0 = coord(rng), k0 = coord(rng);
            const int li = len(rng), lj = len(rng), lk = kind == 1 ? 1 : len(rng);
            for (int i = 0; i < li; ++i)
                for (int j = 0; j < lj; ++j)
                    for (int k = 0; k < lk; ++k)
                        offs.push_back(offset_of((i0 + i - 1) % n + 1, (j0 + j - 1) % n + 1, (k0 + k - 1) % n + 1,
                                                 {n, n, n}));
        } else {
            std::bernoulli_distribution b(0.08);
            for (int j = 0; j < s.size(); ++j)
                if (b(rng)) offs.push_back(j);
        }
        Problem p(s, mask_from_offsets(s, offs, 13.0, 1.0));
        const auto ap = appendix_condition(p);
        if (!ap.regularity_guaranteed) continue;
        ++guaranteed;
        consistent += regularity_test(p).dim_intersection == 0;
    }
    o.require(consistent == guaranteed, "guarantee contradicted");
    o.detail << "20 masks, guaranteed " << guaranteed << ", consistent " << consistent;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"diagonalization", diagonalization},
        {"svd_structure", svd_structure},
        {"spectrum_census", census},
        {"nfgep_equivalence", equivalence},
        {"jordan_certificate", jordan},
        {"imaginary_axis_law", imaginary_axis},
        {"bifurcation_geometry", bifurcation_geometry},
        {"inertia_bookkeeping", inertia_bookkeeping},
        {"pair_count_bound", pair_count},
        {"appendix_consistency", appendix},
    };
    int failed = 0, run = 0;
    for (const auto& [name, fn] : criteria) {
        if (argc > 1 && std::find(argv + 1, argv + argc, std::string(name)) == argv + argc) continue;
        ++run;
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::string line = o.detail.str();
        if (!o.failures.empty()) line += (line.empty() ? "failed: " : "; failed: ") + o.failures;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, line.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria failed\n", failed, run);
    return failed == 0 ? 0 : 1;
}
