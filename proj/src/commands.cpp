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

#include "chiralcurl/commands.hpp"

#include "chiralcurl/checks.hpp"
#include "chiralcurl/continuation.hpp"
#include "chiralcurl/structure.hpp"

#include <cmath>
#include <filesystem>

namespace chiralcurl {

namespace {

json header(const RunConfig& c, const Problem& p) {
    const auto& sb = p.basis();
    return {{"version", kVersion},
            {"config_hash", config_hash(c)},
            {"n", p.n()},
            {"gamma_star", p.gamma_star()},
            {"inside_nodes", p.mask().count_inside()},
            {"tau", json::array({sb.tau()[0], sb.tau()[1], sb.tau()[2]})},
            {"tau_adjusted", sb.tau_adjusted()}};
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void require_svd(const Problem& p) {
    if (!p.basis().has_svd())
        fail(Status::config_error, "this task requires a nonzero Bloch vector k (the curl has no SVD at k = 0)");
}

void require_dense(const RunConfig& c, const Problem& p) {
    if (6 * p.n() > c.dense_cap)
        fail(Status::resource_cap, "pencil dimension " + std::to_string(6 * p.n()) + " exceeds dense_cap " +
                                       std::to_string(c.dense_cap));
}

json inertia_json(const InertiaSignature& s) {
    return {{"p_plus", s.p_plus}, {"p_minus", s.p_minus}, {"p_zero", s.p_zero}};
}

} // namespace

CommandOutcome cmd_verify(const RunConfig& c, const std::string& out_dir) {
    const LatticeSpec spec = make_spec(c);
    Problem p(spec, make_mask(c, spec), c.tau);
    require_svd(p);
    require_dense(c, p);
    CommandOutcome out;
    json r = header(c, p);
    bool ok = true;

    const auto dg = check_diagonalization(p);
    r["diagonalization"] = {{"residual", dg.residual}, {"scale", dg.scale}, {"pass", dg.pass}};
    ok = ok && dg.pass;

    const auto sv = check_svd(p);
    r["svd"] = {{"factor_residual", sv.factor_residual},
                {"rank", sv.rank},
                {"unitarity", sv.unitarity},
                {"pass", sv.pass}};
    ok = ok && sv.pass;

    const double gs = p.gamma_star();
    const bool medium = p.mask().count_inside() > 0;
    const double gc = (!medium || 2.0 < gs) ? 2.0 : 0.5 * gs;
    const auto cs = check_census(p, gc);
    r["census"] = {{"gamma", cs.gamma},   {"zero", cs.zero},       {"positive", cs.positive},
                   {"negative", cs.negative}, {"nonreal", cs.nonreal}, {"tol", cs.tol},
                   {"pass", cs.pass}};
    ok = ok && cs.pass;

    r["nfgep_equivalence"] = json::array();
    const std::vector<double> gammas =
        medium ? std::vector<double>{0.5 * gs, 0.9 * gs, 1.2 * gs} : std::vector<double>{0.5, 1.0, 2.0};
    for (double g : gammas) {
        const auto eq = check_nfgep_equivalence(p, g);
        r["nfgep_equivalence"].push_back({{"gamma", eq.gamma},
                                          {"full_nonzero", eq.full_nonzero},
                                          {"reduced", eq.reduced},
                                          {"distance", eq.distance},
                                          {"pass", eq.pass}});
        ok = ok && eq.pass;
    }
    r["passed"] = ok;
    const std::string path = join(out_dir, "verify.json");
    write_atomic(path, dump_json(r));
    out.files.push_back(path);
    out.report = r;
    out.status = ok ? Status::ok : Status::invariant_failure;
    return out;
}

CommandOutcome cmd_sweep(const RunConfig& c, const std::string& out_dir) {
    const LatticeSpec spec = make_spec(c);
    Problem p(spec, make_mask(c, spec), c.tau);
    require_svd(p);
    require_dense(c, p);
    std::vector<double> grid(c.sweep.steps);
    for (int k = 0; k < c.sweep.steps; ++k)
        grid[k] = c.sweep.gamma_min + (c.sweep.gamma_max - c.sweep.gamma_min) * k / (c.sweep.steps - 1);
    SweepOptions opt;
    opt.threads = c.threads;
    opt.cap = c.dense_cap;
    opt.max_halvings = c.sweep.max_halvings;
    const EigenCurveSet set = sweep(p, grid, opt);
    std::vector<BifurcationEvent> events = detect_events(set);
    refine_events(p, events, c.sweep.refine_tol, c.dense_cap);

    bool closure = true;
    for (int s = 0; s < set.num_samples(); ++s)
        for (int a = 0; a < set.num_curves(); ++a) {
            const CurvePoint& pt = set.curves[a][s];
            if (pt.infinite || is_real_value(pt.value)) continue;
            double best = INFINITY;
            for (int b = 0; b < set.num_curves(); ++b)
                if (!set.curves[b][s].infinite)
                    best = std::min(best, std::abs(set.curves[b][s].value - std::conj(pt.value)));
            closure = closure && best <= 1e-9 * (1.0 + std::abs(pt.value));
        }
    int births = 0, grounds = 0;
    for (const auto& e : events) {
        births += e.kind == EventKind::imaginary_birth;
        grounds += e.kind == EventKind::new_ground_state;
    }
    const int rank_u2 = u_matrices(p).rank_U2;
    const bool births_ok = births <= rank_u2;
    const bool grounds_ok = grounds <= rank_u2;

    CommandOutcome out;
    const std::string curves = join(out_dir, "curves.csv"), evs = join(out_dir, "events.json"),
                      meta = join(out_dir, "curves.meta.json");
    write_atomic(curves, curves_csv(set));
    write_atomic(evs, dump_json(events_to_json(events)));
    json m = header(c, p);
    m["gamma_min"] = c.sweep.gamma_min;
    m["gamma_max"] = c.sweep.gamma_max;
    m["samples"] = set.num_samples();
    m["curves"] = set.num_curves();
    m["events"] = events.size();
    m["rank_U2"] = rank_u2;
    m["curves_file"] = "curves.csv";
    m["events_file"] = "events.json";
    m["ambiguous_intervals"] = json::array();
    for (const auto& [a, b] : set.ambiguous) m["ambiguous_intervals"].push_back(json::array({a, b}));
    m["invariants"] = {{"conjugate_closure", closure},
                       {"imaginary_births_within_rank_U2", births_ok},
                       {"new_ground_states_within_rank_U2", grounds_ok}};
    write_atomic(meta, dump_json(m));
    out.files = {curves, evs, meta};
    out.report = m;
    out.status = closure && births_ok && grounds_ok ? Status::ok : Status::invariant_failure;
    return out;
}

CommandOutcome cmd_analyze(const RunConfig& c, const std::string& out_dir) {
    const LatticeSpec spec = make_spec(c);
    Problem p(spec, make_mask(c, spec), c.tau);
    require_svd(p);
    require_dense(c, p);
    CommandOutcome out;
    json r = header(c, p);
    bool ok = true;

    const RegularityResult reg = regularity_test(p);
    r["regularity"] = {{"is_regular", reg.is_regular},
                       {"dim_intersection", reg.dim_intersection},
                       {"min_sine", reg.min_sine}};

    const JordanReport jr = jordan_block_test(p, &reg);
    r["jordan"] = {{"conclusive", jr.conclusive},
                   {"has_defective_infinity", jr.has_defective_infinity},
                   {"nullity", jr.nullity},
                   {"interior_nodes", jr.interior_nodes.size()},
                   {"witnesses", jr.witnesses.size()},
                   {"max_b_residual", jr.max_b_residual},
                   {"max_range_residual", jr.max_range_residual}};
    if (!jr.witnesses.empty()) ok = ok && jr.max_b_residual <= 1e-10 && jr.max_range_residual <= 1e-10;

    InfiniteCensus census;
    if (p.mask().count_inside() > 0) {
        const PencilAssembly pa = assemble_pencil(p, p.gamma_star());
        const PencilSpectrum sp = solve_dense_pencil(pa, true, c.dense_cap);
        census = infinite_eigen_census(p, pa, sp, jr);
    }
    r["census"] = {{"count_infinite", census.count_infinite},
                   {"count_defective", census.count_defective},
                   {"bound", census.bound},
                   {"expected", census.expected},
                   {"positive_type_finite", census.positive_type_finite},
                   {"within_bound", census.within_bound}};
    ok = ok && census.within_bound;

    const UMatrices u = u_matrices(p);
    r["u_matrices"] = {{"rank_U2", u.rank_U2}, {"norm_U2", u.norm_U2}};

    r["congruence"] = json::array();
    if (p.mask().count_inside() > 0)
        for (double f : {0.8, 1.3})
            for (double a : {1e-6, -1e-6}) {
                const auto cr = small_alpha_congruence(p, f * p.gamma_star(), a, u);
                r["congruence"].push_back({{"gamma", f * p.gamma_star()},
                                           {"alpha", a},
                                           {"direct", inertia_json(cr.direct)},
                                           {"block", inertia_json(cr.block)},
                                           {"match", cr.match}});
            }

    const AppendixReport ap = appendix_condition(p);
    json segs = json::array();
    for (const auto& s : ap.segments)
        segs.push_back({{"found", s.found}, {"fixed", json::array({s.fixed_a, s.fixed_b})}});
    json flags = json::object(), sizes = json::object();
    for (const auto& [k, v] : ap.u_rank_flags) flags[k] = v;
    for (const auto& [k, v] : ap.set_sizes) sizes[k] = v;
    r["appendix"] = {{"segments", segs},
                     {"segments_found", ap.segments_found},
                     {"u_rank_flags", flags},
                     {"set_sizes", sizes},
                     {"union_full_rank", ap.union_full_rank},
                     {"regularity_guaranteed", ap.regularity_guaranteed}};
    if (ap.regularity_guaranteed) ok = ok && reg.dim_intersection == 0;
    r["passed"] = ok;

    const std::string path = join(out_dir, "certificate.json");
    write_atomic(path, dump_json(r));
    out.files.push_back(path);
    out.report = r;
    out.status = ok ? Status::ok : Status::invariant_failure;
    return out;
}

CommandOutcome cmd_nfgep(const RunConfig& c, const std::string& out_dir) {
    const LatticeSpec spec = make_spec(c);
    Problem p(spec, make_mask(c, spec), c.tau);
    require_svd(p);
    std::vector<double> gammas = c.nfgep_gammas;
    if (gammas.empty()) gammas.push_back(c.sweep.gamma_min);
    CommandOutcome out;
    json r = header(c, p);
    r["results"] = json::array();
    bool ok = true;
    const int n = p.n();
    for (double g : gammas) {
        const NfgepAssembly na = assemble_nfgep(p, g);
        const NfgepSpectrum sp = solve_nfgep(na, true, c.dense_cap);
        const bool below = p.mask().count_inside() == 0 || g < p.gamma_star();
        json vals = json::array(), types = json::array(), der = json::array();
        double worst = 0;
        for (int j = 0; j < sp.values.size(); ++j) {
            const cd w = sp.values(j);
            const CVec y = sp.vectors.col(j);
            vals.push_back(complex_to_json(w));
            types.push_back(is_real_value(w) ? reduced_type(w, y, na) : 0);
            if (below) der.push_back(derivative_indicator(p, na, y));
            const CVec he = recover_fields(p, g, y);
            CVec eh(6 * n);
            eh << he.tail(3 * n), he.head(3 * n);
            worst = std::max(worst, maxwell_residual(p, g, w, eh));
        }
        ok = ok && worst <= 1e-8;
        r["results"].push_back({{"gamma", g},
                                {"dimension", na.dim()},
                                {"eigenvalues", vals},
                                {"types", types},
                                {"derivative_indicators", below ? der : json(nullptr)},
                                {"max_maxwell_residual", worst}});
    }
    r["passed"] = ok;
    const std::string path = join(out_dir, "nfgep.json");
    write_atomic(path, dump_json(r));
    out.files.push_back(path);
    out.report = r;
    out.status = ok ? Status::ok : Status::invariant_failure;
    return out;
}

CommandOutcome run_command(const std::string& name, const RunConfig& c, const std::string& out_dir) {
    const std::string dir = out_dir.empty() ? c.output_dir : out_dir;
    if (name == "verify") return cmd_verify(c, dir);
    if (name == "sweep") return cmd_sweep(c, dir);
    if (name == "analyze") return cmd_analyze(c, dir);
    if (name == "nfgep") return cmd_nfgep(c, dir);
    fail(Status::config_error, "unknown command '" + name + "'");
}

} // namespace chiralcurl
