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

#include "chiralcurl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace chiralcurl {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(Status::config_error, "config field '" + path + "': " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) bad(path.empty() ? k : path + "." + k, "unknown field");
}

double get_double(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<int>();
}

Vec3 get_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) bad(path, "expected an array of 3 numbers");
    Vec3 v{};
    for (int l = 0; l < 3; ++l) v[l] = get_double(j[l], path + "[" + std::to_string(l) + "]");
    return v;
}

std::array<int, 3> get_int3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) bad(path, "expected an array of 3 integers");
    std::array<int, 3> v{};
    for (int l = 0; l < 3; ++l) v[l] = get_int(j[l], path + "[" + std::to_string(l) + "]");
    return v;
}

std::vector<std::array<int, 3>> get_nodes(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of nodes");
    std::vector<std::array<int, 3>> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(get_int3(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }
json int3_json(const std::array<int, 3>& v) { return json::array({v[0], v[1], v[2]}); }

const char* kTasks[] = {"verify", "sweep", "analyze", "nfgep"};

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    check_keys(j, "", {"lattice", "material", "sweep", "nfgep", "tasks", "output_dir", "seed", "threads", "dense_cap"});
    if (j.contains("lattice")) {
        const json& L = j["lattice"];
        check_keys(L, "lattice", {"n", "k", "a", "ahat", "tau", "m2", "m11", "m12", "m13", "rho2", "rho11", "rho12",
                                  "rho13"});
        if (L.contains("a") && L.contains("ahat")) bad("lattice", "give either 'a' or 'ahat', not both");
        if (L.contains("n")) c.lattice.n = get_int3(L["n"], "lattice.n");
        if (L.contains("k")) c.lattice.k = get_vec3(L["k"], "lattice.k");
        for (const char* key : {"a", "ahat"}) {
            if (!L.contains(key)) continue;
            const json& A = L[key];
            const std::string path = std::string("lattice.") + key;
            if (!A.is_array() || A.size() != 3) bad(path, "expected three lattice vectors");
            for (int l = 0; l < 3; ++l) c.lattice.a[l] = get_vec3(A[l], path + "[" + std::to_string(l) + "]");
            c.orthogonal_input = std::string(key) == "ahat";
        }
        if (L.contains("tau")) c.tau = get_vec3(L["tau"], "lattice.tau");
        auto opt = [&](const char* key, int& dst) {
            if (L.contains(key)) dst = get_int(L[key], std::string("lattice.") + key);
        };
        opt("m2", c.lattice.m2);
        opt("m11", c.lattice.m11);
        opt("m12", c.lattice.m12);
        opt("m13", c.lattice.m13);
        opt("rho2", c.lattice.rho2);
        opt("rho11", c.lattice.rho11);
        opt("rho12", c.lattice.rho12);
        opt("rho13", c.lattice.rho13);
    }
    if (j.contains("material")) {
        const json& M = j["material"];
        check_keys(M, "material", {"eps_i", "eps_o", "spheres", "spheroids", "nodes", "plus"});
        if (M.contains("eps_i")) c.eps_i = get_double(M["eps_i"], "material.eps_i");
        if (M.contains("eps_o")) c.eps_o = get_double(M["eps_o"], "material.eps_o");
        if (M.contains("spheres")) {
            const json& S = M["spheres"];
            if (!S.is_array()) bad("material.spheres", "expected an array");
            for (size_t i = 0; i < S.size(); ++i) {
                const std::string path = "material.spheres[" + std::to_string(i) + "]";
                check_keys(S[i], path, {"center", "radius"});
                Sphere s;
                if (S[i].contains("center")) s.center = get_vec3(S[i]["center"], path + ".center");
                if (S[i].contains("radius")) s.radius = get_double(S[i]["radius"], path + ".radius");
                if (s.radius < 0) bad(path + ".radius", "must be nonnegative");
                c.geometry.spheres.push_back(s);
            }
        }
        if (M.contains("spheroids")) {
            const json& S = M["spheroids"];
            if (!S.is_array()) bad("material.spheroids", "expected an array");
            for (size_t i = 0; i < S.size(); ++i) {
                const std::string path = "material.spheroids[" + std::to_string(i) + "]";
                check_keys(S[i], path, {"p", "q", "radius"});
                Spheroid s;
                if (S[i].contains("p")) s.p = get_vec3(S[i]["p"], path + ".p");
                if (S[i].contains("q")) s.q = get_vec3(S[i]["q"], path + ".q");
                if (S[i].contains("radius")) s.radius = get_double(S[i]["radius"], path + ".radius");
                if (s.radius < 0) bad(path + ".radius", "must be nonnegative");
                c.geometry.spheroids.push_back(s);
            }
        }
        if (M.contains("nodes")) c.nodes = get_nodes(M["nodes"], "material.nodes");
        if (M.contains("plus")) c.plus_nodes = get_nodes(M["plus"], "material.plus");
    }
    if (!(c.eps_i > 0) || !(c.eps_o > 0)) bad("material", "permittivities must be positive");
    if (j.contains("sweep")) {
        const json& S = j["sweep"];
        check_keys(S, "sweep", {"gamma_min", "gamma_max", "steps", "refine_tol", "max_halvings"});
        if (S.contains("gamma_min")) c.sweep.gamma_min = get_double(S["gamma_min"], "sweep.gamma_min");
        if (S.contains("gamma_max")) c.sweep.gamma_max = get_double(S["gamma_max"], "sweep.gamma_max");
        if (S.contains("steps")) c.sweep.steps = get_int(S["steps"], "sweep.steps");
        if (S.contains("refine_tol")) c.sweep.refine_tol = get_double(S["refine_tol"], "sweep.refine_tol");
        if (S.contains("max_halvings")) c.sweep.max_halvings = get_int(S["max_halvings"], "sweep.max_halvings");
    }
    if (c.sweep.gamma_min < 0) bad("sweep.gamma_min", "must be >= 0");
    if (c.sweep.gamma_max < c.sweep.gamma_min) bad("sweep.gamma_max", "must be >= gamma_min");
    if (c.sweep.steps < 2) bad("sweep.steps", "must be >= 2");
    if (!(c.sweep.refine_tol > 0)) bad("sweep.refine_tol", "must be positive");
    if (c.sweep.max_halvings < 0) bad("sweep.max_halvings", "must be >= 0");
    if (j.contains("nfgep")) {
        const json& N = j["nfgep"];
        check_keys(N, "nfgep", {"gammas"});
        if (N.contains("gammas")) {
            if (!N["gammas"].is_array()) bad("nfgep.gammas", "expected an array of numbers");
            for (size_t i = 0; i < N["gammas"].size(); ++i) {
                const double g = get_double(N["gammas"][i], "nfgep.gammas[" + std::to_string(i) + "]");
                if (g < 0) bad("nfgep.gammas[" + std::to_string(i) + "]", "must be >= 0");
                c.nfgep_gammas.push_back(g);
            }
        }
    }
    if (j.contains("tasks")) {
        const json& T = j["tasks"];
        if (!T.is_array()) bad("tasks", "expected an array of task names");
        for (size_t i = 0; i < T.size(); ++i) {
            if (!T[i].is_string()) bad("tasks[" + std::to_string(i) + "]", "expected a string");
            const std::string t = T[i].get<std::string>();
            if (std::find(std::begin(kTasks), std::end(kTasks), t) == std::end(kTasks))
                bad("tasks[" + std::to_string(i) + "]", "unknown task '" + t + "'");
            if (std::find(c.tasks.begin(), c.tasks.end(), t) == c.tasks.end()) c.tasks.push_back(t);
        }
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) bad("output_dir", "expected a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("threads")) c.threads = get_int(j["threads"], "threads");
    if (c.threads < 1) bad("threads", "must be >= 1");
    if (j.contains("dense_cap")) c.dense_cap = get_int(j["dense_cap"], "dense_cap");
    if (c.dense_cap < 1) bad("dense_cap", "must be >= 1");
    for (int l = 0; l < 3; ++l)
        if (c.lattice.n[l] < 1) bad("lattice.n", "grid counts must be >= 1");
    auto in_grid = [&](const std::vector<std::array<int, 3>>& v, const char* path) {
        for (const auto& x : v)
            for (int l = 0; l < 3; ++l)
                if (x[l] < 1 || x[l] > c.lattice.n[l]) bad(path, "node index out of range");
    };
    in_grid(c.nodes, "material.nodes");
    in_grid(c.plus_nodes, "material.plus");
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Status::config_error, std::string("malformed config: ") + e.what());
    }
    return parse_config(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Status::config_error, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& c) {
    json j;
    json L;
    L["n"] = int3_json(c.lattice.n);
    L["k"] = vec3_json(c.lattice.k);
    L[c.orthogonal_input ? "ahat" : "a"] = json::array({vec3_json(c.lattice.a[0]), vec3_json(c.lattice.a[1]),
                                                          vec3_json(c.lattice.a[2])});
    L["tau"] = vec3_json(c.tau);
    L["m2"] = c.lattice.m2;
    L["m11"] = c.lattice.m11;
    L["m12"] = c.lattice.m12;
    L["m13"] = c.lattice.m13;
    L["rho2"] = c.lattice.rho2;
    L["rho11"] = c.lattice.rho11;
    L["rho12"] = c.lattice.rho12;
    L["rho13"] = c.lattice.rho13;
    j["lattice"] = L;
    json M;
    M["eps_i"] = c.eps_i;
    M["eps_o"] = c.eps_o;
    M["spheres"] = json::array();
    for (const auto& s : c.geometry.spheres) M["spheres"].push_back({{"center", vec3_json(s.center)}, {"radius", s.radius}});
    M["spheroids"] = json::array();
    for (const auto& s : c.geometry.spheroids)
        M["spheroids"].push_back({{"p", vec3_json(s.p)}, {"q", vec3_json(s.q)}, {"radius", s.radius}});
    M["nodes"] = json::array();
    for (const auto& x : c.nodes) M["nodes"].push_back(int3_json(x));
    M["plus"] = json::array();
    for (const auto& x : c.plus_nodes) M["plus"].push_back(int3_json(x));
    j["material"] = M;
    j["sweep"] = {{"gamma_min", c.sweep.gamma_min},
                  {"gamma_max", c.sweep.gamma_max},
                  {"steps", c.sweep.steps},
                  {"refine_tol", c.sweep.refine_tol},
                  {"max_halvings", c.sweep.max_halvings}};
    j["nfgep"] = {{"gammas", c.nfgep_gammas}};
    j["tasks"] = c.tasks;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["dense_cap"] = c.dense_cap;
    return j;
}

LatticeSpec make_spec(const RunConfig& c) {
    if (c.orthogonal_input) return LatticeSpec::from_orthogonal(c.lattice.a, c.lattice);
    return LatticeSpec(c.lattice);
}

MaterialMask make_mask(const RunConfig& c, const LatticeSpec& spec) {
    MaterialMask m = build_mask(c.geometry, spec, c.eps_i, c.eps_o);
    const std::array<int, 3> d{spec.n1(), spec.n2(), spec.n3()};
    for (const auto& x : c.nodes) m.inside[offset_of(x[0], x[1], x[2], d)] = 1;
    for (const auto& x : c.plus_nodes) {
        const MaterialMask pm = plus_mask(spec, x[0], x[1], x[2], c.eps_i, c.eps_o);
        for (int j = 0; j < m.size(); ++j) m.inside[j] = m.inside[j] || pm.inside[j];
    }
    return m;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const RunConfig& c) {
    json j = config_to_json(c);
    j.erase("threads");
    j.erase("output_dir");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(dump_json(j, -1))));
    return buf;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void emit(const json& j, int indent, int level, std::string& out) {
    const std::string nl = indent >= 0 ? "\n" : "";
    const std::string pad = indent >= 0 ? std::string(static_cast<size_t>(indent * (level + 1)), ' ') : "";
    const std::string pad0 = indent >= 0 ? std::string(static_cast<size_t>(indent * level), ' ') : "";
    const std::string colon = indent >= 0 ? ": " : ":";
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{" + nl;
        size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad + json(it.key()).dump() + colon;
            emit(it.value(), indent, level + 1, out);
            out += (i + 1 < j.size() ? "," : "") + nl;
        }
        out += pad0 + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[" + nl;
        for (size_t i = 0; i < j.size(); ++i) {
            out += pad;
            emit(j[i], indent, level + 1, out);
            out += (i + 1 < j.size() ? "," : "") + nl;
        }
        out += pad0 + "]";
        return;
    }
    case json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            out += "null";
            return;
        }
        std::string s = format_double(x);
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        out += s;
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    if (indent >= 0) out += "\n";
    return out;
}

json complex_to_json(cd z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cd complex_from_json(const json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) fail(Status::config_error, "expected {\"re\", \"im\"}");
    return {j["re"].get<double>(), j["im"].get<double>()};
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Status::config_error, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(Status::config_error, "write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(Status::config_error, "cannot move output into place at '" + path + "'");
    }
}

std::string curves_csv(const EigenCurveSet& set) {
    std::string out = "gamma,curve_id,re,im,type\n";
    for (int c = 0; c < set.num_curves(); ++c)
        for (int s = 0; s < set.num_samples(); ++s) {
            const CurvePoint& pt = set.curves[c][s];
            out += format_double(set.gammas[s]) + "," + std::to_string(c) + ",";
            if (pt.infinite) {
                out += "inf,0,inf\n";
                continue;
            }
            out += format_double(pt.value.real()) + "," + format_double(pt.value.imag()) + ",";
            out += pt.type > 0 ? "+1" : (pt.type < 0 ? "-1" : "0");
            out += "\n";
        }
    return out;
}

json event_to_json(const BifurcationEvent& ev) {
    json j;
    j["kind"] = to_string(ev.kind);
    j["gamma_located"] = ev.gamma_located;
    j["location"] = complex_to_json(ev.location);
    j["bracket"] = json::array({ev.gamma_lo, ev.gamma_hi});
    j["coarse_bracket"] = json::array({ev.coarse_lo, ev.coarse_hi});
    j["curves"] = json::array({ev.curves[0], ev.curves[1]});
    j["types_after"] = ev.has_types ? json::array({ev.types_after[0], ev.types_after[1]}) : json(nullptr);
    j["confident"] = ev.confident;
    return j;
}

json events_to_json(const std::vector<BifurcationEvent>& events) {
    json a = json::array();
    for (const auto& e : events) a.push_back(event_to_json(e));
    return a;
}

} // namespace chiralcurl
