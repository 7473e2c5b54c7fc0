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

#include "chiralcurl/continuation.hpp"
#include "chiralcurl/lattice.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chiralcurl {

using json = nlohmann::json;

struct SweepSettings {
    double gamma_min = 0.0;
    double gamma_max = 1.0;
    int steps = 2;
    double refine_tol = 1e-9;
    int max_halvings = 3;
};

struct RunConfig {
    LatticeParams lattice;
    bool orthogonal_input = false; // lattice vectors given as the orthogonal frame a_hat
    Vec3 tau{1, 2, 3};
    Geometry geometry;
    std::vector<std::array<int, 3>> nodes;      // explicit 1-based nodes inside the medium
    std::vector<std::array<int, 3>> plus_nodes; // node together with its six axis neighbours
    double eps_i = 13.0;
    double eps_o = 1.0;
    SweepSettings sweep;
    std::vector<double> nfgep_gammas;
    std::vector<std::string> tasks;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;
    int dense_cap = kDefaultDimensionCap;
};

RunConfig parse_config(const json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
json config_to_json(const RunConfig& c);

LatticeSpec make_spec(const RunConfig& c);
MaterialMask make_mask(const RunConfig& c, const LatticeSpec& spec);

std::uint64_t fnv1a64(const std::string& bytes);
/// FNV-1a over the compact canonical config, leaving out threads and output_dir.
std::string config_hash(const RunConfig& c);

/// JSON text with every floating-point number printed to 17 significant digits.
std::string dump_json(const json& j, int indent = 2);
std::string format_double(double x);

json complex_to_json(cd z);
cd complex_from_json(const json& j);

/// Writes through a temporary file in the same directory followed by rename.
void write_atomic(const std::string& path, const std::string& content);

std::string curves_csv(const EigenCurveSet& set);
json event_to_json(const BifurcationEvent& ev);
json events_to_json(const std::vector<BifurcationEvent>& events);

} // namespace chiralcurl
