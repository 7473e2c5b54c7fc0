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

#include "chiralcurl/nfgep.hpp"
#include "chiralcurl/structure.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace chiralcurl {

/// Spectrum at one sample: 4n reduced values plus 2n trivial zeros, or the full pencil at gamma*.
struct SampleSpectrum {
    double gamma = 0;
    CVec values;
    std::vector<int> types; // +1, -1, 0 = unknown
    std::vector<char> infinite;
    std::vector<char> trivial;
    bool full_pencil = false;
};

SampleSpectrum solve_sample(const Problem& p, double gamma, bool with_types = true, int cap = kDefaultDimensionCap);

struct CurvePoint {
    cd value;
    int type = 0;
    bool infinite = false;
};

struct EigenCurveSet {
    double gamma_star = 0;
    std::vector<double> gammas;
    std::vector<std::vector<CurvePoint>> curves; // [curve][sample]
    std::vector<char> trivial;                   // curve is a trivial zero
    std::vector<std::vector<int>> matching;      // [sample][curve] -> index in that sample's spectrum
    std::vector<std::pair<double, double>> ambiguous; // intervals with cost ties

    int num_curves() const { return static_cast<int>(curves.size()); }
    int num_samples() const { return static_cast<int>(gammas.size()); }
};

struct SweepOptions {
    int threads = 1;
    int cap = kDefaultDimensionCap;
    int max_halvings = 3; // adaptive refinement depth per coarse interval
};

/// Real for the purposes of tracking: |Im z| < 1e-8 (1 + |Re z|).
bool is_real_value(cd z);

/// Minimum-cost assignment on a square cost matrix; returns row -> column.
std::vector<int> assign_min_cost(const RMat& cost);

EigenCurveSet sweep(const Problem& p, std::vector<double> grid, const SweepOptions& opt = {});

enum class EventKind { imaginary_birth, collision_split, real_collision_merge, new_ground_state };

std::string to_string(EventKind k);

struct BifurcationEvent {
    EventKind kind = EventKind::imaginary_birth;
    double gamma_located = 0;
    cd location;
    double gamma_lo = 0, gamma_hi = 0;
    double coarse_lo = 0, coarse_hi = 0;
    std::array<int, 2> curves{-1, -1};
    bool has_types = false;
    std::array<int, 2> types_after{0, 0}; // (mu_left, mu_right)
    bool confident = true;
};

std::vector<BifurcationEvent> detect_events(const EigenCurveSet& set);

using SpectrumFn = std::function<CVec(double)>;

/// Bisection on the event indicator until gamma_hi - gamma_lo <= tol.
BifurcationEvent refine_event(const BifurcationEvent& ev, const SpectrumFn& solver, double tol = 1e-9);

/// Refines every event of a sweep; events sharing a coarse bracket and kind share the bisection.
/// Collision splits additionally receive reduced types of the two emerging real values.
void refine_events(const Problem& p, std::vector<BifurcationEvent>& events, double tol = 1e-9,
                   int cap = kDefaultDimensionCap);

struct ScalingFit {
    double slope_imag = 0;  // log |Im beta| against log (gamma_1 - gamma)
    double slope_split = 0; // log (alpha_r - alpha_l) against log (gamma - gamma_1)
    std::vector<double> offsets;
    std::vector<double> imag_parts, splits;
    bool ok = false;
};

ScalingFit collision_scaling(const Problem& p, const BifurcationEvent& ev,
                             std::vector<double> offsets = {1e-6, 3e-6, 1e-5, 3e-5, 1e-4});

struct InertiaJump {
    InertiaSignature before, after;
    int d_plus = 0, d_minus = 0, d_zero = 0;
    bool dichotomy = false; // (d_plus, d_minus) = (t, -t) with no change in the zero class
};

InertiaJump event_inertia_jump(const Problem& p, const BifurcationEvent& ev, int cap = kDefaultDimensionCap);

struct ImaginaryAxisSample {
    double gamma = 0;
    cd omega;
    double outside_leak = 0;     // max |(I_3 (x) I_o) e| / max |e|
    double real_coupling = 0;    // |Re e^H I_i C e| / (||e|| ||C e||)
    double formula_error = 0;    // relative error of |omega| = (gamma^2 - eps_i)^{-1/2} ||C e|| / ||e||
    double identity_error = 0;   // relative error of |omega|^2 = c / ((gamma^2 - eps_i) a_i - eps_o a_o)
};

struct ImaginaryAxisReport {
    std::vector<ImaginaryAxisSample> samples;
    double max_leak = 0, max_coupling = 0, max_formula_error = 0, max_identity_error = 0;
    bool monotone = false; // |omega| strictly decreasing across the ascending gammas
    bool leak_ok = false, formula_ok = false;
    bool passed() const { return leak_ok && formula_ok && monotone; }
};

/// Checks every nonreal eigenpair at each gamma (all gammas must exceed gamma*).
ImaginaryAxisReport verify_imaginary_axis(const Problem& p, const std::vector<double>& gammas,
                                          int cap = kDefaultDimensionCap);

} // namespace chiralcurl
