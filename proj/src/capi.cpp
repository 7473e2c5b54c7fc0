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

#include "chiralcurl/chiralcurl.h"

#include "chiralcurl/commands.hpp"
#include "chiralcurl/io.hpp"
#include "chiralcurl/pencil.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct cc_config {
    chiralcurl::RunConfig cfg;
};

struct cc_problem {
    std::unique_ptr<chiralcurl::Problem> p;
};

namespace {

thread_local std::string last_error;

cc_status record(cc_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
cc_status guard(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const chiralcurl::Error& e) {
        return record(static_cast<cc_status>(e.status()), e.what());
    } catch (const std::bad_alloc&) {
        return record(CC_RESOURCE_CAP, "out of memory");
    } catch (const std::exception& e) {
        return record(CC_INTERNAL_ERROR, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* cc_version(void) { return chiralcurl::kVersion; }

const char* cc_last_error(void) { return last_error.c_str(); }

cc_status cc_config_load(const char* path, cc_config** out) {
    if (!path || !out) return record(CC_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *out = new cc_config{chiralcurl::load_config(path)};
        return CC_OK;
    });
}

cc_status cc_config_parse(const char* text, cc_config** out) {
    if (!text || !out) return record(CC_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *out = new cc_config{chiralcurl::parse_config_text(text)};
        return CC_OK;
    });
}

void cc_config_free(cc_config* cfg) { delete cfg; }

cc_status cc_config_set_threads(cc_config* cfg, int threads) {
    if (!cfg) return record(CC_INVALID_ARGUMENT, "null config");
    if (threads < 1) return record(CC_CONFIG_ERROR, "threads must be at least 1");
    cfg->cfg.threads = threads;
    return CC_OK;
}

const char* cc_config_output_dir(const cc_config* cfg) { return cfg ? cfg->cfg.output_dir.c_str() : ""; }

cc_status cc_config_hash(const cc_config* cfg, char* buf, size_t size) {
    if (!cfg || !buf || size < 17) return record(CC_INVALID_ARGUMENT, "hash buffer must hold 17 bytes");
    return guard([&] {
        const std::string h = chiralcurl::config_hash(cfg->cfg);
        std::memcpy(buf, h.c_str(), h.size() + 1);
        return CC_OK;
    });
}

cc_status cc_problem_create(const cc_config* cfg, cc_problem** out) {
    if (!cfg || !out) return record(CC_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        const chiralcurl::LatticeSpec spec = chiralcurl::make_spec(cfg->cfg);
        auto p = std::make_unique<chiralcurl::Problem>(spec, chiralcurl::make_mask(cfg->cfg, spec), cfg->cfg.tau);
        *out = new cc_problem{std::move(p)};
        return CC_OK;
    });
}

void cc_problem_free(cc_problem* p) { delete p; }

int cc_problem_size(const cc_problem* p) { return p ? p->p->n() : 0; }

int cc_problem_inside_nodes(const cc_problem* p) { return p ? p->p->mask().count_inside() : 0; }

double cc_problem_gamma_star(const cc_problem* p) { return p ? p->p->gamma_star() : 0.0; }

cc_status cc_run(const cc_config* cfg, const char* command, const char* out_dir, char** report) {
    if (!cfg || !command) return record(CC_INVALID_ARGUMENT, "null argument");
    if (report) *report = nullptr;
    return guard([&] {
        const auto outcome = chiralcurl::run_command(command, cfg->cfg, out_dir ? out_dir : "");
        if (report) {
            chiralcurl::json r = {{"status", static_cast<int>(outcome.status)},
                                  {"files", outcome.files},
                                  {"report", outcome.report}};
            *report = copy_string(chiralcurl::dump_json(r));
        }
        if (outcome.status != chiralcurl::Status::ok)
            last_error = "invariant check failed; see the written report";
        return static_cast<cc_status>(outcome.status);
    });
}

void cc_string_free(char* s) { std::free(s); }

} // extern "C"
