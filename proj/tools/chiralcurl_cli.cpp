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

#include "CLI11.hpp"

#include <cstdio>
#include <string>

namespace {

int finish(cc_status s) {
    if (s != CC_OK) std::fprintf(stderr, "chiralcurl: %s\n", cc_last_error());
    switch (s) {
    case CC_OK: return 0;
    case CC_INVARIANT_FAILURE: return 1;
    case CC_CONFIG_ERROR:
    case CC_INVALID_ARGUMENT: return 2;
    case CC_RESOURCE_CAP: return 3;
    default: return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete single-curl Maxwell operators in Pasteur media"};
    app.set_version_flag("--version", cc_version());
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    for (const char* name : {"verify", "sweep", "analyze", "nfgep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (defaults to output_dir in the config)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    cc_config* cfg = nullptr;
    cc_status s = cc_config_load(config_path.c_str(), &cfg);
    if (s != CC_OK) return finish(s);
    if (threads > 0 && (s = cc_config_set_threads(cfg, threads)) != CC_OK) {
        cc_config_free(cfg);
        return finish(s);
    }
    char* report = nullptr;
    s = cc_run(cfg, command.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &report);
    if (report) {
        std::fputs(report, stdout);
        std::fputc('\n', stdout);
        cc_string_free(report);
    }
    cc_config_free(cfg);
    return finish(s);
}
