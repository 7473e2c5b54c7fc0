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

#include "chiralcurl/io.hpp"

#include <string>
#include <vector>

namespace chiralcurl {

struct CommandOutcome {
    Status status = Status::ok;
    std::vector<std::string> files;
    json report;
};

CommandOutcome cmd_verify(const RunConfig& c, const std::string& out_dir);
CommandOutcome cmd_sweep(const RunConfig& c, const std::string& out_dir);
CommandOutcome cmd_analyze(const RunConfig& c, const std::string& out_dir);
CommandOutcome cmd_nfgep(const RunConfig& c, const std::string& out_dir);

/// Dispatches on "verify", "sweep", "analyze" or "nfgep"; an empty out_dir selects the config's output_dir.
CommandOutcome run_command(const std::string& name, const RunConfig& c, const std::string& out_dir = "");

} // namespace chiralcurl
