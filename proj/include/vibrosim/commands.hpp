// Copyright 2026 The vibrosim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vibrosim/config.hpp"
#include "vibrosim/csv.hpp"

namespace vibrosim {

enum class Command { simulate, open, surfaces, ionmap, resources, converge };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

// Produces the command's artifact as text (CSV, pulse program, or report).
std::string render(Command command, const RunConfig& config);

// Each consecutive pair of the sorted cutoffs with max_t |P_a(t) - P_b(t)|.
// Traces are computed concurrently and merged in cutoff order.
CsvTable convergence_table(const MoleculeParams& params, std::vector<int> cutoffs, double t_max_fs, int n_points,
                           const EvolutionSettings& settings);

// Runs a command, writing the artifact to config.output_path (or `out` when
// empty). Any error is reported on `err` as "error: <module>: <message>";
// returns the process exit status.
int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace vibrosim
