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

// Run configuration: a plain-text document of [section] headers and
// "key = value" lines. '#' starts a comment. Unknown sections or keys are
// errors. See README.md for the full schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vibrosim/ion_mapping.hpp"
#include "vibrosim/lindblad.hpp"
#include "vibrosim/lvc.hpp"
#include "vibrosim/propagator.hpp"

namespace vibrosim {

struct MeasurementConfig {
    int shots = 500;
    std::uint64_t seed = 0;

    friend bool operator==(const MeasurementConfig&, const MeasurementConfig&) = default;
};

struct ResourceConfig {
    double target_mse = 0.0034;
    long long cnot_per_step = 1000;
    std::optional<int> pinned_steps;
    int step_ceiling = 100000;
};

inline constexpr int kDefaultClosedCutoff = 32;
inline constexpr int kDefaultOpenCutoff = 24;

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<MoleculeParams> molecule;  // inline definition

    std::optional<int> cutoff;
    std::optional<double> t_max_fs;
    int n_points = kDefaultSamplePoints;
    EvolutionSettings evolution{};

    std::optional<DissipationRates> open_system;  // ps^-1, molecular frame
    OpenSettings open_settings{};

    std::optional<MeasurementConfig> measurement;

    std::optional<ScalingChoice> ion;  // present => a pulse program is in scope
    TrapConfig trap{};

    GridSpec surfaces{};
    ResourceConfig resources{};
    std::vector<int> converge_cutoffs = {16, 32};

    std::string output_path;  // empty => standard output

    void validate() const;
    MoleculeParams molecule_params() const;
    // Explicit cutoff, or 24 for open-system runs and 32 otherwise.
    FockCutoff cutoff_for(bool open) const;
    double window_fs() const;
    // Scaling factor of the pulse program in scope, if any.
    std::optional<double> scaling() const;
};

// Throws Error("cli_io", "line N: ...") on malformed input and
// Error("cli_io", "<field>: ...") on validation failures.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Emits a document that parse_config maps back onto the same values.
std::string serialize_config(const RunConfig& config);
std::string serialize_molecule(const MoleculeParams& params);

}  // namespace vibrosim
