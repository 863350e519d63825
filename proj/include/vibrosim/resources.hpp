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

// Qubit-only cost model for the same simulation: binary (Gray-code) qubit
// registers per mode, a first-order Trotter step count meeting an MSE budget,
// and a CNOT total from a per-step count supplied by the caller.

#include <optional>
#include <string>

#include "vibrosim/propagator.hpp"

namespace vibrosim {

struct ResourceEstimate {
    int qubits = 0;
    int trotter_steps = 0;
    long long cnot_per_step = 0;
    long long cnot_total = 0;
    double mse_achieved = 0.0;
    bool steps_pinned = false;  // trotter_steps supplied rather than searched
};

inline constexpr double kDefaultMseTarget = 0.0034;
inline constexpr long long kDefaultCnotPerStep = 1000;
inline constexpr int kDefaultStepCeiling = 100000;

// n_modes * ceil(log2 n_fock) + 1
int qubit_count(int n_fock, int n_modes);

// Mean over samples of the squared difference of one column (default P_diabatic).
double mse(const TimeSeries& a, const TimeSeries& b, std::string_view column = "P_diabatic");

struct TrotterSearchSettings {
    int n_points = kDefaultSamplePoints;
    int step_ceiling = kDefaultStepCeiling;
    EvolutionSettings evolution{};
};

// MSE of the n-step first-order Trotter trace against exact propagation.
double trotter_mse(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs, int n_steps,
                   const TrotterSearchSettings& settings = {});

struct StepSearchResult {
    int steps = 0;
    double mse = 0.0;
};

// Smallest n with trotter_mse(n) <= target: doubling bracket, then bisection.
StepSearchResult trotter_steps_for_mse(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs,
                                       double target_mse, const TrotterSearchSettings& settings = {});

struct EstimateRequest {
    double t_max_fs = 0.0;
    double target_mse = kDefaultMseTarget;
    long long cnot_per_step = kDefaultCnotPerStep;
    std::optional<int> pinned_steps;
    TrotterSearchSettings search{};
};

ResourceEstimate estimate(const MoleculeParams& params, FockCutoff cutoff, const EstimateRequest& request);

std::string format_report(const ResourceEstimate& estimate, const MoleculeParams& params, FockCutoff cutoff,
                          const EstimateRequest& request);
std::string to_key_value(const ResourceEstimate& estimate);

}  // namespace vibrosim
