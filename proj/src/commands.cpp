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

#include "vibrosim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include <fmt/format.h>

#include "vibrosim/resources.hpp"

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "cli_io";

void add_measurement(TimeSeries& series, const RunConfig& config) {
    if (!config.measurement) return;
    const auto records = emulate_series(series.column("P_diabatic"), config.measurement->shots, config.measurement->seed);
    std::vector<double> estimate, sigma;
    for (const auto& r : records) {
        estimate.push_back(r.estimate);
        sigma.push_back(r.sigma);
    }
    series.add_column("P_measured", std::move(estimate));
    series.add_column("sigma", std::move(sigma));
}

std::string simulate(const RunConfig& config) {
    const MoleculeParams params = config.molecule_params();
    TimeSeries series =
        population_trace(params, config.cutoff_for(false), config.window_fs(), config.n_points, config.evolution);
    add_measurement(series, config);
    return to_table(series, config.scaling()).str();
}

std::string open_system(const RunConfig& config) {
    if (!config.open_system) throw Error(kModule, "open_system: section with dissipation rates is required");
    const MoleculeParams params = config.molecule_params();
    const FockCutoff cutoff = config.cutoff_for(true);
    const auto grid = uniform_grid(config.window_fs() / kFsPerPs, config.n_points);
    OpenEvolution result = evolve_open(build_hamiltonian(params, cutoff), *config.open_system,
                                       DensityMatrix::from_pure(initial_state(params, cutoff)), grid,
                                       config.open_settings);
    add_measurement(result.series, config);
    return to_table(result.series, config.scaling()).str();
}

std::string surfaces(const RunConfig& config) {
    const SurfaceGrid grid = adiabatic_surfaces(config.molecule_params(), config.surfaces);
    CsvTable table;
    table.header = {"Q1", "Q2", "V_lower", "V_upper"};
    table.time_ordered = false;
    for (std::size_t i = 0; i < grid.q1_points.size(); ++i) {
        for (std::size_t j = 0; j < grid.q2_points.size(); ++j) {
            table.rows.push_back({grid.q1_points[i], grid.q2_points[j], grid.lower(Index(i), Index(j)),
                                  grid.upper(Index(i), Index(j))});
        }
    }
    return table.str();
}

std::string ionmap(const RunConfig& config) {
    const MoleculeParams params = config.molecule_params();
    ScalingChoice choice;
    if (config.ion) {
        choice = *config.ion;
    } else if (params.scaling) {
        choice.scaling = params.scaling;
    } else {
        throw Error(kModule, "ion: no scaling factor; set [ion] scaling or omega1_rabi_hz");
    }
    return to_text(compile_pulse_program(params, choice, config.trap));
}

std::string resources(const RunConfig& config) {
    const MoleculeParams params = config.molecule_params();
    const FockCutoff cutoff = config.cutoff_for(false);
    EstimateRequest request;
    request.t_max_fs = config.window_fs();
    request.target_mse = config.resources.target_mse;
    request.cnot_per_step = config.resources.cnot_per_step;
    request.pinned_steps = config.resources.pinned_steps;
    request.search.n_points = config.n_points;
    request.search.step_ceiling = config.resources.step_ceiling;
    request.search.evolution = config.evolution;
    request.search.evolution.method = Method::exact;
    const ResourceEstimate e = estimate(params, cutoff, request);
    return format_report(e, params, cutoff, request) + "\n" + to_key_value(e);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (Command c : {Command::simulate, Command::open, Command::surfaces, Command::ionmap, Command::resources,
                      Command::converge}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::string_view to_string(Command command) {
    switch (command) {
        case Command::simulate: return "simulate";
        case Command::open: return "open";
        case Command::surfaces: return "surfaces";
        case Command::ionmap: return "ionmap";
        case Command::resources: return "resources";
        case Command::converge: return "converge";
    }
    return "?";
}

CsvTable convergence_table(const MoleculeParams& params, std::vector<int> cutoffs, double t_max_fs, int n_points,
                           const EvolutionSettings& settings) {
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
    if (cutoffs.size() < 2) throw Error(kModule, "converge needs at least two distinct cutoffs");

    EvolutionSettings exact = settings;
    exact.method = Method::exact;
    std::vector<std::future<TimeSeries>> pending;
    for (int n : cutoffs) {
        pending.push_back(std::async(std::launch::async, [&, n] {
            return population_trace(params, FockCutoff(n), t_max_fs, n_points, exact);
        }));
    }
    std::vector<TimeSeries> traces;
    for (auto& f : pending) traces.push_back(f.get());

    CsvTable table;
    table.header = {"cutoff_low", "cutoff_high", "max_abs_dP"};
    table.integer_columns = {true, true, false};
    table.time_ordered = false;
    for (std::size_t k = 0; k + 1 < cutoffs.size(); ++k) {
        const auto& a = traces[k].column("P_diabatic");
        const auto& b = traces[k + 1].column("P_diabatic");
        double worst = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s) worst = std::max(worst, std::abs(a[s] - b[s]));
        table.rows.push_back({double(cutoffs[k]), double(cutoffs[k + 1]), worst});
    }
    return table;
}

std::string render(Command command, const RunConfig& config) {
    config.validate();
    switch (command) {
        case Command::simulate: return simulate(config);
        case Command::open: return open_system(config);
        case Command::surfaces: return surfaces(config);
        case Command::ionmap: return ionmap(config);
        case Command::resources: return resources(config);
        case Command::converge:
            return convergence_table(config.molecule_params(), config.converge_cutoffs, config.window_fs(),
                                     config.n_points, config.evolution)
                .str();
    }
    throw Error(kModule, "unknown command");
}

int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const std::string artifact = render(command, config);
        if (config.output_path.empty()) {
            out << artifact;
        } else {
            std::ofstream file(config.output_path, std::ios::binary);
            if (!file) throw Error(kModule, "cannot open output file '" + config.output_path + "'");
            file << artifact;
            if (!file) throw Error(kModule, "failed writing '" + config.output_path + "'");
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << to_string(command) << ": " << e.what() << '\n';
    }
    return 1;
}

}  // namespace vibrosim
