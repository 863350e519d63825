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

// vibrosim: command-line front end.
//
//   vibrosim <command> --config <path> [--molecule <preset>] [--out <path>] [--seed <int>]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vibrosim/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vibrosim: vibronic wavepacket dynamics, ion-trap mapping and resource estimates"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<std::string> molecule;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;

    const char* descriptions[][2] = {
        {"simulate", "closed-system population trace (CSV)"},
        {"open", "open-system Lindblad trace (CSV)"},
        {"surfaces", "adiabatic potential energy surfaces on a grid (CSV)"},
        {"ionmap", "compile the trapped-ion pulse program (key-value text)"},
        {"resources", "qubit-only resource estimate (report + key-value text)"},
        {"converge", "Fock-cutoff convergence table (CSV)"},
    };
    for (const auto& [name, help] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("--molecule", molecule, "molecule preset (allene, butatriene, pyrazine)");
        sub->add_option("--out", out_path, "output path (default: standard output)");
        sub->add_option("--seed", seed, "measurement emulation seed");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string name = app.get_subcommands().front()->get_name();
    const auto command = vibrosim::parse_command(name);

    vibrosim::RunConfig config;
    try {
        if (!config_path.empty()) {
            config = vibrosim::load_config(config_path);
        } else if (!molecule) {
            std::cerr << "error: cli_io: either --config or --molecule is required\n";
            return 2;
        }
        if (molecule) {
            config.molecule.reset();
            config.preset = *molecule;
        }
        if (out_path) config.output_path = *out_path;
        if (seed) {
            if (!config.measurement) config.measurement.emplace();
            config.measurement->seed = *seed;
        }
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return vibrosim::run(*command, config, std::cout, std::cerr);
}
