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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vibrosim/commands.hpp"

using namespace vibrosim;

namespace {

constexpr double kButatrieneGap16To32 = 2.5987275339e-01;

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream cellstream(line);
        std::string cell;
        while (std::getline(cellstream, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

RunConfig small(const std::string& molecule, const std::string& extra = "") {
    return parse_config("[molecule]\npreset = " + molecule + "\n[evolution]\ncutoff = 6\nt_max_fs = 20\nn_points = 11\n" +
                        extra);
}

}  // namespace

TEST_CASE("preset config resolves to the tabulated parameters with defaults") {
    const RunConfig c = parse_config("# comment\n[molecule]\npreset = pyrazine  # trailing comment\n");
    CHECK(c.molecule_params() == molecule_preset("pyrazine"));
    CHECK(c.cutoff_for(false).n_max() == 32);
    CHECK(c.cutoff_for(true).n_max() == 24);
    CHECK(c.window_fs() == 500.0);
    CHECK(c.n_points == 400);
    CHECK_FALSE(c.open_system.has_value());
    CHECK_FALSE(c.measurement.has_value());
    CHECK_FALSE(c.scaling().has_value());
}

TEST_CASE("inline molecule") {
    const RunConfig c = parse_config(
        "[molecule]\nname = toy\nnu1 = 10\nnu2 = 20\ndelta_e = 5\nkappa = -3\nlambda = 4\nalpha = 0.1\n");
    const MoleculeParams p = c.molecule_params();
    CHECK(p.name == "toy");
    CHECK(p.kappa == -3.0);
    CHECK(c.window_fs() == 300.0);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\nnu1 = 10\nnu2 = 20\n"), doctest::Contains("molecule.delta_e"), Error);
}

TEST_CASE("validation errors name the field") {
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\nnu1 = 10\nnu2 = 1\ndelta_e = 0\nkappa = 1\n"
                                      "lambda = 1\nalpha = 0\n"),
                         doctest::Contains("not both"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\n[evolution]\nt_max_fs = -1\n"),
                         doctest::Contains("evolution.t_max_fs"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\n[evolution]\nn_points = 1\n"),
                         doctest::Contains("evolution.n_points"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[evolution]\ncutoff = 8\n"), doctest::Contains("required"), Error);
    CHECK_THROWS_AS(parse_config("[molecule]\npreset = nope\n"), Error);
    CHECK_THROWS_AS(parse_config("[molecule]\npreset = allene\n[ion]\nscaling = 1e-11\nomega1_rabi_hz = 900\n"), Error);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\n\n[evolution]\ncutof = 8\n"),
                         doctest::Contains("line 5: unknown key 'cutof'"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\n[bogus]\n"), doctest::Contains("line 3"), Error);
    CHECK_THROWS_WITH_AS(parse_config("preset = allene\n"), doctest::Contains("line 1"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\n[evolution]\ncutoff = eight\n"),
                         doctest::Contains("line 4"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule]\npreset = allene\npreset = allene\n"),
                         doctest::Contains("duplicate"), Error);
    CHECK_THROWS_WITH_AS(parse_config("[molecule\n"), doctest::Contains("line 1"), Error);
}

TEST_CASE("open-system rates: shared gamma with per-channel overrides") {
    const RunConfig c = parse_config("[molecule]\npreset = pyrazine\n[open_system]\ngamma = 491\ngamma_minus_2 = 7\n");
    REQUIRE(c.open_system.has_value());
    CHECK(c.open_system->modes[0].gamma_plus == 491.0);
    CHECK(c.open_system->modes[0].gamma_minus == 491.0);
    CHECK(c.open_system->modes[1].gamma_plus == 491.0);
    CHECK(c.open_system->modes[1].gamma_minus == 7.0);
    CHECK_THROWS_AS(parse_config("[molecule]\npreset = pyrazine\n[open_system]\ngamma = -1\n"), Error);
}

TEST_CASE("every preset round-trips through serialization") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const RunConfig inline_cfg = parse_config(serialize_molecule(p));
        CHECK(inline_cfg.molecule_params() == p);
        const RunConfig by_name = parse_config("[molecule]\npreset = " + p.name + "\n");
        const std::string text = serialize_config(by_name);
        CHECK(serialize_config(parse_config(text)) == text);
        CHECK(parse_config(text).molecule_params() == p);
    }
}

TEST_CASE("full config round-trips") {
    const std::string source =
        "[molecule]\npreset = butatriene\n[evolution]\ncutoff = 12\nt_max_fs = 150\nn_points = 50\n"
        "tolerance = 1e-11\nmethod = trotter\ntrotter_steps = 300\n[open_system]\ngamma = 122\naccuracy = 0.25\n"
        "[measurement]\nshots = 250\nseed = 17\n[ion]\nomega1_rabi_hz = 966\nsecular_hz = 1.2e6, 0.4e6\n"
        "[surfaces]\npoints = 21\n[resources]\ntrotter_steps = 300\n[converge]\ncutoffs = 8, 12, 16\n"
        "[output]\npath = out.csv\n";
    const RunConfig a = parse_config(source);
    const std::string text = serialize_config(a);
    const RunConfig b = parse_config(text);
    CHECK(serialize_config(b) == text);
    CHECK(b.evolution.method == Method::trotter);
    CHECK(b.evolution.trotter_steps == 300);
    CHECK(b.open_system == a.open_system);
    CHECK(b.measurement == a.measurement);
    CHECK(b.converge_cutoffs == std::vector<int>{8, 12, 16});
    REQUIRE(b.trap.secular.size() == 2);
    CHECK(b.trap.secular[1] == doctest::Approx(kTwoPi * 0.4e6).epsilon(1e-15));
    CHECK(*b.scaling() == doctest::Approx(*a.scaling()).epsilon(1e-15));
    CHECK(b.output_path == "out.csv");
}

TEST_CASE("CSV formatting and validation") {
    CsvTable t;
    t.header = {"t_fs", "x"};
    t.rows = {{0.0, 1.0}, {0.5, -1.234567891234e-3}};
    CHECK(t.str() == "t_fs,x\n0.00000000e+00,1.00000000e+00\n5.00000000e-01,-1.23456789e-03\n");
    t.rows.push_back({1.0, std::numeric_limits<double>::quiet_NaN()});
    CHECK_THROWS_WITH_AS(t.str(), doctest::Contains("non-finite"), Error);
    t.rows.back() = {0.5, 1.0};
    CHECK_THROWS_WITH_AS(t.str(), doctest::Contains("strictly increasing"), Error);
    t.rows.back() = {1.0};
    CHECK_THROWS_AS(t.str(), Error);

    CsvTable ints;
    ints.header = {"a", "b"};
    ints.integer_columns = {true, false};
    ints.time_ordered = false;
    ints.rows = {{16.0, 0.5}, {8.0, 0.25}};
    CHECK(ints.str() == "a,b\n16,5.00000000e-01\n8,2.50000000e-01\n");
}

TEST_CASE("ion time column appears when a pulse program is in scope") {
    TimeSeries ts({0.0, 100.0});
    ts.add_column("P_diabatic", {1.0, 0.9});
    const CsvTable t = to_table(ts, 1e-11);
    CHECK(t.header == std::vector<std::string>{"t_fs", "t_ion_ms", "P_diabatic"});
    CHECK(t.rows[1][1] == doctest::Approx(100.0e-15 / 1e-11 * 1e3));
    CHECK(to_table(ts).header.size() == 2);
}

TEST_CASE("simulate: CSV columns, P(0) = 1, deterministic with a seed") {
    const RunConfig c = small("pyrazine", "[measurement]\nseed = 3\nshots = 100\n");
    const std::string a = render(Command::simulate, c);
    CHECK(a == render(Command::simulate, c));
    const auto rows = split_csv(a);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"t_fs", "P_diabatic", "n1", "n2", "energy", "norm", "P_measured", "sigma"});
    CHECK(rows[1][1] == "1.00000000e+00");
    RunConfig other = c;
    other.measurement->seed = 4;
    CHECK(render(Command::simulate, other) != a);
}

TEST_CASE("open: trace and purity columns") {
    const RunConfig c = small("pyrazine", "[open_system]\ngamma = 50\n");
    const auto rows = split_csv(render(Command::open, c));
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"t_fs", "P_diabatic", "n1", "n2", "trace", "purity"});
    CHECK(rows[1][4] == "1.00000000e+00");
    CHECK_THROWS_WITH_AS(render(Command::open, small("pyrazine")), doctest::Contains("open_system"), Error);
}

TEST_CASE("surfaces, ionmap, resources, converge") {
    const auto surf = split_csv(render(Command::surfaces, small("allene", "[surfaces]\npoints = 3\n")));
    CHECK(surf.size() == 10);
    CHECK(surf[0] == std::vector<std::string>{"Q1", "Q2", "V_lower", "V_upper"});

    const std::string ion = render(Command::ionmap, small("butatriene"));
    CHECK(ion.find("scaling_factor = 1.10000000e-11") != std::string::npos);
    const std::string ion_rabi = render(Command::ionmap, small("butatriene", "[ion]\nomega1_rabi_hz = 966\n"));
    CHECK(ion_rabi.find("sdf.1.rabi_hz = 9.66000000e+02") != std::string::npos);

    const std::string res = render(Command::resources, small("butatriene", "[resources]\ntrotter_steps = 300\n"));
    CHECK(res.find("cnot_total = 300000") != std::string::npos);
    CHECK(res.find("qubits = 7") != std::string::npos);

    const auto conv = split_csv(render(Command::converge, small("butatriene", "[converge]\ncutoffs = 8, 4, 6\n")));
    REQUIRE(conv.size() == 3);
    CHECK(conv[0] == std::vector<std::string>{"cutoff_low", "cutoff_high", "max_abs_dP"});
    CHECK(conv[1][0] == "4");
    CHECK(conv[1][1] == "6");
    CHECK(conv[2][0] == "6");
    CHECK(conv[2][1] == "8");
}

TEST_CASE("butatriene convergence gap between cutoffs 16 and 32") {
    const auto& p = molecule_preset("butatriene");
    const CsvTable t = convergence_table(p, {32, 16}, 300.0, 400, {});
    REQUIRE(t.rows.size() == 1);
    const auto a = population_trace(p, FockCutoff(16), 300.0, 400).column("P_diabatic");
    const auto b = population_trace(p, FockCutoff(32), 300.0, 400).column("P_diabatic");
    double gap = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
    CHECK(t.rows[0][2] == gap);
    // Frozen from the first run. Cutoff 16 is far from converged for this
    // molecule: mode 2 reaches <n> ~ 12 within the window.
    CHECK(gap == doctest::Approx(kButatrieneGap16To32).epsilon(1e-6));
}

TEST_CASE("run reports module-qualified errors and a nonzero status") {
    RunConfig c = small("allene");
    c.output_path = "/nonexistent-dir/out.csv";
    std::ostringstream out, err;
    CHECK(run(Command::simulate, c, out, err) == 1);
    CHECK(err.str().rfind("error: cli_io: ", 0) == 0);

    std::ostringstream out2, err2;
    CHECK(run(Command::open, small("allene"), out2, err2) == 1);
    CHECK(err2.str().find("error: cli_io: open_system") == 0);
    CHECK(out2.str().empty());

    CHECK(parse_command("simulate") == Command::simulate);
    CHECK(parse_command("converge") == Command::converge);
    CHECK_FALSE(parse_command("plot").has_value());
    CHECK(to_string(Command::ionmap) == "ionmap");
}
