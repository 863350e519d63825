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

#include "vibrosim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "cli_io";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void line_error(int line, const std::string& message) {
    throw Error(kModule, fmt::format("line {}: {}", line, message));
}

double to_double(std::string_view v, int line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) line_error(line, fmt::format("'{}' is not a number", v));
    return out;
}

long long to_integer(std::string_view v, int line) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) line_error(line, fmt::format("'{}' is not an integer", v));
    return out;
}

int to_int(std::string_view v, int line) {
    const long long x = to_integer(v, line);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        line_error(line, fmt::format("'{}' is out of range", v));
    }
    return int(x);
}

std::string num(double v) { return fmt::format("{}", v); }

using Setter = std::function<void(std::string_view value, int line)>;

struct ParseState {
    RunConfig config;
    bool inline_molecule = false;
    MoleculeParams inline_params;
    std::set<std::string> inline_fields;
    std::optional<double> gamma_all;
    std::array<std::optional<double>, 4> gamma_mode;  // +1, -1, +2, -2
    std::optional<double> ion_scaling;
    std::optional<double> ion_rabi_hz;
};

std::map<std::string, std::map<std::string, Setter>> build_schema(ParseState& st) {
    RunConfig& c = st.config;
    auto field = [&st](std::string name, double MoleculeParams::*member) {
        return Setter([&st, name, member](std::string_view v, int line) {
            st.inline_molecule = true;
            st.inline_fields.insert(name);
            st.inline_params.*member = to_double(v, line);
        });
    };
    auto text = [&st](std::string name, std::string MoleculeParams::*member) {
        return Setter([&st, name, member](std::string_view v, int) {
            st.inline_molecule = true;
            st.inline_fields.insert(name);
            st.inline_params.*member = std::string(v);
        });
    };
    std::map<std::string, std::map<std::string, Setter>> schema;
    schema["molecule"] = {
        {"preset", [&c](std::string_view v, int) { c.preset = std::string(v); }},
        {"name", text("name", &MoleculeParams::name)},
        {"nu1", field("nu1", &MoleculeParams::nu1)},
        {"nu2", field("nu2", &MoleculeParams::nu2)},
        {"delta_e", field("delta_e", &MoleculeParams::delta_e)},
        {"kappa", field("kappa", &MoleculeParams::kappa)},
        {"lambda", field("lambda", &MoleculeParams::lambda)},
        {"alpha", field("alpha", &MoleculeParams::alpha)},
        {"label_upper", text("label_upper", &MoleculeParams::label_upper)},
        {"label_lower", text("label_lower", &MoleculeParams::label_lower)},
        {"scaling",
         [&st](std::string_view v, int line) {
             st.inline_molecule = true;
             st.inline_fields.insert("scaling");
             st.inline_params.scaling = to_double(v, line);
         }},
    };
    schema["evolution"] = {
        {"cutoff", [&c](std::string_view v, int line) { c.cutoff = to_int(v, line); }},
        {"t_max_fs", [&c](std::string_view v, int line) { c.t_max_fs = to_double(v, line); }},
        {"n_points", [&c](std::string_view v, int line) { c.n_points = to_int(v, line); }},
        {"tolerance", [&c](std::string_view v, int line) { c.evolution.tolerance = to_double(v, line); }},
        {"max_step_ps", [&c](std::string_view v, int line) { c.evolution.max_step = to_double(v, line); }},
        {"krylov_dim", [&c](std::string_view v, int line) { c.evolution.krylov_dim = to_int(v, line); }},
        {"method",
         [&c](std::string_view v, int line) {
             if (v == "exact") c.evolution.method = Method::exact;
             else if (v == "trotter") c.evolution.method = Method::trotter;
             else line_error(line, fmt::format("method must be 'exact' or 'trotter', got '{}'", v));
         }},
        {"trotter_steps", [&c](std::string_view v, int line) { c.evolution.trotter_steps = to_int(v, line); }},
    };
    auto gamma = [&st](int slot) {
        return Setter([&st, slot](std::string_view v, int line) { st.gamma_mode[slot] = to_double(v, line); });
    };
    schema["open_system"] = {
        {"gamma", [&st](std::string_view v, int line) { st.gamma_all = to_double(v, line); }},
        {"gamma_plus_1", gamma(0)},
        {"gamma_minus_1", gamma(1)},
        {"gamma_plus_2", gamma(2)},
        {"gamma_minus_2", gamma(3)},
        {"step_ps", [&c](std::string_view v, int line) { c.open_settings.step = to_double(v, line); }},
        {"accuracy", [&c](std::string_view v, int line) { c.open_settings.accuracy = to_double(v, line); }},
        {"stability", [&c](std::string_view v, int line) { c.open_settings.stability = to_double(v, line); }},
        {"positivity_checks",
         [&c](std::string_view v, int line) { c.open_settings.positivity_checks = to_int(v, line); }},
    };
    schema["measurement"] = {
        {"shots",
         [&c](std::string_view v, int line) {
             if (!c.measurement) c.measurement.emplace();
             c.measurement->shots = to_int(v, line);
         }},
        {"seed",
         [&c](std::string_view v, int line) {
             if (!c.measurement) c.measurement.emplace();
             const long long s = to_integer(v, line);
             if (s < 0) line_error(line, "seed must be non-negative");
             c.measurement->seed = std::uint64_t(s);
         }},
    };
    schema["ion"] = {
        {"scaling", [&st](std::string_view v, int line) { st.ion_scaling = to_double(v, line); }},
        {"omega1_rabi_hz", [&st](std::string_view v, int line) { st.ion_rabi_hz = to_double(v, line); }},
        {"rabi_ceiling_hz",
         [&c](std::string_view v, int line) { c.trap.rabi_ceiling = kTwoPi * to_double(v, line); }},
        {"secular_hz",
         [&c](std::string_view v, int line) {
             c.trap.secular.clear();
             std::string_view rest = v;
             while (!rest.empty()) {
                 const auto comma = rest.find(',');
                 c.trap.secular.push_back(kTwoPi * to_double(trim(rest.substr(0, comma)), line));
                 rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
             }
         }},
    };
    schema["surfaces"] = {
        {"q_min", [&c](std::string_view v, int line) { c.surfaces.q_min = to_double(v, line); }},
        {"q_max", [&c](std::string_view v, int line) { c.surfaces.q_max = to_double(v, line); }},
        {"points", [&c](std::string_view v, int line) { c.surfaces.points = to_int(v, line); }},
    };
    schema["resources"] = {
        {"target_mse", [&c](std::string_view v, int line) { c.resources.target_mse = to_double(v, line); }},
        {"cnot_per_step", [&c](std::string_view v, int line) { c.resources.cnot_per_step = to_integer(v, line); }},
        {"trotter_steps", [&c](std::string_view v, int line) { c.resources.pinned_steps = to_int(v, line); }},
        {"step_ceiling", [&c](std::string_view v, int line) { c.resources.step_ceiling = to_int(v, line); }},
    };
    schema["converge"] = {
        {"cutoffs",
         [&c](std::string_view v, int line) {
             c.converge_cutoffs.clear();
             std::string_view rest = v;
             while (!rest.empty()) {
                 const auto comma = rest.find(',');
                 c.converge_cutoffs.push_back(to_int(trim(rest.substr(0, comma)), line));
                 rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
             }
         }},
    };
    schema["output"] = {
        {"path", [&c](std::string_view v, int) { c.output_path = std::string(v); }},
    };
    return schema;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    ParseState st;
    const auto schema = build_schema(st);
    const std::map<std::string, Setter>* section = nullptr;
    std::string section_name;
    std::set<std::string> seen;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') line_error(line_no, "unterminated section header");
            section_name = std::string(trim(line.substr(1, line.size() - 2)));
            const auto it = schema.find(section_name);
            if (it == schema.end()) line_error(line_no, fmt::format("unknown section [{}]", section_name));
            section = &it->second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) line_error(line_no, "expected 'key = value'");
        if (!section) line_error(line_no, "key outside of any [section]");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto setter = section->find(key);
        if (setter == section->end()) {
            line_error(line_no, fmt::format("unknown key '{}' in section [{}]", key, section_name));
        }
        if (!seen.insert(section_name + "." + key).second) {
            line_error(line_no, fmt::format("duplicate key '{}' in section [{}]", key, section_name));
        }
        if (value.empty()) line_error(line_no, fmt::format("empty value for '{}'", key));
        setter->second(value, line_no);
    }

    RunConfig& c = st.config;
    if (st.inline_molecule) {
        for (const char* required : {"nu1", "nu2", "delta_e", "kappa", "lambda", "alpha"}) {
            if (!st.inline_fields.count(required)) {
                throw Error(kModule, fmt::format("molecule.{}: required for an inline molecule", required));
            }
        }
        if (st.inline_params.name.empty()) st.inline_params.name = "custom";
        c.molecule = st.inline_params;
    }

    const bool any_gamma = st.gamma_all || std::any_of(st.gamma_mode.begin(), st.gamma_mode.end(),
                                                       [](const auto& g) { return g.has_value(); });
    if (any_gamma) {
        DissipationRates rates = DissipationRates::equal(st.gamma_all.value_or(0.0));
        if (st.gamma_mode[0]) rates.modes[0].gamma_plus = *st.gamma_mode[0];
        if (st.gamma_mode[1]) rates.modes[0].gamma_minus = *st.gamma_mode[1];
        if (st.gamma_mode[2]) rates.modes[1].gamma_plus = *st.gamma_mode[2];
        if (st.gamma_mode[3]) rates.modes[1].gamma_minus = *st.gamma_mode[3];
        c.open_system = rates;
    }
    if (st.ion_scaling || st.ion_rabi_hz) {
        ScalingChoice choice;
        choice.scaling = st.ion_scaling;
        if (st.ion_rabi_hz) choice.omega1_rabi = kTwoPi * *st.ion_rabi_hz;
        c.ion = choice;
    }
    c.validate();
    return c;
}

void RunConfig::validate() const {
    const auto fail = [](const std::string& field, const std::string& message) {
        throw Error(kModule, field + ": " + message);
    };
    if (preset.has_value() == molecule.has_value()) {
        fail("molecule", preset ? "give either a preset or an inline molecule, not both"
                                : "a preset or an inline molecule is required");
    }
    if (preset) molecule_preset(*preset);
    if (molecule) molecule->validate();
    if (cutoff) FockCutoff{*cutoff};
    if (t_max_fs && !(*t_max_fs > 0.0 && std::isfinite(*t_max_fs))) fail("evolution.t_max_fs", "must be positive");
    if (n_points < 2) fail("evolution.n_points", "must be at least 2");
    evolution.validate();
    if (open_system) open_system->validate();
    open_settings.validate();
    if (measurement && measurement->shots < 1) fail("measurement.shots", "must be at least 1");
    if (ion) {
        if (ion->scaling.has_value() == ion->omega1_rabi.has_value()) {
            fail("ion", "give exactly one of 'scaling' or 'omega1_rabi_hz'");
        }
        if (ion->scaling && !(*ion->scaling > 0.0)) fail("ion.scaling", "must be positive");
        if (ion->omega1_rabi && !(*ion->omega1_rabi > 0.0)) fail("ion.omega1_rabi_hz", "must be positive");
    }
    if (!(trap.rabi_ceiling > 0.0)) fail("ion.rabi_ceiling_hz", "must be positive");
    surfaces.axis();
    if (!(resources.target_mse > 0.0)) fail("resources.target_mse", "must be positive");
    if (resources.cnot_per_step < 1) fail("resources.cnot_per_step", "must be positive");
    if (resources.pinned_steps && *resources.pinned_steps < 1) fail("resources.trotter_steps", "must be positive");
    if (resources.step_ceiling < 1) fail("resources.step_ceiling", "must be positive");
    if (converge_cutoffs.size() < 2) fail("converge.cutoffs", "needs at least two cutoffs");
    for (int n : converge_cutoffs) FockCutoff{n};
}

MoleculeParams RunConfig::molecule_params() const {
    if (preset) return molecule_preset(*preset);
    if (molecule) return *molecule;
    throw Error(kModule, "molecule: a preset or an inline molecule is required");
}

FockCutoff RunConfig::cutoff_for(bool open) const {
    return FockCutoff(cutoff.value_or(open ? kDefaultOpenCutoff : kDefaultClosedCutoff));
}

double RunConfig::window_fs() const { return t_max_fs.value_or(default_window_fs(molecule_params().name)); }

std::optional<double> RunConfig::scaling() const {
    if (!ion) return std::nullopt;
    if (ion->scaling) return ion->scaling;
    return scaling_factor(molecule_params(), *ion->omega1_rabi);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_molecule(const MoleculeParams& p) {
    std::ostringstream out;
    out << "[molecule]\n";
    out << "name = " << p.name << '\n';
    out << "nu1 = " << num(p.nu1) << '\n';
    out << "nu2 = " << num(p.nu2) << '\n';
    out << "delta_e = " << num(p.delta_e) << '\n';
    out << "kappa = " << num(p.kappa) << '\n';
    out << "lambda = " << num(p.lambda) << '\n';
    out << "alpha = " << num(p.alpha) << '\n';
    if (!p.label_upper.empty()) out << "label_upper = " << p.label_upper << '\n';
    if (!p.label_lower.empty()) out << "label_lower = " << p.label_lower << '\n';
    if (p.scaling) out << "scaling = " << num(*p.scaling) << '\n';
    return out.str();
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    if (c.preset) {
        out << "[molecule]\npreset = " << *c.preset << '\n';
    } else if (c.molecule) {
        out << serialize_molecule(*c.molecule);
    }
    out << "\n[evolution]\n";
    if (c.cutoff) out << "cutoff = " << *c.cutoff << '\n';
    if (c.t_max_fs) out << "t_max_fs = " << num(*c.t_max_fs) << '\n';
    out << "n_points = " << c.n_points << '\n';
    out << "tolerance = " << num(c.evolution.tolerance) << '\n';
    if (std::isfinite(c.evolution.max_step)) out << "max_step_ps = " << num(c.evolution.max_step) << '\n';
    out << "krylov_dim = " << c.evolution.krylov_dim << '\n';
    out << "method = " << (c.evolution.method == Method::trotter ? "trotter" : "exact") << '\n';
    if (c.evolution.trotter_steps > 0) out << "trotter_steps = " << c.evolution.trotter_steps << '\n';
    if (c.open_system) {
        out << "\n[open_system]\n";
        const auto& m = c.open_system->modes;
        out << "gamma_plus_1 = " << num(m[0].gamma_plus) << '\n';
        out << "gamma_minus_1 = " << num(m[0].gamma_minus) << '\n';
        out << "gamma_plus_2 = " << num(m[1].gamma_plus) << '\n';
        out << "gamma_minus_2 = " << num(m[1].gamma_minus) << '\n';
        out << "step_ps = " << num(c.open_settings.step) << '\n';
        out << "accuracy = " << num(c.open_settings.accuracy) << '\n';
        out << "stability = " << num(c.open_settings.stability) << '\n';
        out << "positivity_checks = " << c.open_settings.positivity_checks << '\n';
    }
    if (c.measurement) {
        out << "\n[measurement]\nshots = " << c.measurement->shots << "\nseed = " << c.measurement->seed << '\n';
    }
    const TrapConfig default_trap;
    const bool custom_trap =
        c.trap.secular != default_trap.secular || c.trap.rabi_ceiling != default_trap.rabi_ceiling;
    if (c.ion || custom_trap) {
        out << "\n[ion]\n";
        if (c.ion && c.ion->scaling) out << "scaling = " << num(*c.ion->scaling) << '\n';
        if (c.ion && c.ion->omega1_rabi) out << "omega1_rabi_hz = " << num(*c.ion->omega1_rabi / kTwoPi) << '\n';
        out << "rabi_ceiling_hz = " << num(c.trap.rabi_ceiling / kTwoPi) << '\n';
        if (!c.trap.secular.empty()) {
            out << "secular_hz = ";
            for (std::size_t k = 0; k < c.trap.secular.size(); ++k) {
                out << (k ? ", " : "") << num(c.trap.secular[k] / kTwoPi);
            }
            out << '\n';
        }
    }
    out << "\n[surfaces]\nq_min = " << num(c.surfaces.q_min) << "\nq_max = " << num(c.surfaces.q_max)
        << "\npoints = " << c.surfaces.points << '\n';
    out << "\n[resources]\ntarget_mse = " << num(c.resources.target_mse)
        << "\ncnot_per_step = " << c.resources.cnot_per_step << '\n';
    if (c.resources.pinned_steps) out << "trotter_steps = " << *c.resources.pinned_steps << '\n';
    out << "step_ceiling = " << c.resources.step_ceiling << '\n';
    out << "\n[converge]\ncutoffs = ";
    for (std::size_t k = 0; k < c.converge_cutoffs.size(); ++k) out << (k ? ", " : "") << c.converge_cutoffs[k];
    out << '\n';
    if (!c.output_path.empty()) out << "\n[output]\npath = " << c.output_path << '\n';
    return out.str();
}

}  // namespace vibrosim
