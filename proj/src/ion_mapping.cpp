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

#include "vibrosim/ion_mapping.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "ion_mapping";
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// R_x(theta) = exp(-i theta Sx / 2)
Eigen::Matrix2cd rx(double theta) {
    Eigen::Matrix2cd r;
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    r << c, -kI * s, -kI * s, c;
    return r;
}

Eigen::Matrix2cd dense2(const SparseMatrix& m) { return Eigen::Matrix2cd(DenseMatrix(m)); }

SparseMatrix sparse2(const Eigen::Matrix2cd& m) {
    SparseMatrix out = DenseMatrix(m).sparseView();
    // Rotations leave rounding residue on entries that vanish exactly.
    out.prune([](Index, Index, const cplx& v) { return std::abs(v) > 1e-14; });
    out.makeCompressed();
    return out;
}

Eigen::Matrix2cd drive_operator(double phase, bool sandwich) {
    Eigen::Matrix2cd op = std::cos(phase) * dense2(pauli::x()) + std::sin(phase) * dense2(pauli::y());
    if (sandwich) op = rx(kHalfPi) * op * rx(-kHalfPi);
    return op;
}

std::string sci(double v) { return fmt::format("{:.8e}", v); }

}  // namespace

std::string_view to_string(SdfBasis basis) {
    switch (basis) {
        case SdfBasis::x: return "x";
        case SdfBasis::y: return "y";
        case SdfBasis::z: return "z";
    }
    return "?";
}

double scaling_factor(const MoleculeParams& params, double omega1_rabi) {
    params.validate();
    if (params.kappa == 0.0) {
        throw Error(kModule, "kappa = 0 leaves the scaling factor undetermined; supply F explicitly");
    }
    if (!(omega1_rabi > 0.0) || !std::isfinite(omega1_rabi)) {
        throw Error(kModule, "Rabi frequency Omega1 must be positive and finite");
    }
    const double kappa = angular(std::abs(params.kappa)) * kPerPsToPerS;
    return omega1_rabi / (std::sqrt(2.0) * kappa);
}

double rabi_for_scaling(const MoleculeParams& params, double scaling) {
    params.validate();
    if (!(scaling > 0.0) || !std::isfinite(scaling)) throw Error(kModule, "scaling factor must be positive");
    return std::sqrt(2.0) * scaling * angular(std::abs(params.kappa)) * kPerPsToPerS;
}

PulseProgram compile_pulse_program(const MoleculeParams& params, const ScalingChoice& choice, const TrapConfig& trap) {
    params.validate();
    if (choice.scaling.has_value() == choice.omega1_rabi.has_value()) {
        throw Error(kModule, "give exactly one of the scaling factor F or the Rabi frequency Omega1");
    }
    const double f = choice.scaling ? *choice.scaling : scaling_factor(params, *choice.omega1_rabi);
    if (!(f > 0.0) || !std::isfinite(f)) throw Error(kModule, "scaling factor must be positive and finite");

    const auto ion = [&](double nu_thz) { return f * angular(nu_thz) * kPerPsToPerS; };
    PulseProgram program;
    program.molecule = params.name;
    program.scaling = f;
    program.trap_freqs = trap.secular;
    program.sdf_terms = {
        {0, ion(params.nu1), std::sqrt(2.0) * ion(params.kappa), SdfBasis::z, kHalfPi, true},
        {1, ion(params.nu2), std::sqrt(2.0) * ion(params.lambda), SdfBasis::x, 0.0, false},
    };
    program.qubit_drive = -ion(params.delta_e);

    for (std::size_t k = 0; k < program.sdf_terms.size(); ++k) {
        const SdfTerm& term = program.sdf_terms[k];
        if (std::abs(term.rabi) > trap.rabi_ceiling) {
            throw Error(kModule, fmt::format("SDF term {} (mode {}) needs |Omega|/2pi = {:.6g} Hz, above the "
                                             "laser-power ceiling {:.6g} Hz",
                                             k + 1, term.mode + 1, std::abs(term.rabi) / kTwoPi,
                                             trap.rabi_ceiling / kTwoPi));
        }
    }
    if (!trap.secular.empty()) {
        const double lowest = *std::min_element(trap.secular.begin(), trap.secular.end());
        for (std::size_t k = 0; k < program.sdf_terms.size(); ++k) {
            const double ratio = std::abs(program.sdf_terms[k].detuning) / lowest;
            if (ratio >= 0.1) {
                program.notes.push_back(fmt::format(
                    "sdf.{} detuning is {:.3g} of the lowest secular frequency; sideband resolution is doubtful",
                    k + 1, ratio));
            }
        }
    }
    if (program.qubit_drive == 0.0) program.notes.push_back("qubit drive disabled (zero electronic gap)");
    return program;
}

CompositeOperator ion_hamiltonian(const PulseProgram& program, FockCutoff cutoff) {
    const SparseMatrix id = identity_matrix(cutoff.mode_dim());
    const SparseMatrix q = annihilation_matrix(cutoff) + creation_matrix(cutoff);
    const SparseMatrix num = number_matrix(cutoff);
    CompositeOperator h{cutoff, SparseMatrix(cutoff.composite_dim(), cutoff.composite_dim())};
    for (const SdfTerm& term : program.sdf_terms) {
        const SparseMatrix qubit = sparse2(drive_operator(term.phase, term.rx_sandwich));
        const SparseMatrix& m1 = term.mode == 0 ? q : id;
        const SparseMatrix& m2 = term.mode == 0 ? id : q;
        h += 0.5 * term.rabi * tensor_composite(qubit, m1, m2, cutoff);
        h += term.detuning * lift_mode(num, term.mode, cutoff);
    }
    if (program.qubit_drive != 0.0) {
        const SparseMatrix qubit = sparse2(drive_operator(kHalfPi, program.qubit_rx_sandwich));
        h += 0.5 * program.qubit_drive * lift_qubit(qubit, cutoff);
    }
    h.matrix.prune(cplx(0.0));
    return h;
}

std::string to_text(const PulseProgram& program) {
    std::ostringstream out;
    out << "# pulse program (angular frequencies in rad/s, frequencies in Hz)\n";
    out << "molecule = " << program.molecule << '\n';
    out << "scaling_factor = " << sci(program.scaling) << '\n';
    out << "time.ion_per_molecular = " << sci(1.0 / program.scaling) << '\n';
    out << "sdf.count = " << program.sdf_terms.size() << '\n';
    for (std::size_t k = 0; k < program.sdf_terms.size(); ++k) {
        const SdfTerm& t = program.sdf_terms[k];
        const std::string p = fmt::format("sdf.{}.", k + 1);
        out << p << "mode = " << t.mode + 1 << '\n';
        out << p << "basis = " << to_string(t.basis) << '\n';
        out << p << "phase_rad = " << sci(t.phase) << '\n';
        out << p << "rx_sandwich = " << (t.rx_sandwich ? "true" : "false") << '\n';
        out << p << "detuning_rad_s = " << sci(t.detuning) << '\n';
        out << p << "detuning_hz = " << sci(t.detuning / kTwoPi) << '\n';
        out << p << "rabi_rad_s = " << sci(t.rabi) << '\n';
        out << p << "rabi_hz = " << sci(t.rabi / kTwoPi) << '\n';
    }
    out << "qubit.enabled = " << (program.qubit_drive != 0.0 ? "true" : "false") << '\n';
    out << "qubit.chi_rad_s = " << sci(program.qubit_drive) << '\n';
    out << "qubit.chi_hz = " << sci(program.qubit_drive / kTwoPi) << '\n';
    out << "qubit.rx_sandwich = " << (program.qubit_rx_sandwich ? "true" : "false") << '\n';
    out << "trap.secular_hz =";
    for (std::size_t k = 0; k < program.trap_freqs.size(); ++k) {
        out << (k ? ", " : " ") << sci(program.trap_freqs[k] / kTwoPi);
    }
    out << '\n';
    for (std::size_t k = 0; k < program.notes.size(); ++k) out << "note." << k + 1 << " = " << program.notes[k] << '\n';
    return out.str();
}

double map_dissipation(double molecular_rate_per_ps, double scaling) {
    if (!(scaling > 0.0)) throw Error(kModule, "scaling factor must be positive");
    return molecular_rate_per_ps * (scaling * kPerPsToPerS);
}

double unmap_dissipation(double ion_rate_per_s, double scaling) {
    if (!(scaling > 0.0)) throw Error(kModule, "scaling factor must be positive");
    const double factor = scaling * kPerPsToPerS;
    const double quotient = ion_rate_per_s / factor;
    // Rounding makes the forward map many-to-one: neighbouring rates can land
    // on the same ion rate, and the plain quotient may sit one ulp off. Among
    // the exact preimages next to the quotient, prefer the one with the
    // shortest decimal form, which is the value a user would have typed.
    double best = quotient;
    std::size_t best_digits = std::numeric_limits<std::size_t>::max();
    for (double candidate : {quotient, std::nextafter(quotient, 0.0), std::nextafter(quotient, INFINITY)}) {
        if (candidate * factor != ion_rate_per_s) continue;
        char buffer[32];
        const auto end = std::to_chars(buffer, buffer + sizeof buffer, candidate).ptr;
        const auto digits = std::size_t(end - buffer);
        if (digits < best_digits) {
            best = candidate;
            best_digits = digits;
        }
    }
    return best;
}

double projection_noise(double probability, int shots) {
    if (shots < 1) throw Error(kModule, "shot count must be at least 1");
    return std::sqrt(probability * (1.0 - probability) / shots);
}

ShotRecord emulate_measurement(double probability, int shots, std::uint64_t seed) {
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw Error(kModule, "probability must lie in [0, 1], got " + std::to_string(probability));
    }
    if (shots < 1) throw Error(kModule, "shot count must be at least 1");
    // Bernoulli trials on 53-bit uniforms keep the draw identical across
    // standard libraries (std::binomial_distribution is not portable).
    std::mt19937_64 engine(seed);
    int count = 0;
    for (int k = 0; k < shots; ++k) {
        const double u = double(engine() >> 11) * 0x1.0p-53;
        if (u < probability) ++count;
    }
    const double estimate = double(count) / shots;
    return {estimate, projection_noise(estimate, shots), shots, seed};
}

std::vector<ShotRecord> emulate_series(const std::vector<double>& probabilities, int shots, std::uint64_t seed) {
    std::vector<ShotRecord> out;
    out.reserve(probabilities.size());
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        // Integration round-off can push P a hair outside [0, 1].
        const double p = std::clamp(probabilities[k], 0.0, 1.0);
        out.push_back(emulate_measurement(p, shots, seed + k));
    }
    return out;
}

}  // namespace vibrosim
