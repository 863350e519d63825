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

// Molecule -> trapped-ion compilation. The ion Hamiltonian is F * H_mol,
// realized as two spin-dependent forces (SDF) plus a qubit drive:
//
//   H_ion = H^SDF_{1,z}(F w1, sqrt2 F kappa) + H^SDF_{2,x}(F w2, sqrt2 F lambda) + H^Q_z(-F dE)
//   H^SDF_{j,phi}(delta, Omega) = Omega/2 (Sx cos phi + Sy sin phi)(a_j + a_j^dag) + delta a_j^dag a_j
//
// Ion-frame quantities are SI angular frequencies (rad/s) and seconds.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vibrosim/lvc.hpp"

namespace vibrosim {

enum class SdfBasis { x, y, z };

std::string_view to_string(SdfBasis basis);

struct SdfTerm {
    int mode = 0;             // 0-based mode index
    double detuning = 0.0;    // delta, rad/s
    double rabi = 0.0;        // Omega, rad/s
    SdfBasis basis = SdfBasis::x;
    double phase = 0.0;       // laser phase phi_s of the underlying x/y-basis drive
    // z-basis forces are a y-basis force wrapped in R_x(pi/2) ... R_x(-pi/2).
    bool rx_sandwich = false;
};

struct TrapConfig {
    // Secular frequencies of the trap, rad/s.
    std::vector<double> secular = {kTwoPi * 1.33e6, kTwoPi * 1.51e6, kTwoPi * 0.5e6};
    // Laser-power ceiling on any SDF Rabi frequency, rad/s.
    double rabi_ceiling = kTwoPi * 20e3;
};

struct PulseProgram {
    std::string molecule;
    double scaling = 0.0;           // F
    std::vector<SdfTerm> sdf_terms;
    double qubit_drive = 0.0;       // chi, rad/s; H^Q_z(chi) = chi Sz / 2
    bool qubit_rx_sandwich = true;  // H^Q_z is H^Q_y wrapped in R_x rotations
    std::vector<double> trap_freqs; // rad/s
    std::vector<std::string> notes; // sanity-check remarks

    // t_ion = t_mol / F (both in seconds).
    double ion_time(double molecular_seconds) const { return molecular_seconds / scaling; }
    double molecular_time(double ion_seconds) const { return ion_seconds * scaling; }
};

// Conversion between rad/ps and rad/s.
inline constexpr double kPerPsToPerS = 1e12;

// F = Omega1 / (sqrt2 |kappa|), kappa in rad/s.
double scaling_factor(const MoleculeParams& params, double omega1_rabi);
// Omega1 = sqrt2 F |kappa|.
double rabi_for_scaling(const MoleculeParams& params, double scaling);

// Exactly one of the two must be given.
struct ScalingChoice {
    std::optional<double> scaling;
    std::optional<double> omega1_rabi;  // rad/s
};

PulseProgram compile_pulse_program(const MoleculeParams& params, const ScalingChoice& choice,
                                   const TrapConfig& trap = {});

// Rebuilds H_ion (rad/s) from the program by applying the recorded basis rotations.
CompositeOperator ion_hamiltonian(const PulseProgram& program, FockCutoff cutoff);

// Key-value text block, one "key = value" per line.
std::string to_text(const PulseProgram& program);

// gamma [s^-1] = F * Gamma [ps^-1] * 1e12, and the inverse.
double map_dissipation(double molecular_rate_per_ps, double scaling);
// Inverse of map_dissipation: map(unmap(g)) == g on the image of map, and
// unmap(map(r)) == r for rates with a short decimal form such as 491.
double unmap_dissipation(double ion_rate_per_s, double scaling);

struct ShotRecord {
    double estimate = 0.0;
    double sigma = 0.0;
    int shots = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

// sigma = sqrt(P (1 - P) / M)
double projection_noise(double probability, int shots);

// Draws a binomial(M, P) count from a seeded mt19937_64 stream.
ShotRecord emulate_measurement(double probability, int shots, std::uint64_t seed);

// Applies emulate_measurement to every sample; sample k uses seed + k.
std::vector<ShotRecord> emulate_series(const std::vector<double>& probabilities, int shots, std::uint64_t seed);

}  // namespace vibrosim
