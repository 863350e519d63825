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

// Two-state, two-mode linear vibronic coupling (LVC) model:
//
//   H = -dE/2 Sz + w1 N1 + w2 N2 + (kappa/sqrt2) Sz (a1 + a1^dag) + (lambda/sqrt2) Sx (a2 + a2^dag)
//
// Parameters are stored as nu = omega / 2pi in THz; the operators are built
// in angular units (rad/ps) and time is measured in ps.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibrosim/density_matrix.hpp"
#include "vibrosim/fock.hpp"

namespace vibrosim {

struct MoleculeParams {
    std::string name;
    double nu1 = 0.0;       // mode 1 frequency, THz
    double nu2 = 0.0;       // mode 2 frequency, THz
    double delta_e = 0.0;   // electronic gap, THz
    double kappa = 0.0;     // tuning, THz (may be negative)
    double lambda = 0.0;    // coupling, THz
    double alpha = 0.0;     // initial mode-1 displacement, dimensionless
    std::string label_upper;  // display label of |1>
    std::string label_lower;  // display label of |0>
    // Tabulated simulator scaling factor, when the molecule ships with one.
    std::optional<double> scaling;

    void validate() const;

    friend bool operator==(const MoleculeParams&, const MoleculeParams&) = default;
};

// THz -> rad/ps.
constexpr double angular(double nu_thz) { return kTwoPi * nu_thz; }

const std::vector<MoleculeParams>& molecule_presets();
const MoleculeParams& molecule_preset(std::string_view name);

// The Hamiltonian split into the three simultaneously driven interactions:
// {-dE/2 Sz}, {w1 N1 + kappa Sz Q1}, {w2 N2 + lambda Sx Q2}.
struct HamiltonianTerms {
    CompositeOperator electronic;
    CompositeOperator mode1;
    CompositeOperator mode2;

    std::vector<CompositeOperator> ordered() const { return {electronic, mode1, mode2}; }
    CompositeOperator sum() const { return electronic + mode1 + mode2; }
};

HamiltonianTerms hamiltonian_terms(const MoleculeParams& params, FockCutoff cutoff);
CompositeOperator build_hamiltonian(const MoleculeParams& params, FockCutoff cutoff);

// |1> (x) D(alpha)|0> (x) |0>.
StateVector initial_state(const MoleculeParams& params, FockCutoff cutoff);

// |1><1| (x) I (x) I
CompositeOperator upper_projector(FockCutoff cutoff);
CompositeOperator mode_number(int mode, FockCutoff cutoff);

inline constexpr double kNormalizationTolerance = 1e-6;

double diabatic_population(const StateVector& state);
double diabatic_population(const DensityMatrix& state);

struct GridSpec {
    double q_min = -4.0;
    double q_max = 4.0;
    int points = 161;

    std::vector<double> axis() const;
};

struct SurfaceGrid {
    std::vector<double> q1_points;
    std::vector<double> q2_points;
    // Row i corresponds to q1_points[i], column j to q2_points[j]; rad/ps.
    Eigen::MatrixXd lower;
    Eigen::MatrixXd upper;
};

struct SurfacePoint {
    double lower;
    double upper;
};

SurfacePoint adiabatic_energies(const MoleculeParams& params, double q1, double q2);
SurfaceGrid adiabatic_surfaces(const MoleculeParams& params, const GridSpec& q1_grid, const GridSpec& q2_grid);
SurfaceGrid adiabatic_surfaces(const MoleculeParams& params, const GridSpec& grid = {});

// (Q1, Q2) of the conical intersection; empty when kappa = 0 and dE != 0.
std::optional<std::pair<double, double>> conical_intersection(const MoleculeParams& params);

}  // namespace vibrosim
