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

#include "vibrosim/lvc.hpp"

#include <cmath>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "lvc_model";

// Dimensionless position operator Q = (a + a^dag) / sqrt2.
SparseMatrix position_matrix(FockCutoff cutoff) {
    SparseMatrix q = annihilation_matrix(cutoff) + creation_matrix(cutoff);
    q *= cplx(1.0 / std::sqrt(2.0));
    return q;
}

}  // namespace

void MoleculeParams::validate() const {
    const auto check_finite = [&](double v, const char* field) {
        if (!std::isfinite(v)) throw Error(kModule, std::string("parameter '") + field + "' must be finite");
    };
    check_finite(nu1, "nu1");
    check_finite(nu2, "nu2");
    check_finite(delta_e, "delta_e");
    check_finite(kappa, "kappa");
    check_finite(lambda, "lambda");
    check_finite(alpha, "alpha");
    if (nu1 <= 0.0) throw Error(kModule, "parameter 'nu1' must be positive");
    if (nu2 <= 0.0) throw Error(kModule, "parameter 'nu2' must be positive");
    if (scaling && !(std::isfinite(*scaling) && *scaling > 0.0)) {
        throw Error(kModule, "parameter 'scaling' must be positive and finite");
    }
}

const std::vector<MoleculeParams>& molecule_presets() {
    static const std::vector<MoleculeParams> presets = {
        {"allene", 22.5, 57.3, 0.0, 74.7, 67.7, 0.0, "pi_x", "pi_y", 1.08e-11},
        {"butatriene", 62.9, 22.0, 131.5, 62.1, 69.6, -0.140, "pi*", "pi", 1.10e-11},
        {"pyrazine", 17.9, 28.5, 199.0, -30.7, 63.3, 0.210, "pipi*", "npi*", 1.33e-11},
    };
    return presets;
}

const MoleculeParams& molecule_preset(std::string_view name) {
    for (const auto& p : molecule_presets()) {
        if (p.name == name) return p;
    }
    throw Error(kModule, "unknown molecule preset '" + std::string(name) + "' (known: allene, butatriene, pyrazine)");
}

HamiltonianTerms hamiltonian_terms(const MoleculeParams& params, FockCutoff cutoff) {
    params.validate();
    const SparseMatrix id = identity_matrix(cutoff.mode_dim());
    const SparseMatrix num = number_matrix(cutoff);
    const SparseMatrix q = position_matrix(cutoff);

    HamiltonianTerms terms{
        -0.5 * angular(params.delta_e) * lift_qubit(pauli::z(), cutoff),
        angular(params.nu1) * tensor_composite(pauli::identity(), num, id, cutoff) +
            angular(params.kappa) * tensor_composite(pauli::z(), q, id, cutoff),
        angular(params.nu2) * tensor_composite(pauli::identity(), id, num, cutoff) +
            angular(params.lambda) * tensor_composite(pauli::x(), id, q, cutoff),
    };
    for (auto* term : {&terms.electronic, &terms.mode1, &terms.mode2}) term->matrix.prune(cplx(0.0));
    return terms;
}

CompositeOperator build_hamiltonian(const MoleculeParams& params, FockCutoff cutoff) {
    return hamiltonian_terms(params, cutoff).sum();
}

StateVector initial_state(const MoleculeParams& params, FockCutoff cutoff) {
    params.validate();
    const CoherentAmplitudes displaced = coherent_state(params.alpha, cutoff);
    return product_state(qubit_state(1), displaced.amplitudes, fock_state(0, cutoff));
}

CompositeOperator upper_projector(FockCutoff cutoff) { return lift_qubit(pauli::projector(1), cutoff); }

CompositeOperator mode_number(int mode, FockCutoff cutoff) { return lift_mode(number_matrix(cutoff), mode, cutoff); }

double diabatic_population(const StateVector& state) {
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > kNormalizationTolerance) {
        throw Error(kModule, "diabatic_population requires a normalized state (norm " + std::to_string(norm) + ")");
    }
    // Upper-state amplitudes occupy the second half of the composite index.
    const Index half = state.dim() / 2;
    return state.amplitudes().tail(half).squaredNorm();
}

double diabatic_population(const DensityMatrix& state) {
    const double trace = state.trace();
    if (std::abs(trace - 1.0) > kNormalizationTolerance) {
        throw Error(kModule, "diabatic_population requires unit trace (trace " + std::to_string(trace) + ")");
    }
    const Index half = state.dim() / 2;
    return state.entries().diagonal().tail(half).real().sum();
}

std::vector<double> GridSpec::axis() const {
    if (points < 2 || !std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min)) {
        throw Error(kModule, "surface grid needs at least two points over a finite, increasing range");
    }
    std::vector<double> out(points);
    const double step = (q_max - q_min) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = q_min + step * i;
    return out;
}

SurfacePoint adiabatic_energies(const MoleculeParams& params, double q1, double q2) {
    const double w1 = angular(params.nu1);
    const double w2 = angular(params.nu2);
    const double de = angular(params.delta_e);
    const double kappa = angular(params.kappa);
    const double lambda = angular(params.lambda);
    const double mean = 0.5 * (w1 * q1 * q1 + w2 * q2 * q2);
    const double diag = 0.5 * de - kappa * q1;
    const double half_gap = std::hypot(diag, lambda * q2);
    return {mean - half_gap, mean + half_gap};
}

SurfaceGrid adiabatic_surfaces(const MoleculeParams& params, const GridSpec& q1_grid, const GridSpec& q2_grid) {
    params.validate();
    SurfaceGrid grid{q1_grid.axis(), q2_grid.axis(), {}, {}};
    const auto n1 = Index(grid.q1_points.size());
    const auto n2 = Index(grid.q2_points.size());
    grid.lower.resize(n1, n2);
    grid.upper.resize(n1, n2);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n2; ++j) {
            const auto [lo, hi] = adiabatic_energies(params, grid.q1_points[i], grid.q2_points[j]);
            grid.lower(i, j) = lo;
            grid.upper(i, j) = hi;
        }
    }
    return grid;
}

SurfaceGrid adiabatic_surfaces(const MoleculeParams& params, const GridSpec& grid) {
    return adiabatic_surfaces(params, grid, grid);
}

std::optional<std::pair<double, double>> conical_intersection(const MoleculeParams& params) {
    if (params.kappa == 0.0) {
        if (params.delta_e == 0.0) return std::pair{0.0, 0.0};
        return std::nullopt;
    }
    return std::pair{params.delta_e / (2.0 * params.kappa), 0.0};
}

}  // namespace vibrosim
