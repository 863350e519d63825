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

// Open-system evolution under
//
//   d rho/dt = -i[H, rho] + sum_j ( g+_j D[a_j^dag] rho + g-_j D[a_j] rho ),
//   D[A] rho = A rho A^dag - 1/2 {A^dag A, rho},
//
// integrated on the dense density matrix with fixed-step classical RK4.

#include <array>
#include <span>
#include <vector>

#include "vibrosim/density_matrix.hpp"
#include "vibrosim/propagator.hpp"

namespace vibrosim {

// Heating (g+) and cooling (g-) rates of one mode, ps^-1 in the molecular frame.
struct ModeRates {
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;

    friend bool operator==(const ModeRates&, const ModeRates&) = default;
};

struct DissipationRates {
    std::array<ModeRates, kModeCount> modes{};

    // g+ = g- = gamma on both modes (infinite-temperature bath).
    static DissipationRates equal(double gamma);

    void validate() const;
    double max_rate() const;
    bool is_zero() const;

    friend bool operator==(const DissipationRates&, const DissipationRates&) = default;
};

// g+ D[a^dag] rho + g- D[a] rho for one mode; trace-free.
DenseMatrix dissipator_apply(const DensityMatrix& rho, int mode, const ModeRates& rates, FockCutoff cutoff);

// A sparse operator stored by constant-offset bands: A(i, i + offset) = coeff[i]
// for begin <= i < end. Ladder operators and the LVC Hamiltonian have only a
// handful of bands, which turns products with dense columns into contiguous
// shifted loops.
struct BandedOperator {
    struct Band {
        Index offset = 0;
        Index begin = 0;
        Index end = 0;
        std::vector<cplx> coeff;  // length = dimension, zero outside [begin, end)
    };
    Index dim = 0;
    std::vector<Band> bands;

    static BandedOperator from_sparse(const SparseMatrix& m);
    const Band* band(Index offset) const noexcept;
};

class Liouvillian {
public:
    Liouvillian(const CompositeOperator& hamiltonian, const DissipationRates& rates);

    // out = L rho for Hermitian rho. out must not alias rho.
    void apply(const DenseMatrix& rho, DenseMatrix& out) const;

    // Width of the commutator spectrum (<= 2 ||H||_inf).
    double hamiltonian_width() const noexcept { return h_width_; }
    // Gershgorin-type bound on the spectral radius of the full generator.
    double spectral_bound() const noexcept { return h_width_ + 2.0 * k_max_; }

private:
    struct Jump {
        double rate;
        BandedOperator op;
    };

    BandedOperator h_;
    std::vector<Jump> jumps_;
    Eigen::VectorXd k_half_;  // 1/2 diag(sum_k rate_k A_k^dag A_k)
    double h_width_ = 0.0;
    double k_max_ = 0.0;
};

struct OpenSettings {
    // Fixed RK4 step in ps; 0 selects min(accuracy / width(H), stability / bound).
    double step = 0.0;
    double accuracy = 0.5;
    double stability = 2.5;
    // Number of sample times at which the minimum eigenvalue is checked.
    int positivity_checks = 10;

    void validate() const;
};

inline constexpr double kTraceDriftLimit = 1e-6;
inline constexpr double kNegativityLimit = -1e-5;

struct OpenEvolution {
    TimeSeries series;  // t_fs; P_diabatic, n1, n2, trace, purity
    DensityMatrix final_state;
    double step = 0.0;
    long steps = 0;
    double max_trace_drift = 0.0;
    double max_asymmetry = 0.0;    // before each re-Hermitization
    double min_eigenvalue = 0.0;   // over the positivity spot checks
};

double select_step(const Liouvillian& generator, const OpenSettings& settings);

OpenEvolution evolve_open(const CompositeOperator& hamiltonian, const DissipationRates& rates,
                          const DensityMatrix& rho0, std::span<const double> times_ps,
                          const OpenSettings& settings = {});

}  // namespace vibrosim
