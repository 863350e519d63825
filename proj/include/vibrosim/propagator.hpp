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

// Closed-system propagation |psi(t)> = exp(-iHt)|psi0> by Lanczos
// exponential action, plus first-order Trotterized propagation.
// Hamiltonians are in rad/ps and times in ps unless stated otherwise;
// TimeSeries report femtoseconds.

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vibrosim/fock.hpp"
#include "vibrosim/lvc.hpp"

namespace vibrosim {

enum class Method { exact, trotter };

struct EvolutionSettings {
    // Target local error of each exponential-action substep.
    double tolerance = 1e-12;
    // Largest internal substep, in the Hamiltonian's time unit (ps).
    double max_step = std::numeric_limits<double>::infinity();
    Method method = Method::exact;
    int krylov_dim = 30;
    // Budget of exponential-action substeps per evolve/trotter call.
    long max_substeps = 2'000'000;
    // Total first-order steps over the last grid time when method == trotter.
    int trotter_steps = 0;

    void validate() const;
};

// Named real-valued observables sampled on a molecular time grid (fs).
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> times_fs);

    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }

    void add_column(std::string name, std::vector<double> values);
    const std::vector<double>& column(std::string_view name) const;
    bool has_column(std::string_view name) const;
    // Insertion-ordered (name, values) pairs.
    const std::vector<std::pair<std::string, std::vector<double>>>& columns() const noexcept { return columns_; }

private:
    std::vector<double> times_;
    std::vector<std::pair<std::string, std::vector<double>>> columns_;
};

inline constexpr double kFsPerPs = 1000.0;

// exp(-i H t) v via restarted Lanczos with a posteriori substep control.
class ExpAction {
public:
    ExpAction(const SparseMatrix& hamiltonian, const EvolutionSettings& settings);

    // Advances v in place by time t (t may be zero or negative).
    void apply(Vector& v, double t);

    long substeps() const noexcept { return substeps_; }

private:
    SparseMatrix h_;
    EvolutionSettings settings_;
    double scale_;
    long substeps_ = 0;
};

struct Evolution {
    TimeSeries series;  // t_fs; P_diabatic, n1, n2, energy, norm
    StateVector final_state;
};

inline constexpr double kNormDriftLimit = 1e-6;

Evolution evolve(const CompositeOperator& hamiltonian, const StateVector& psi0, std::span<const double> times_ps,
                 const EvolutionSettings& settings = {});

// Applies (prod_k exp(-i H_k t/n))^n with the terms in the given order.
// Requires sum(terms) == hamiltonian entrywise to 1e-10.
StateVector trotter_evolve(const CompositeOperator& hamiltonian, std::span<const CompositeOperator> terms,
                           const StateVector& psi0, double t_total, int n_steps, const EvolutionSettings& settings = {});

// Fixed Trotter step dt = times.back() / n_steps; each sample time is reached
// by whole steps followed by one fractional step of the same ordering.
Evolution trotter_series(std::span<const CompositeOperator> terms, const StateVector& psi0,
                         std::span<const double> times_ps, int n_steps, const EvolutionSettings& settings = {});

// Artifact defaults: allene and butatriene 300 fs, pyrazine 500 fs.
double default_window_fs(std::string_view molecule);
inline constexpr int kDefaultSamplePoints = 400;

// n evenly spaced times from 0 to t_max inclusive.
std::vector<double> uniform_grid(double t_max, int n_points);

// build_hamiltonian -> initial_state -> evolve (or trotter_series).
TimeSeries population_trace(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs, int n_points,
                            const EvolutionSettings& settings = {});

}  // namespace vibrosim
