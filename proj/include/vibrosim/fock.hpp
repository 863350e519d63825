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

// Truncated bosonic Fock-space primitives on the composite space
// qubit (x) mode1 (x) mode2. Composite index: i = q * n^2 + n1 * n + n2.

#include <array>
#include <cstddef>

#include "vibrosim/common.hpp"

namespace vibrosim {

// Number of retained Fock states per mode, basis |0> ... |n_max - 1>.
class FockCutoff {
public:
    explicit FockCutoff(int n_max);

    int n_max() const noexcept { return n_max_; }
    Index mode_dim() const noexcept { return n_max_; }
    Index composite_dim() const noexcept { return 2 * Index(n_max_) * n_max_; }

    // Composite index stride of a mode (0 = mode 1, 1 = mode 2).
    Index stride(int mode) const;

    friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

private:
    int n_max_;
};

inline constexpr int kModeCount = 2;

SparseMatrix identity_matrix(Index n);
SparseMatrix annihilation_matrix(FockCutoff cutoff);
SparseMatrix creation_matrix(FockCutoff cutoff);
SparseMatrix number_matrix(FockCutoff cutoff);

// Basis order (|0>, |1>) with sigma_z = diag(+1, -1).
namespace pauli {
SparseMatrix identity();
SparseMatrix x();
SparseMatrix y();
SparseMatrix z();
SparseMatrix projector(int level);
}  // namespace pauli

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

// Sparse complex operator on the composite space. Iteration order over the
// stored entries is row-major and deterministic.
struct CompositeOperator {
    FockCutoff cutoff;
    SparseMatrix matrix;

    Index dim() const noexcept { return matrix.rows(); }
    Index nnz() const noexcept { return matrix.nonZeros(); }

    // max |A - A^dagger| over all entries.
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() < tol; }

    // Maximum absolute row sum; an upper bound on the spectral radius.
    double inf_norm() const;

    Vector apply(const Vector& v) const { return matrix * v; }

    CompositeOperator& operator+=(const CompositeOperator& other);
    CompositeOperator& operator*=(double factor);
};

CompositeOperator operator+(CompositeOperator a, const CompositeOperator& b);
CompositeOperator operator*(double factor, CompositeOperator a);

// qubit_op (x) mode1_op (x) mode2_op with that fixed ordering.
CompositeOperator tensor_composite(const SparseMatrix& qubit_op, const SparseMatrix& mode1_op,
                                   const SparseMatrix& mode2_op, FockCutoff cutoff);

// Single-mode operator lifted onto the composite space.
CompositeOperator lift_mode(const SparseMatrix& mode_op, int mode, FockCutoff cutoff);
CompositeOperator lift_qubit(const SparseMatrix& qubit_op, FockCutoff cutoff);

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b);

class StateVector {
public:
    explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}

    Index dim() const noexcept { return amplitudes_.size(); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Vector& amplitudes() noexcept { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

    // <psi|A|psi>, real part.
    double expectation(const CompositeOperator& op) const;

private:
    Vector amplitudes_;
};

struct CoherentAmplitudes {
    Vector amplitudes;   // renormalized over the retained states
    double tail_mass;    // 1 - sum |c_n|^2 before renormalization
};

// Threshold on the pre-normalization tail mass above which coherent_state warns.
inline constexpr double kCoherentTailWarning = 1e-8;

// c_n = exp(-|alpha|^2 / 2) alpha^n / sqrt(n!) for n < n_max, renormalized.
CoherentAmplitudes coherent_state(double alpha, FockCutoff cutoff);

Vector fock_state(int n, FockCutoff cutoff);
Vector qubit_state(int level);

StateVector product_state(const Vector& qubit, const Vector& mode1, const Vector& mode2);

}  // namespace vibrosim
