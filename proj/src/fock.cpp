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

#include "vibrosim/fock.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "fock_core";

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

}  // namespace

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
    if (n_max < 2) {
        throw Error(kModule, "Fock cutoff must be at least 2, got " + std::to_string(n_max));
    }
    // Sparse storage indices are int; the composite dimension must fit.
    constexpr long long kLimit = std::numeric_limits<int>::max();
    if (2LL * n_max * n_max > kLimit) {
        throw Error(kModule, "composite dimension 2*n_max^2 overflows for n_max = " + std::to_string(n_max));
    }
}

Index FockCutoff::stride(int mode) const {
    switch (mode) {
        case 0: return n_max_;
        case 1: return 1;
        default: throw Error(kModule, "mode index out of range: " + std::to_string(mode));
    }
}

SparseMatrix identity_matrix(Index n) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return m;
}

SparseMatrix annihilation_matrix(FockCutoff cutoff) {
    const int n = cutoff.n_max();
    std::vector<Triplet> entries;
    entries.reserve(n - 1);
    for (int k = 1; k < n; ++k) entries.emplace_back(k - 1, k, std::sqrt(double(k)));
    return from_triplets(n, n, entries);
}

SparseMatrix creation_matrix(FockCutoff cutoff) {
    return SparseMatrix(annihilation_matrix(cutoff).adjoint());
}

SparseMatrix number_matrix(FockCutoff cutoff) {
    const int n = cutoff.n_max();
    std::vector<Triplet> entries;
    entries.reserve(n - 1);
    for (int k = 1; k < n; ++k) entries.emplace_back(k, k, double(k));
    return from_triplets(n, n, entries);
}

namespace pauli {

SparseMatrix identity() { return identity_matrix(2); }

SparseMatrix x() { return from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}); }

SparseMatrix y() { return from_triplets(2, 2, {{0, 1, -kI}, {1, 0, kI}}); }

SparseMatrix z() { return from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}}); }

SparseMatrix projector(int level) {
    if (level != 0 && level != 1) throw Error(kModule, "qubit level must be 0 or 1");
    return from_triplets(2, 2, {{level, level, 1.0}});
}

}  // namespace pauli

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out = Eigen::kroneckerProduct(a, b);
    out.prune(cplx(0.0));
    out.makeCompressed();
    return out;
}

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(kModule, "dimension mismatch in operator comparison");
    }
    const SparseMatrix diff = a - b;
    double worst = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
}

double CompositeOperator::hermiticity_error() const {
    return max_abs_difference(matrix, SparseMatrix(matrix.adjoint()));
}

double CompositeOperator::inf_norm() const {
    double best = 0.0;
    for (Index row = 0; row < matrix.outerSize(); ++row) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(matrix, row); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

CompositeOperator& CompositeOperator::operator+=(const CompositeOperator& other) {
    if (!(cutoff == other.cutoff)) throw Error(kModule, "cannot add operators with different cutoffs");
    matrix += other.matrix;
    matrix.makeCompressed();
    return *this;
}

CompositeOperator& CompositeOperator::operator*=(double factor) {
    matrix *= cplx(factor);
    return *this;
}

CompositeOperator operator+(CompositeOperator a, const CompositeOperator& b) {
    a += b;
    return a;
}

CompositeOperator operator*(double factor, CompositeOperator a) {
    a *= factor;
    return a;
}

CompositeOperator tensor_composite(const SparseMatrix& qubit_op, const SparseMatrix& mode1_op,
                                   const SparseMatrix& mode2_op, FockCutoff cutoff) {
    const Index n = cutoff.mode_dim();
    const auto square = [](const SparseMatrix& m, Index d) { return m.rows() == d && m.cols() == d; };
    if (!square(qubit_op, 2) || !square(mode1_op, n) || !square(mode2_op, n)) {
        throw Error(kModule, "tensor_composite expects operands of dimension 2, " + std::to_string(n) + ", " +
                                 std::to_string(n) + "; got " + std::to_string(qubit_op.rows()) + ", " +
                                 std::to_string(mode1_op.rows()) + ", " + std::to_string(mode2_op.rows()));
    }
    return {cutoff, kron(qubit_op, kron(mode1_op, mode2_op))};
}

CompositeOperator lift_mode(const SparseMatrix& mode_op, int mode, FockCutoff cutoff) {
    const SparseMatrix id = identity_matrix(cutoff.mode_dim());
    switch (mode) {
        case 0: return tensor_composite(pauli::identity(), mode_op, id, cutoff);
        case 1: return tensor_composite(pauli::identity(), id, mode_op, cutoff);
        default: throw Error(kModule, "mode index out of range: " + std::to_string(mode));
    }
}

CompositeOperator lift_qubit(const SparseMatrix& qubit_op, FockCutoff cutoff) {
    const SparseMatrix id = identity_matrix(cutoff.mode_dim());
    return tensor_composite(qubit_op, id, id, cutoff);
}

double StateVector::expectation(const CompositeOperator& op) const {
    if (op.dim() != dim()) throw Error(kModule, "operator/state dimension mismatch");
    return amplitudes_.dot(op.matrix * amplitudes_).real();
}

CoherentAmplitudes coherent_state(double alpha, FockCutoff cutoff) {
    if (!std::isfinite(alpha)) throw Error(kModule, "coherent-state displacement must be finite");
    const int n = cutoff.n_max();
    Vector c = Vector::Zero(n);
    c(0) = std::exp(-0.5 * alpha * alpha);
    for (int k = 1; k < n; ++k) c(k) = c(k - 1) * (alpha / std::sqrt(double(k)));

    const double kept = c.squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > kCoherentTailWarning) {
        warn(kModule, fmt::format("coherent state alpha={:.4g} loses tail mass {:.2e} at cutoff {}", alpha, tail, n));
    }
    c /= std::sqrt(kept);
    return {std::move(c), tail};
}

Vector fock_state(int n, FockCutoff cutoff) {
    if (n < 0 || n >= cutoff.n_max()) throw Error(kModule, "Fock level outside the retained basis");
    Vector v = Vector::Zero(cutoff.mode_dim());
    v(n) = 1.0;
    return v;
}

Vector qubit_state(int level) {
    if (level != 0 && level != 1) throw Error(kModule, "qubit level must be 0 or 1");
    Vector v = Vector::Zero(2);
    v(level) = 1.0;
    return v;
}

StateVector product_state(const Vector& qubit, const Vector& mode1, const Vector& mode2) {
    if (qubit.size() != 2 || mode1.size() != mode2.size()) {
        throw Error(kModule, "product_state expects a qubit vector and two equal-size mode vectors");
    }
    const Index n = mode1.size();
    Vector out(2 * n * n);
    for (Index q = 0; q < 2; ++q) {
        for (Index i = 0; i < n; ++i) {
            out.segment((q * n + i) * n, n) = (qubit(q) * mode1(i)) * mode2;
        }
    }
    return StateVector(std::move(out));
}

}  // namespace vibrosim
