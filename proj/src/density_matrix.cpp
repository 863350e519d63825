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

#include "vibrosim/density_matrix.hpp"

#include <Eigen/Eigenvalues>

namespace vibrosim {

DensityMatrix::DensityMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw Error("lindblad", "density matrix must be square");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    const Vector& a = psi.amplitudes();
    return DensityMatrix(a * a.adjoint());
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return entries_.squaredNorm();
}

double DensityMatrix::hermiticity_error() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrix::expectation(const CompositeOperator& op) const {
    if (op.dim() != dim()) throw Error("lindblad", "operator/density dimension mismatch");
    // tr(rho A) = sum_ij rho_ji A_ij
    cplx sum = 0.0;
    for (Index row = 0; row < op.matrix.outerSize(); ++row) {
        for (SparseMatrix::InnerIterator it(op.matrix, row); it; ++it) sum += entries_(it.col(), row) * it.value();
    }
    return sum.real();
}

double DensityMatrix::hermitize() {
    const Index n = dim();
    double asymmetry = 0.0;
    constexpr Index kTile = 32;
    for (Index jb = 0; jb < n; jb += kTile) {
        const Index je = std::min(n, jb + kTile);
        for (Index ib = jb; ib < n; ib += kTile) {
            const Index ie = std::min(n, ib + kTile);
            for (Index j = jb; j < je; ++j) {
                for (Index i = std::max(ib, j); i < ie; ++i) {
                    cplx& lower = entries_(i, j);
                    cplx& upper = entries_(j, i);
                    asymmetry = std::max(asymmetry, std::abs(lower - std::conj(upper)));
                    const cplx avg = 0.5 * (lower + std::conj(upper));
                    lower = avg;
                    upper = std::conj(avg);
                }
            }
        }
    }
    return asymmetry;
}

}  // namespace vibrosim
