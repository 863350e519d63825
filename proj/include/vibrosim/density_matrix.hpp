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

#include "vibrosim/fock.hpp"

namespace vibrosim {

// Mixed state on the composite space, stored dense.
class DensityMatrix {
public:
    explicit DensityMatrix(DenseMatrix entries);

    static DensityMatrix from_pure(const StateVector& psi);

    Index dim() const noexcept { return entries_.rows(); }
    const DenseMatrix& entries() const noexcept { return entries_; }
    DenseMatrix& entries() noexcept { return entries_; }

    double trace() const { return entries_.trace().real(); }
    double purity() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

    // tr(rho A), real part. Uses the sparsity of A.
    double expectation(const CompositeOperator& op) const;

    // rho <- (rho + rho^dagger) / 2; returns the asymmetry max |rho - rho^dag| it removed.
    double hermitize();

private:
    DenseMatrix entries_;
};

}  // namespace vibrosim
