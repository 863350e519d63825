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

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vibrosim {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Every library error carries the name of the module that raised it, so the
// CLI can surface "lindblad: trace drift ..." instead of a bare what().
class Error : public std::runtime_error {
public:
    Error(std::string_view module, const std::string& message)
        : std::runtime_error(std::string(module) + ": " + message), module_(module) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

using WarningHandler = std::function<void(std::string_view module, std::string_view message)>;

// Installs a sink for non-fatal diagnostics; returns the previous handler.
// The default handler prints "warning: <module>: <message>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view module, std::string_view message);

}  // namespace vibrosim
