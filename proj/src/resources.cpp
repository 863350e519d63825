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

#include "vibrosim/resources.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "resources";

int ceil_log2(int n) {
    int bits = 0;
    while ((1LL << bits) < n) ++bits;
    return bits;
}

class TrotterProblem {
public:
    TrotterProblem(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs,
                   const TrotterSearchSettings& settings)
        : settings_(settings),
          grid_(uniform_grid(t_max_fs / kFsPerPs, settings.n_points)),
          terms_(hamiltonian_terms(params, cutoff).ordered()),
          psi0_(initial_state(params, cutoff)) {
        exact_ = evolve(build_hamiltonian(params, cutoff), psi0_, grid_, settings.evolution).series;
    }

    double mse_for(int n_steps) const {
        return mse(trotter_series(terms_, psi0_, grid_, n_steps, settings_.evolution).series, exact_);
    }

private:
    TrotterSearchSettings settings_;
    std::vector<double> grid_;
    std::vector<CompositeOperator> terms_;
    StateVector psi0_;
    TimeSeries exact_;
};

}  // namespace

int qubit_count(int n_fock, int n_modes) {
    if (n_fock < 2) throw Error(kModule, "n_fock must be at least 2");
    if (n_modes < 1) throw Error(kModule, "n_modes must be at least 1");
    return n_modes * ceil_log2(n_fock) + 1;
}

double mse(const TimeSeries& a, const TimeSeries& b, std::string_view column) {
    if (a.times() != b.times()) throw Error(kModule, "mse needs identical time grids");
    const auto& x = a.column(column);
    const auto& y = b.column(column);
    if (x.empty()) throw Error(kModule, "mse of empty series");
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sum += (x[k] - y[k]) * (x[k] - y[k]);
    return sum / double(x.size());
}

double trotter_mse(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs, int n_steps,
                   const TrotterSearchSettings& settings) {
    return TrotterProblem(params, cutoff, t_max_fs, settings).mse_for(n_steps);
}

StepSearchResult trotter_steps_for_mse(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs,
                                       double target_mse, const TrotterSearchSettings& settings) {
    if (!(target_mse > 0.0)) throw Error(kModule, "target MSE must be positive");
    if (settings.step_ceiling < 1) throw Error(kModule, "step ceiling must be positive");
    const TrotterProblem problem(params, cutoff, t_max_fs, settings);

    int lo = 0;  // largest count known to miss the target
    int hi = 1;
    double hi_mse = problem.mse_for(hi);
    while (hi_mse > target_mse) {
        if (hi >= settings.step_ceiling) {
            throw Error(kModule, fmt::format("target MSE {:.3g} not reached within {} Trotter steps (MSE {:.3g})",
                                             target_mse, settings.step_ceiling, hi_mse));
        }
        lo = hi;
        hi = std::min(2 * hi, settings.step_ceiling);
        hi_mse = problem.mse_for(hi);
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        const double m = problem.mse_for(mid);
        if (m <= target_mse) {
            hi = mid;
            hi_mse = m;
        } else {
            lo = mid;
        }
    }
    return {hi, hi_mse};
}

ResourceEstimate estimate(const MoleculeParams& params, FockCutoff cutoff, const EstimateRequest& request) {
    if (request.cnot_per_step < 1) throw Error(kModule, "cnot_per_step must be positive");
    if (!(request.t_max_fs > 0.0)) throw Error(kModule, "t_max must be positive");
    ResourceEstimate out;
    out.qubits = qubit_count(cutoff.n_max(), kModeCount);
    out.cnot_per_step = request.cnot_per_step;
    if (request.pinned_steps) {
        if (*request.pinned_steps < 1) throw Error(kModule, "pinned Trotter steps must be positive");
        out.trotter_steps = *request.pinned_steps;
        out.steps_pinned = true;
        out.mse_achieved = trotter_mse(params, cutoff, request.t_max_fs, out.trotter_steps, request.search);
    } else {
        const StepSearchResult found =
            trotter_steps_for_mse(params, cutoff, request.t_max_fs, request.target_mse, request.search);
        out.trotter_steps = found.steps;
        out.mse_achieved = found.mse;
    }
    out.cnot_total = out.cnot_per_step * out.trotter_steps;
    return out;
}

std::string format_report(const ResourceEstimate& e, const MoleculeParams& params, FockCutoff cutoff,
                          const EstimateRequest& request) {
    std::ostringstream out;
    out << "Qubit-only resource estimate for " << params.name << '\n';
    out << fmt::format("  Fock states per mode      {}\n", cutoff.n_max());
    out << fmt::format("  qubits                    {}  (2 modes x ceil(log2 {}) + 1 electronic)\n", e.qubits,
                       cutoff.n_max());
    out << fmt::format("  window                    {:g} fs\n", request.t_max_fs);
    out << fmt::format("  Trotter steps             {}  ({})\n", e.trotter_steps,
                       e.steps_pinned ? "pinned" : fmt::format("searched, MSE target {:g}", request.target_mse));
    out << fmt::format("  MSE vs exact              {:.6g}\n", e.mse_achieved);
    out << fmt::format("  CNOT per step             {}  (modeled input)\n", e.cnot_per_step);
    out << fmt::format("  CNOT total                {}\n", e.cnot_total);
    return out.str();
}

std::string to_key_value(const ResourceEstimate& e) {
    std::ostringstream out;
    out << "qubits = " << e.qubits << '\n';
    out << "trotter_steps = " << e.trotter_steps << '\n';
    out << "trotter_steps_pinned = " << (e.steps_pinned ? "true" : "false") << '\n';
    out << "cnot_per_step = " << e.cnot_per_step << '\n';
    out << "cnot_total = " << e.cnot_total << '\n';
    out << "mse_achieved = " << fmt::format("{:.8e}", e.mse_achieved) << '\n';
    return out.str();
}

}  // namespace vibrosim
