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

#include "vibrosim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "lindblad";

}  // namespace

DissipationRates DissipationRates::equal(double gamma) {
    DissipationRates rates;
    for (auto& m : rates.modes) m = {gamma, gamma};
    rates.validate();
    return rates;
}

void DissipationRates::validate() const {
    for (std::size_t j = 0; j < modes.size(); ++j) {
        for (double g : {modes[j].gamma_plus, modes[j].gamma_minus}) {
            if (!std::isfinite(g) || g < 0.0) {
                throw Error(kModule, "dissipation rates must be finite and non-negative (mode " +
                                         std::to_string(j + 1) + ")");
            }
        }
    }
}

double DissipationRates::max_rate() const {
    double best = 0.0;
    for (const auto& m : modes) best = std::max({best, m.gamma_plus, m.gamma_minus});
    return best;
}

bool DissipationRates::is_zero() const { return max_rate() == 0.0; }

BandedOperator BandedOperator::from_sparse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw Error(kModule, "banded operator must be square");
    BandedOperator op;
    op.dim = m.rows();
    std::map<Index, std::size_t> slot;
    for (Index row = 0; row < m.outerSize(); ++row) {
        for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
            if (it.value() == cplx(0.0)) continue;
            const Index offset = it.col() - row;
            auto [pos, fresh] = slot.try_emplace(offset, op.bands.size());
            if (fresh) {
                Band band;
                band.offset = offset;
                band.begin = std::max<Index>(0, -offset);
                band.end = std::min(op.dim, op.dim - offset);
                band.coeff.assign(op.dim, cplx(0.0));
                op.bands.push_back(std::move(band));
            }
            op.bands[pos->second].coeff[row] = it.value();
        }
    }
    return op;
}

const BandedOperator::Band* BandedOperator::band(Index offset) const noexcept {
    for (const Band& b : bands) {
        if (b.offset == offset) return &b;
    }
    return nullptr;
}

Liouvillian::Liouvillian(const CompositeOperator& hamiltonian, const DissipationRates& rates)
    : h_(BandedOperator::from_sparse(hamiltonian.matrix)) {
    rates.validate();
    const FockCutoff cutoff = hamiltonian.cutoff;
    const Index dim = hamiltonian.dim();
    h_width_ = 2.0 * hamiltonian.inf_norm();
    k_half_ = Eigen::VectorXd::Zero(dim);

    const SparseMatrix lower = annihilation_matrix(cutoff);
    const SparseMatrix raise = creation_matrix(cutoff);
    for (int mode = 0; mode < kModeCount; ++mode) {
        const ModeRates& r = rates.modes[mode];
        const std::pair<double, const SparseMatrix*> channels[] = {{r.gamma_plus, &raise}, {r.gamma_minus, &lower}};
        for (const auto& [rate, single] : channels) {
            if (rate == 0.0) continue;
            const SparseMatrix a = lift_mode(*single, mode, cutoff).matrix;
            const SparseMatrix ada = SparseMatrix(a.adjoint()) * a;
            for (Index i = 0; i < dim; ++i) {
                for (SparseMatrix::InnerIterator it(ada, i); it; ++it) {
                    if (it.col() != i) throw Error(kModule, "jump operator must have a diagonal A^dag A");
                    k_half_(i) += 0.5 * rate * it.value().real();
                }
            }
            jumps_.push_back({rate, BandedOperator::from_sparse(a)});
        }
    }
    k_max_ = dim > 0 ? 2.0 * k_half_.maxCoeff() : 0.0;
}

namespace {

// std::complex multiplication carries inf/nan recovery that blocks
// vectorization; the inputs here are always finite.
inline cplx fast_mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// dst[i] += s * src[i] for i in [begin, end).
__attribute__((target_clones("avx2", "default"))) void axpy(Index begin, Index end, cplx s, const cplx* src, cplx* dst) {
    const double sr = s.real();
    const double si = s.imag();
    const double* x = reinterpret_cast<const double*>(src);
    double* y = reinterpret_cast<double*>(dst);
    for (Index i = begin; i < end; ++i) {
        const double xr = x[2 * i];
        const double xi = x[2 * i + 1];
        y[2 * i] += sr * xr - si * xi;
        y[2 * i + 1] += sr * xi + si * xr;
    }
}

// dst[i] += (s * coeff[i]) * src[i] for i in [begin, end).
__attribute__((target_clones("avx2", "default"))) void scaled_axpy(Index begin, Index end, cplx s, const cplx* coeff, const cplx* src, cplx* dst) {
    for (Index i = begin; i < end; ++i) dst[i] += fast_mul(fast_mul(s, coeff[i]), src[i]);
}

// Entries of rho far out in the Fock tails underflow into the subnormal range,
// where arithmetic is an order of magnitude slower. Flushing them to zero only
// perturbs values below 1e-308.
class FlushSubnormals {
public:
    FlushSubnormals() {
#if defined(__SSE2__)
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040u);  // FTZ | DAZ
#endif
    }
    ~FlushSubnormals() {
#if defined(__SSE2__)
        _mm_setcsr(saved_);
#endif
    }
    FlushSubnormals(const FlushSubnormals&) = delete;
    FlushSubnormals& operator=(const FlushSubnormals&) = delete;

private:
    unsigned saved_ = 0;
};

}  // namespace

void Liouvillian::apply(const DenseMatrix& rho, DenseMatrix& out) const {
    const Index n = rho.rows();
    out.resize(n, n);
    // Column by column:
    //   out(:, j) = -i (H rho)(:, j) + i (rho H)(:, j) - (K/2 + K_j/2) rho(:, j)
    //             + sum_k rate_k (A_k rho A_k^dag)(:, j).
    // With H(k, k + d) = c_d(k), (rho H)(:, j) = sum_d c_d(j - d) rho(:, j - d)
    // and (H rho)(i, j) = sum_d c_d(i) rho(i + d, j).
    const cplx minus_i(0.0, -1.0);
    for (Index j = 0; j < n; ++j) {
        cplx* dst = out.col(j).data();
        const cplx* rho_j = rho.col(j).data();
        const double kj = k_half_(j);
        for (Index i = 0; i < n; ++i) {
            const double k = k_half_(i) + kj;
            dst[i] = cplx(-k * rho_j[i].real(), -k * rho_j[i].imag());
        }
        for (const auto& band : h_.bands) {
            const Index k = j - band.offset;
            if (k >= 0 && k < n) axpy(0, n, kI * band.coeff[k], rho.col(k).data(), dst);
            scaled_axpy(band.begin, band.end, minus_i, band.coeff.data(), rho_j + band.offset, dst);
        }
        for (const Jump& jump : jumps_) {
            for (const auto& right : jump.op.bands) {
                if (j < right.begin || j >= right.end) continue;
                const cplx w = jump.rate * std::conj(right.coeff[j]);
                const cplx* src = rho.col(j + right.offset).data();
                for (const auto& left : jump.op.bands) {
                    scaled_axpy(left.begin, left.end, w, left.coeff.data(), src + left.offset, dst);
                }
            }
        }
    }
}

DenseMatrix dissipator_apply(const DensityMatrix& rho, int mode, const ModeRates& rates, FockCutoff cutoff) {
    if (mode < 0 || mode >= kModeCount) throw Error(kModule, "mode index out of range: " + std::to_string(mode));
    if (rho.dim() != cutoff.composite_dim()) throw Error(kModule, "density matrix does not match the cutoff");
    DissipationRates single;
    single.modes[mode] = rates;
    const CompositeOperator zero{cutoff, SparseMatrix(rho.dim(), rho.dim())};
    DenseMatrix out;
    Liouvillian(zero, single).apply(rho.entries(), out);
    return out;
}

void OpenSettings::validate() const {
    if (!(step >= 0.0) || !std::isfinite(step)) throw Error(kModule, "step must be finite and non-negative");
    if (!(accuracy > 0.0)) throw Error(kModule, "accuracy factor must be positive");
    // The classical RK4 stability region contains the closed left half-disk of
    // radius 2.6156; the generator spectrum lies in the left half-plane inside
    // the disk of radius spectral_bound().
    if (!(stability > 0.0 && stability <= 2.6)) {
        throw Error(kModule, "stability factor must lie in (0, 2.6] for classical RK4");
    }
    if (positivity_checks < 0) throw Error(kModule, "positivity_checks must be non-negative");
}

double select_step(const Liouvillian& generator, const OpenSettings& settings) {
    if (settings.step > 0.0) {
        if (settings.step * generator.spectral_bound() > 2.6) {
            warn(kModule, "explicit step exceeds the guaranteed RK4 stability limit");
        }
        return settings.step;
    }
    double dt = std::numeric_limits<double>::infinity();
    if (generator.hamiltonian_width() > 0.0) dt = std::min(dt, settings.accuracy / generator.hamiltonian_width());
    if (generator.spectral_bound() > 0.0) dt = std::min(dt, settings.stability / generator.spectral_bound());
    return dt;
}

OpenEvolution evolve_open(const CompositeOperator& hamiltonian, const DissipationRates& rates,
                          const DensityMatrix& rho0, std::span<const double> times_ps, const OpenSettings& settings) {
    settings.validate();
    rates.validate();
    if (rho0.dim() != hamiltonian.dim()) throw Error(kModule, "density matrix and Hamiltonian dimensions differ");
    const double herm = hamiltonian.hermiticity_error();
    if (herm > 1e-12 * std::max(1.0, hamiltonian.inf_norm())) throw Error(kModule, "Hamiltonian is not Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-8) throw Error(kModule, "initial density matrix must have unit trace");
    if (rho0.hermiticity_error() > 1e-10) throw Error(kModule, "initial density matrix must be Hermitian");
    if (times_ps.empty() || !(times_ps.front() >= 0.0)) throw Error(kModule, "time grid must start at t >= 0");
    for (std::size_t k = 1; k < times_ps.size(); ++k) {
        if (!(times_ps[k] > times_ps[k - 1])) throw Error(kModule, "time grid must be strictly increasing");
    }

    const FlushSubnormals flush;
    const Liouvillian generator(hamiltonian, rates);
    const double dt_max = select_step(generator, settings);
    const FockCutoff cutoff = hamiltonian.cutoff;
    const CompositeOperator n1_op = mode_number(0, cutoff);
    const CompositeOperator n2_op = mode_number(1, cutoff);

    std::vector<char> spot(times_ps.size(), 0);
    if (settings.positivity_checks > 0) {
        const auto count = std::min<std::size_t>(settings.positivity_checks, times_ps.size());
        for (std::size_t c = 0; c < count; ++c) {
            const std::size_t idx = count == 1 ? times_ps.size() - 1 : c * (times_ps.size() - 1) / (count - 1);
            spot[idx] = 1;
        }
    }

    OpenEvolution result{TimeSeries{}, rho0, 0.0, 0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    DensityMatrix& rho = result.final_state;
    const Index n = rho.dim();
    DenseMatrix acc(n, n), stage(n, n), k(n, n);
    const Index size = n * n;
    std::vector<double> p, n1, n2, trace, purity;

    double now = 0.0;
    for (std::size_t s = 0; s < times_ps.size(); ++s) {
        const double interval = times_ps[s] - now;
        if (interval > 0.0) {
            const long steps = std::max(1L, long(std::ceil(interval / dt_max - 1e-9)));
            const double h = interval / double(steps);
            result.step = std::max(result.step, h);
            for (long it = 0; it < steps; ++it) {
                DenseMatrix& r = rho.entries();
                cplx* rp = r.data();
                cplx* ap = acc.data();
                cplx* sp = stage.data();
                const cplx* kp = k.data();
                generator.apply(r, k);
                for (Index i = 0; i < size; ++i) {
                    ap[i] = rp[i] + (h / 6.0) * kp[i];
                    sp[i] = rp[i] + (h / 2.0) * kp[i];
                }
                generator.apply(stage, k);
                for (Index i = 0; i < size; ++i) {
                    ap[i] += (h / 3.0) * kp[i];
                    sp[i] = rp[i] + (h / 2.0) * kp[i];
                }
                generator.apply(stage, k);
                for (Index i = 0; i < size; ++i) {
                    ap[i] += (h / 3.0) * kp[i];
                    sp[i] = rp[i] + h * kp[i];
                }
                generator.apply(stage, k);
                for (Index i = 0; i < size; ++i) rp[i] = ap[i] + (h / 6.0) * kp[i];
                result.max_asymmetry = std::max(result.max_asymmetry, rho.hermitize());
            }
            result.steps += steps;
            now = times_ps[s];
        }

        const double tr = rho.trace();
        const double drift = std::abs(tr - 1.0);
        result.max_trace_drift = std::max(result.max_trace_drift, drift);
        if (drift > kTraceDriftLimit) {
            throw Error(kModule, "trace drift " + std::to_string(drift) + " at t = " +
                                     std::to_string(times_ps[s] * kFsPerPs) + " fs; use a smaller step");
        }
        if (spot[s]) {
            const double lo = rho.min_eigenvalue();
            result.min_eigenvalue = std::min(result.min_eigenvalue, lo);
            if (lo < kNegativityLimit) {
                throw Error(kModule, "density matrix lost positivity (min eigenvalue " + std::to_string(lo) +
                                         "); use a smaller step");
            }
        }
        p.push_back(diabatic_population(rho));
        n1.push_back(rho.expectation(n1_op) / tr);
        n2.push_back(rho.expectation(n2_op) / tr);
        trace.push_back(tr);
        purity.push_back(rho.purity());
    }
    if (!std::isfinite(result.min_eigenvalue)) result.min_eigenvalue = 0.0;

    std::vector<double> fs(times_ps.size());
    std::transform(times_ps.begin(), times_ps.end(), fs.begin(), [](double t) { return t * kFsPerPs; });
    result.series = TimeSeries(std::move(fs));
    result.series.add_column("P_diabatic", std::move(p));
    result.series.add_column("n1", std::move(n1));
    result.series.add_column("n2", std::move(n2));
    result.series.add_column("trace", std::move(trace));
    result.series.add_column("purity", std::move(purity));
    return result;
}

}  // namespace vibrosim
