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

#include "vibrosim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>

#include <Eigen/Eigenvalues>

namespace vibrosim {
namespace {

constexpr std::string_view kModule = "propagator";

struct Observables {
    Eigen::VectorXd upper;
    Eigen::VectorXd n1;
    Eigen::VectorXd n2;

    explicit Observables(FockCutoff cutoff) {
        const Index n = cutoff.mode_dim();
        const Index dim = cutoff.composite_dim();
        upper.resize(dim);
        n1.resize(dim);
        n2.resize(dim);
        for (Index i = 0; i < dim; ++i) {
            upper(i) = i >= dim / 2 ? 1.0 : 0.0;
            n1(i) = double((i / n) % n);
            n2(i) = double(i % n);
        }
    }
};

// sum_{j >= order} (-ix)^j / j!
cplx exp_taylor_tail(double x, int order) {
    cplx term = 1.0;
    for (int j = 1; j <= order; ++j) term *= -kI * x / double(j);
    cplx sum = term;
    for (int j = order + 1; j < order + 400; ++j) {
        term *= -kI * x / double(j);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

void check_grid(std::span<const double> times) {
    if (times.empty()) throw Error(kModule, "time grid is empty");
    if (!(times.front() >= 0.0)) throw Error(kModule, "time grid must start at t >= 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw Error(kModule, "time grid must be strictly increasing");
    }
}

void check_inputs(const CompositeOperator& h, const StateVector& psi0) {
    if (psi0.dim() != h.dim()) throw Error(kModule, "state and Hamiltonian dimensions differ");
    if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error(kModule, "initial state is not normalized");
    const double herm = h.hermiticity_error();
    if (herm > 1e-12 * std::max(1.0, h.inf_norm())) {
        throw Error(kModule, "Hamiltonian is not Hermitian (max |H - H^dag| = " + std::to_string(herm) + ")");
    }
}

struct Recorder {
    Observables obs;
    std::vector<double> p, n1, n2, energy, norm;
    const SparseMatrix* h = nullptr;

    Recorder(FockCutoff cutoff, const SparseMatrix* hamiltonian, std::size_t n) : obs(cutoff), h(hamiltonian) {
        for (auto* v : {&p, &n1, &n2, &energy, &norm}) v->reserve(n);
    }

    void record(const Vector& v) {
        const Eigen::VectorXd prob = v.cwiseAbs2();
        const double nrm2 = prob.sum();
        p.push_back(prob.dot(obs.upper) / nrm2);
        n1.push_back(prob.dot(obs.n1) / nrm2);
        n2.push_back(prob.dot(obs.n2) / nrm2);
        energy.push_back(h ? v.dot(*h * v).real() / nrm2 : 0.0);
        norm.push_back(std::sqrt(nrm2));
        if (std::abs(norm.back() - 1.0) > kNormDriftLimit) {
            throw Error(kModule, "norm drift " + std::to_string(norm.back() - 1.0) + " exceeds " +
                                     std::to_string(kNormDriftLimit));
        }
    }

    TimeSeries finish(std::span<const double> times_ps, bool with_energy) {
        std::vector<double> fs(times_ps.size());
        std::transform(times_ps.begin(), times_ps.end(), fs.begin(), [](double t) { return t * kFsPerPs; });
        TimeSeries series(std::move(fs));
        series.add_column("P_diabatic", std::move(p));
        series.add_column("n1", std::move(n1));
        series.add_column("n2", std::move(n2));
        if (with_energy) series.add_column("energy", std::move(energy));
        series.add_column("norm", std::move(norm));
        return series;
    }
};

}  // namespace

void EvolutionSettings::validate() const {
    if (!(tolerance > 0.0 && tolerance <= 1e-3)) throw Error(kModule, "tolerance must lie in (0, 1e-3]");
    if (!(max_step > 0.0)) throw Error(kModule, "max_step must be positive");
    if (krylov_dim < 2) throw Error(kModule, "krylov_dim must be at least 2");
    if (max_substeps < 1) throw Error(kModule, "max_substeps must be positive");
    if (method == Method::trotter && trotter_steps < 1) {
        throw Error(kModule, "trotter method needs trotter_steps >= 1");
    }
}

TimeSeries::TimeSeries(std::vector<double> times_fs) : times_(std::move(times_fs)) {
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) throw Error(kModule, "TimeSeries times must be strictly increasing");
    }
}

void TimeSeries::add_column(std::string name, std::vector<double> values) {
    if (values.size() != times_.size()) {
        throw Error(kModule, "column '" + name + "' length differs from the time grid");
    }
    if (has_column(name)) throw Error(kModule, "duplicate column '" + name + "'");
    columns_.emplace_back(std::move(name), std::move(values));
}

bool TimeSeries::has_column(std::string_view name) const {
    return std::any_of(columns_.begin(), columns_.end(), [&](const auto& c) { return c.first == name; });
}

const std::vector<double>& TimeSeries::column(std::string_view name) const {
    for (const auto& [key, values] : columns_) {
        if (key == name) return values;
    }
    throw Error(kModule, "no column named '" + std::string(name) + "'");
}

ExpAction::ExpAction(const SparseMatrix& hamiltonian, const EvolutionSettings& settings)
    : h_(hamiltonian), settings_(settings) {
    settings_.validate();
    scale_ = CompositeOperator{FockCutoff(2), h_}.inf_norm();
}

void ExpAction::apply(Vector& v, double t) {
    const Index dim = v.size();
    if (h_.rows() != dim) throw Error(kModule, "exponential action dimension mismatch");
    const Index m_max = std::min<Index>(settings_.krylov_dim, dim);
    const double breakdown = 1e-13 * std::max(1.0, scale_);

    DenseMatrix basis(dim, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    double remaining = t;
    const double direction = t < 0 ? -1.0 : 1.0;

    while (std::abs(remaining) > 0.0) {
        if (++substeps_ > settings_.max_substeps) {
            throw Error(kModule, "exponential action did not converge within " +
                                     std::to_string(settings_.max_substeps) + " substeps");
        }
        const double beta0 = v.norm();
        if (beta0 == 0.0) return;
        basis.col(0) = v / beta0;

        Index m = m_max;
        bool exact = false;
        Vector w(dim);
        for (Index j = 0; j < m_max; ++j) {
            w.noalias() = h_ * basis.col(j);
            // Full reorthogonalization, applied twice.
            for (int pass = 0; pass < 2; ++pass) {
                const Vector coeff = basis.leftCols(j + 1).adjoint() * w;
                if (pass == 0) alpha(j) = coeff(j).real();
                w.noalias() -= basis.leftCols(j + 1) * coeff;
            }
            beta(j) = w.norm();
            if (beta(j) < breakdown) {
                m = j + 1;
                exact = true;
                break;
            }
            if (j + 1 < m_max) basis.col(j + 1) = w / beta(j);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        Eigen::VectorXd diag = alpha.head(m);
        Eigen::VectorXd sub = beta.head(std::max<Index>(m - 1, 0));
        eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const Eigen::MatrixXd& s = eig.eigenvectors();
        const Eigen::VectorXd& lam = eig.eigenvalues();
        const Eigen::VectorXd s0 = s.row(0).transpose();

        const auto coefficients = [&](double tau) {
            Vector phase(m);
            for (Index k = 0; k < m; ++k) phase(k) = std::exp(-kI * (lam(k) * tau)) * s0(k);
            return Vector(s.cast<cplx>() * phase);
        };
        const double residual = exact ? 0.0 : beta(m - 1);
        // The last coefficient e_m^T exp(-iT tau) e_1 only receives powers
        // T^j with j >= m-1, so it equals the same sum over exp(-ix) with its
        // first m-1 Taylor terms removed. Summing that tail directly avoids
        // the cancellation that puts a floor of ~eps on the naive evaluation.
        const double center = 0.5 * (lam.minCoeff() + lam.maxCoeff());
        const Eigen::VectorXd weight = s.row(m - 1).transpose().cwiseProduct(s0);
        const auto error = [&](double tau) {
            cplx last = 0.0;
            for (Index k = 0; k < m; ++k) last += weight(k) * exp_taylor_tail((lam(k) - center) * tau, int(m - 1));
            return residual * std::abs(last);
        };

        const double tol = settings_.tolerance;
        // Keeps tau * (spectral width) <= 2m, where the a posteriori estimate is
        // reliable; the width is bounded by 2 * inf-norm.
        const double width_cap = scale_ > 0.0 ? double(m_max) / scale_ : std::numeric_limits<double>::infinity();
        double tau = std::min({std::abs(remaining), settings_.max_step, width_cap});
        if (!exact && error(tau) > tol) {
            double lo = 0.0, hi = tau;
            tau *= 0.5;
            while (error(tau) > tol) {
                hi = tau;
                tau *= 0.5;
                if (tau < 1e-300) throw Error(kModule, "exponential action step underflow");
            }
            lo = tau;
            // Tighten towards the largest acceptable step.
            for (int it = 0; it < 4; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (error(mid) <= tol) lo = mid; else hi = mid;
            }
            tau = lo;
        }
        const bool last = tau >= std::abs(remaining);
        const double signed_tau = last ? remaining : direction * tau;
        v = beta0 * (basis.leftCols(m) * coefficients(signed_tau));
        remaining = last ? 0.0 : remaining - signed_tau;
    }
}

Evolution evolve(const CompositeOperator& hamiltonian, const StateVector& psi0, std::span<const double> times_ps,
                 const EvolutionSettings& settings) {
    settings.validate();
    check_grid(times_ps);
    check_inputs(hamiltonian, psi0);

    ExpAction action(hamiltonian.matrix, settings);
    Recorder rec(hamiltonian.cutoff, &hamiltonian.matrix, times_ps.size());
    Vector v = psi0.amplitudes();
    double now = 0.0;
    for (double t : times_ps) {
        action.apply(v, t - now);
        now = t;
        rec.record(v);
    }
    return {rec.finish(times_ps, true), StateVector(std::move(v))};
}

namespace {

void check_terms(const CompositeOperator& hamiltonian, std::span<const CompositeOperator> terms) {
    if (terms.empty()) throw Error(kModule, "Trotter decomposition needs at least one term");
    SparseMatrix sum = terms[0].matrix;
    for (std::size_t k = 1; k < terms.size(); ++k) sum += terms[k].matrix;
    const double diff = max_abs_difference(sum, hamiltonian.matrix);
    if (diff > 1e-10) {
        throw Error(kModule, "Trotter terms do not sum to the Hamiltonian (max deviation " + std::to_string(diff) + ")");
    }
}

// exp(-i H t) for an operator whose sparsity graph splits into small
// connected blocks. Each block is diagonalized once, so any t costs two small
// dense products per block, and a pinned step costs one.
class BlockExp {
public:
    static constexpr Index kMaxBlock = 512;

    static std::optional<BlockExp> try_build(const SparseMatrix& h) {
        const Index dim = h.rows();
        std::vector<Index> parent(dim);
        for (Index i = 0; i < dim; ++i) parent[i] = i;
        auto find = [&](Index i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        for (Index r = 0; r < h.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(h, r); it; ++it) {
                const Index a = find(r), b = find(it.col());
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        std::vector<Index> slot(dim, -1);
        BlockExp out;
        for (Index i = 0; i < dim; ++i) {
            const Index root = find(i);
            if (slot[root] < 0) {
                slot[root] = Index(out.blocks_.size());
                out.blocks_.emplace_back();
            }
            auto& members = out.blocks_[slot[root]].members;
            members.push_back(i);
            if (Index(members.size()) > kMaxBlock) return std::nullopt;
        }

        std::vector<Index> local(dim, 0);
        for (auto& b : out.blocks_) {
            const Index m = Index(b.members.size());
            for (Index k = 0; k < m; ++k) local[b.members[k]] = k;
            DenseMatrix dense = DenseMatrix::Zero(m, m);
            for (Index k = 0; k < m; ++k) {
                for (SparseMatrix::InnerIterator it(h, b.members[k]); it; ++it) dense(k, local[it.col()]) = it.value();
            }
            if (m == 1) {
                b.eigenvalues = Eigen::VectorXd::Constant(1, dense(0, 0).real());
                continue;
            }
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(dense);
            if (solver.info() != Eigen::Success) throw Error(kModule, "block eigendecomposition failed");
            b.eigenvalues = solver.eigenvalues();
            b.eigenvectors = solver.eigenvectors();
        }
        return out;
    }

    // Precomputes the block propagators for a step that will be reused.
    void pin(double t) {
        pinned_t_ = t;
        for (auto& b : blocks_) {
            if (b.members.size() == 1) continue;
            b.pinned = b.eigenvectors * phases(b, t).asDiagonal() * b.eigenvectors.adjoint();
        }
    }

    void apply(Vector& v, double t) const {
        const bool use_pinned = pinned_t_ && *pinned_t_ == t;
        Vector x, y;
        for (const auto& b : blocks_) {
            if (b.members.size() == 1) {
                v(b.members[0]) *= std::exp(cplx(0.0, -b.eigenvalues(0) * t));
                continue;
            }
            const Index m = Index(b.members.size());
            x.resize(m);
            for (Index k = 0; k < m; ++k) x(k) = v(b.members[k]);
            if (use_pinned) {
                y.noalias() = b.pinned * x;
            } else {
                y.noalias() = b.eigenvectors.adjoint() * x;
                y = phases(b, t).cwiseProduct(y);
                x.noalias() = b.eigenvectors * y;
                y.swap(x);
            }
            for (Index k = 0; k < m; ++k) v(b.members[k]) = y(k);
        }
    }

private:
    struct Block {
        std::vector<Index> members;
        Eigen::VectorXd eigenvalues;
        DenseMatrix eigenvectors;
        DenseMatrix pinned;
    };

    static Vector phases(const Block& b, double t) {
        Vector out(b.eigenvalues.size());
        for (Index k = 0; k < out.size(); ++k) out(k) = std::exp(cplx(0.0, -b.eigenvalues(k) * t));
        return out;
    }

    std::vector<Block> blocks_;
    std::optional<double> pinned_t_;
};

// One first-order step: the term exponentials in order. Terms with small
// blocks use BlockExp; anything else falls back to Lanczos.
class TrotterStepper {
public:
    TrotterStepper(std::span<const CompositeOperator> terms, const EvolutionSettings& settings) {
        for (const auto& term : terms) {
            if (auto block = BlockExp::try_build(term.matrix)) {
                factors_.emplace_back(std::move(*block));
            } else {
                factors_.emplace_back(ExpAction(term.matrix, settings));
            }
        }
    }

    void pin(double dt) {
        for (auto& f : factors_) {
            if (auto* block = std::get_if<BlockExp>(&f)) block->pin(dt);
        }
    }

    void step(Vector& v, double dt) {
        for (auto& f : factors_) std::visit([&](auto& factor) { factor.apply(v, dt); }, f);
    }

private:
    std::vector<std::variant<BlockExp, ExpAction>> factors_;
};

}  // namespace

StateVector trotter_evolve(const CompositeOperator& hamiltonian, std::span<const CompositeOperator> terms,
                           const StateVector& psi0, double t_total, int n_steps, const EvolutionSettings& settings) {
    settings.validate();
    if (n_steps < 1) throw Error(kModule, "n_steps must be at least 1");
    check_inputs(hamiltonian, psi0);
    check_terms(hamiltonian, terms);

    TrotterStepper stepper(terms, settings);
    Vector v = psi0.amplitudes();
    const double dt = t_total / n_steps;
    stepper.pin(dt);
    for (int k = 0; k < n_steps; ++k) stepper.step(v, dt);
    if (std::abs(v.norm() - 1.0) > kNormDriftLimit) throw Error(kModule, "norm drift in Trotter evolution");
    return StateVector(std::move(v));
}

Evolution trotter_series(std::span<const CompositeOperator> terms, const StateVector& psi0,
                         std::span<const double> times_ps, int n_steps, const EvolutionSettings& settings) {
    settings.validate();
    check_grid(times_ps);
    if (n_steps < 1) throw Error(kModule, "n_steps must be at least 1");
    if (terms.empty()) throw Error(kModule, "Trotter decomposition needs at least one term");
    CompositeOperator total = terms[0];
    for (std::size_t k = 1; k < terms.size(); ++k) total += terms[k];
    check_inputs(total, psi0);

    TrotterStepper stepper(terms, settings);
    Recorder rec(total.cutoff, &total.matrix, times_ps.size());
    const double dt = times_ps.back() / n_steps;
    stepper.pin(dt);
    Vector whole = psi0.amplitudes();  // state at an integer number of steps
    long done = 0;
    for (double t : times_ps) {
        const auto target = static_cast<long>(std::floor(t / dt + 1e-9));
        for (; done < std::min<long>(target, n_steps); ++done) stepper.step(whole, dt);
        const double frac = t - double(done) * dt;
        if (frac > 1e-12 * dt) {
            Vector partial = whole;
            stepper.step(partial, frac);
            rec.record(partial);
        } else {
            rec.record(whole);
        }
    }
    return {rec.finish(times_ps, true), StateVector(std::move(whole))};
}

double default_window_fs(std::string_view molecule) {
    if (molecule == "pyrazine") return 500.0;
    return 300.0;
}

std::vector<double> uniform_grid(double t_max, int n_points) {
    if (n_points < 2) throw Error(kModule, "time grid needs at least two points");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(kModule, "t_max must be positive and finite");
    std::vector<double> out(n_points);
    for (int k = 0; k < n_points; ++k) out[k] = t_max * double(k) / double(n_points - 1);
    out.back() = t_max;
    return out;
}

TimeSeries population_trace(const MoleculeParams& params, FockCutoff cutoff, double t_max_fs, int n_points,
                            const EvolutionSettings& settings) {
    const std::vector<double> grid_ps = uniform_grid(t_max_fs / kFsPerPs, n_points);
    const StateVector psi0 = initial_state(params, cutoff);
    if (settings.method == Method::trotter) {
        const auto terms = hamiltonian_terms(params, cutoff).ordered();
        return trotter_series(terms, psi0, grid_ps, settings.trotter_steps, settings).series;
    }
    return evolve(build_hamiltonian(params, cutoff), psi0, grid_ps, settings).series;
}

}  // namespace vibrosim
