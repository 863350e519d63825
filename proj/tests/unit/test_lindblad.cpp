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

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vibrosim/lindblad.hpp"

using namespace vibrosim;

namespace {

oracle::Lvc to_oracle(const MoleculeParams& p) { return {p.nu1, p.nu2, p.delta_e, p.kappa, p.lambda, p.alpha}; }

DenseMatrix random_density(Index dim, unsigned seed) {
    std::srand(seed);
    DenseMatrix a = DenseMatrix::Random(dim, dim);
    DenseMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

std::vector<std::pair<double, oracle::Mat>> oracle_jumps(const DissipationRates& r, int n) {
    const oracle::Mat a = oracle::lowering(n);
    std::vector<std::pair<double, oracle::Mat>> out;
    for (int mode = 0; mode < 2; ++mode) {
        out.emplace_back(r.modes[mode].gamma_plus, oracle::embed_mode(a.adjoint(), mode, n));
        out.emplace_back(r.modes[mode].gamma_minus, oracle::embed_mode(a, mode, n));
    }
    return out;
}

DissipationRates uneven() {
    DissipationRates r;
    r.modes[0] = {3.0, 5.0};
    r.modes[1] = {7.0, 0.5};
    return r;
}

CompositeOperator zero_hamiltonian(FockCutoff c) { return {c, SparseMatrix(c.composite_dim(), c.composite_dim())}; }

}  // namespace

TEST_CASE("generator matches the dense GKSL oracle") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const int n = 4;
        const FockCutoff c(n);
        const DissipationRates rates = uneven();
        const Liouvillian gen(build_hamiltonian(p, c), rates);
        const DenseMatrix rho = random_density(c.composite_dim(), 3);
        DenseMatrix out;
        gen.apply(rho, out);
        const oracle::Mat ref = oracle::lindblad_rhs(oracle::lvc_hamiltonian(to_oracle(p), n), oracle_jumps(rates, n), rho);
        CHECK((out - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
        // Trace-preserving and Hermiticity-preserving generator.
        CHECK(std::abs(out.trace()) < 1e-10 * ref.cwiseAbs().maxCoeff());
        CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * ref.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("single-mode dissipator against the oracle") {
    const int n = 5;
    const FockCutoff c(n);
    const DensityMatrix rho(random_density(c.composite_dim(), 9));
    const oracle::Mat a = oracle::lowering(n);
    for (int mode = 0; mode < 2; ++mode) {
        const ModeRates r{1.25, 0.75};
        const DenseMatrix got = dissipator_apply(rho, mode, r, c);
        const oracle::Mat ref = oracle::lindblad_rhs(
            oracle::Mat::Zero(rho.dim(), rho.dim()),
            {{r.gamma_plus, oracle::embed_mode(a.adjoint(), mode, n)}, {r.gamma_minus, oracle::embed_mode(a, mode, n)}},
            rho.entries());
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK_THROWS_AS(dissipator_apply(rho, 2, {1.0, 1.0}, c), Error);
}

TEST_CASE("banded storage reproduces the sparse operator") {
    const auto& p = molecule_preset("pyrazine");
    const FockCutoff c(5);
    const SparseMatrix h = build_hamiltonian(p, c).matrix;
    const BandedOperator b = BandedOperator::from_sparse(h);
    DenseMatrix rebuilt = DenseMatrix::Zero(h.rows(), h.cols());
    for (const auto& band : b.bands) {
        for (Index i = band.begin; i < band.end; ++i) rebuilt(i, i + band.offset) = band.coeff[i];
    }
    CHECK((rebuilt - DenseMatrix(h)).cwiseAbs().maxCoeff() == 0.0);
    // Offsets: diagonal, kappa coupling on mode 1 (stride 5), lambda coupling
    // flipping the qubit (stride 25) while moving mode 2 by one level.
    CHECK(b.band(0) != nullptr);
    CHECK(b.band(5) != nullptr);
    CHECK(b.band(-5) != nullptr);
    CHECK(b.band(24) != nullptr);
    CHECK(b.band(26) != nullptr);
    CHECK(b.band(1) == nullptr);
    CHECK(b.bands.size() == 7);
}

TEST_CASE("zero rates reduce to closed dynamics") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const int n = 8;
        const FockCutoff c(n);
        const auto grid = uniform_grid(0.02, 21);
        const OpenEvolution ev = evolve_open(build_hamiltonian(p, c), DissipationRates{},
                                             DensityMatrix::from_pure(initial_state(p, c)), grid);
        const oracle::SpectralPropagator ref(oracle::lvc_hamiltonian(to_oracle(p), n));
        const oracle::Vec psi0 = oracle::initial_state(p.alpha, n);
        const auto& P = ev.series.column("P_diabatic");
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(P[k] - oracle::upper_population(ref.evolve(psi0, grid[k]))) < 1e-7);
        }
        CHECK(ev.series.column("purity").back() == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("H = 0 with equal rates: <n>(t) = gamma t") {
    const FockCutoff c(8);
    const double gamma = 1.0;
    DissipationRates rates;
    rates.modes[0] = {gamma, gamma};
    const auto grid = uniform_grid(0.05, 11);
    const DensityMatrix rho0 = DensityMatrix::from_pure(product_state(qubit_state(1), fock_state(0, c), fock_state(0, c)));
    const OpenEvolution ev = evolve_open(zero_hamiltonian(c), rates, rho0, grid);
    const auto& n1 = ev.series.column("n1");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(std::abs(n1[k] - gamma * grid[k]) < 1e-6 * gamma * grid[k]);
        CHECK(std::abs(ev.series.column("trace")[k] - 1.0) < 1e-8);
    }
    CHECK(ev.series.column("n2").back() == 0.0);
    CHECK(ev.series.column("P_diabatic").back() == doctest::Approx(1.0));
}

TEST_CASE("open evolution keeps rho a state; purity decays under an unital bath") {
    const auto& p = molecule_preset("pyrazine");
    const FockCutoff c(6);
    OpenSettings s;
    s.positivity_checks = 4;
    const OpenEvolution ev = evolve_open(build_hamiltonian(p, c), DissipationRates::equal(50.0),
                                         DensityMatrix::from_pure(initial_state(p, c)), uniform_grid(0.01, 21), s);
    const auto& purity = ev.series.column("purity");
    for (std::size_t k = 1; k < purity.size(); ++k) CHECK(purity[k] <= purity[k - 1] + 1e-12);
    CHECK(purity.back() < 0.5);
    CHECK(ev.max_trace_drift < 1e-8);
    CHECK(ev.min_eigenvalue > -1e-10);
    CHECK(ev.final_state.hermiticity_error() == 0.0);
    CHECK(ev.steps > 0);
}

TEST_CASE("RK4 global error falls as h^4") {
    const auto& p = molecule_preset("pyrazine");
    const FockCutoff c(4);
    const CompositeOperator h = build_hamiltonian(p, c);
    const DissipationRates rates = DissipationRates::equal(20.0);
    const DensityMatrix rho0 = DensityMatrix::from_pure(initial_state(p, c));
    const double t = 0.005;
    const std::vector<double> grid = {0.0, t};
    const auto run = [&](int n) {
        OpenSettings s;
        s.step = t / n;
        s.positivity_checks = 0;
        return evolve_open(h, rates, rho0, grid, s).final_state.entries();
    };
    const DenseMatrix ref = run(2560);
    std::vector<double> logn, logerr;
    for (int n : {20, 40, 80, 160}) {
        logn.push_back(std::log(double(n)));
        logerr.push_back(std::log((run(n) - ref).cwiseAbs().maxCoeff()));
    }
    const double slope = (logerr.back() - logerr.front()) / (logn.back() - logn.front());
    CAPTURE(slope);
    CHECK(slope == doctest::Approx(-4.0).epsilon(0.2));
}

TEST_CASE("strong infinite-temperature bath drives P to one half") {
    const auto& p = molecule_preset("pyrazine");
    const FockCutoff c(6);
    OpenSettings s;
    s.positivity_checks = 1;
    const OpenEvolution ev = evolve_open(build_hamiltonian(p, c), DissipationRates::equal(491.0),
                                         DensityMatrix::from_pure(initial_state(p, c)), uniform_grid(0.03, 7), s);
    CHECK(ev.series.column("P_diabatic").back() == doctest::Approx(0.5).epsilon(0.01));
    // The maximally mixed state is the fixed point: <n> -> (N - 1) / 2.
    CHECK(ev.series.column("n1").back() == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("step selection") {
    const auto& p = molecule_preset("butatriene");
    const FockCutoff c(6);
    const Liouvillian gen(build_hamiltonian(p, c), DissipationRates::equal(100.0));
    CHECK(gen.spectral_bound() > gen.hamiltonian_width());
    OpenSettings s;
    const double dt = select_step(gen, s);
    CHECK(dt * gen.hamiltonian_width() <= s.accuracy * (1 + 1e-12));
    CHECK(dt * gen.spectral_bound() <= s.stability * (1 + 1e-12));
    s.step = 1e-9;
    CHECK(select_step(gen, s) == 1e-9);

    std::vector<std::string> seen;
    const auto previous = set_warning_handler([&](std::string_view, std::string_view m) { seen.emplace_back(m); });
    s.step = 10.0 / gen.spectral_bound();
    select_step(gen, s);
    set_warning_handler(previous);
    CHECK(seen.size() == 1);
}

TEST_CASE("input validation") {
    DissipationRates r;
    r.modes[1].gamma_minus = -1.0;
    CHECK_THROWS_WITH_AS(r.validate(), doctest::Contains("lindblad"), Error);
    CHECK(DissipationRates{}.is_zero());
    CHECK(DissipationRates::equal(2.0).max_rate() == 2.0);

    OpenSettings s;
    s.stability = 2.7;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.accuracy = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);

    const auto& p = molecule_preset("allene");
    const FockCutoff c(3);
    DenseMatrix bad = DensityMatrix::from_pure(initial_state(p, c)).entries() * 2.0;
    const std::vector<double> grid = {0.0, 0.001};
    CHECK_THROWS_AS(evolve_open(build_hamiltonian(p, c), {}, DensityMatrix(bad), grid), Error);
    const std::vector<double> backwards = {0.0, 0.002, 0.001};
    CHECK_THROWS_AS(evolve_open(build_hamiltonian(p, c), {}, DensityMatrix::from_pure(initial_state(p, c)), backwards),
                    Error);
}
