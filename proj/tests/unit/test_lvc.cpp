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

#include "oracles.hpp"
#include "vibrosim/lvc.hpp"

using namespace vibrosim;

namespace {

oracle::Lvc to_oracle(const MoleculeParams& p) { return {p.nu1, p.nu2, p.delta_e, p.kappa, p.lambda, p.alpha}; }

}  // namespace

TEST_CASE("presets carry the tabulated molecular parameters") {
    const auto& allene = molecule_preset("allene");
    CHECK(allene.nu1 == 22.5);
    CHECK(allene.nu2 == 57.3);
    CHECK(allene.delta_e == 0.0);
    CHECK(allene.kappa == 74.7);
    CHECK(allene.lambda == 67.7);
    CHECK(allene.alpha == 0.0);
    CHECK(allene.scaling.value() == 1.08e-11);

    const auto& butatriene = molecule_preset("butatriene");
    CHECK(butatriene.nu1 == 62.9);
    CHECK(butatriene.nu2 == 22.0);
    CHECK(butatriene.delta_e == 131.5);
    CHECK(butatriene.kappa == 62.1);
    CHECK(butatriene.lambda == 69.6);
    CHECK(butatriene.alpha == -0.140);
    CHECK(butatriene.scaling.value() == 1.10e-11);

    const auto& pyrazine = molecule_preset("pyrazine");
    CHECK(pyrazine.nu1 == 17.9);
    CHECK(pyrazine.nu2 == 28.5);
    CHECK(pyrazine.delta_e == 199.0);
    CHECK(pyrazine.kappa == -30.7);
    CHECK(pyrazine.lambda == 63.3);
    CHECK(pyrazine.alpha == 0.210);
    CHECK(pyrazine.scaling.value() == 1.33e-11);

    CHECK(molecule_presets().size() == 3);
    CHECK_THROWS_WITH_AS(molecule_preset("benzene"), doctest::Contains("lvc_model"), Error);
}

TEST_CASE("Hamiltonian equals the element-wise oracle for every preset") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        for (int n : {2, 5, 8}) {
            const CompositeOperator h = build_hamiltonian(p, FockCutoff(n));
            const oracle::Mat ref = oracle::lvc_hamiltonian(to_oracle(p), n);
            const double scale = ref.cwiseAbs().maxCoeff();
            CHECK((DenseMatrix(h.matrix) - ref).cwiseAbs().maxCoeff() <= 1e-14 * scale);
        }
    }
}

TEST_CASE("Hamiltonian is Hermitian at production cutoff, including negative kappa") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const CompositeOperator h = build_hamiltonian(p, FockCutoff(32));
        CHECK(h.dim() == 2048);
        CHECK(h.hermiticity_error() < 1e-12);
    }
    // Flipping the sign of kappa is equivalent to conjugating with the mode-1 parity.
    MoleculeParams flipped = molecule_preset("pyrazine");
    flipped.kappa = -flipped.kappa;
    const FockCutoff c(6);
    const DenseMatrix h = DenseMatrix(build_hamiltonian(molecule_preset("pyrazine"), c).matrix);
    const DenseMatrix g = DenseMatrix(build_hamiltonian(flipped, c).matrix);
    DenseMatrix parity = DenseMatrix::Zero(h.rows(), h.cols());
    for (int q = 0; q < 2; ++q)
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                const Index i = oracle::index(q, a, b, 6);
                parity(i, i) = (a % 2 == 0) ? 1.0 : -1.0;
            }
    CHECK((parity * h * parity - g).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("term split sums to the full Hamiltonian") {
    const auto& p = molecule_preset("butatriene");
    const FockCutoff c(7);
    const HamiltonianTerms t = hamiltonian_terms(p, c);
    CHECK(max_abs_difference(t.sum().matrix, build_hamiltonian(p, c).matrix) < 1e-12);
    CHECK(t.ordered().size() == 3);
    // The electronic term is diagonal; mode 2 carries all qubit flips.
    CHECK(DenseMatrix(t.electronic.matrix).isDiagonal());
}

TEST_CASE("initial state: upper level, displaced mode 1, vacuum mode 2") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const FockCutoff c(16);
        const StateVector psi = initial_state(p, c);
        const oracle::Vec ref = oracle::initial_state(p.alpha, 16);
        CHECK((psi.amplitudes() - ref).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(diabatic_population(psi) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(psi.expectation(mode_number(0, c)) == doctest::Approx(p.alpha * p.alpha).epsilon(1e-10));
        CHECK(psi.expectation(mode_number(1, c)) == doctest::Approx(0.0));
    }
}

TEST_CASE("diabatic population rejects unnormalized input") {
    const FockCutoff c(4);
    StateVector psi = initial_state(molecule_preset("allene"), c);
    psi.amplitudes() *= 1.01;
    CHECK_THROWS_AS(diabatic_population(psi), Error);
    CHECK(diabatic_population(StateVector(oracle::initial_state(0.3, 4))) == doctest::Approx(1.0));
}

TEST_CASE("adiabatic surfaces are the eigenvalues of the 2x2 diabatic potential") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const double w1 = kTwoPi * p.nu1, w2 = kTwoPi * p.nu2;
        for (double q1 : {-2.5, -0.3, 0.0, 1.7}) {
            for (double q2 : {-1.0, 0.0, 0.4, 3.0}) {
                Eigen::Matrix2d v;
                const double shift = 0.5 * (w1 * q1 * q1 + w2 * q2 * q2);
                v << shift - 0.5 * kTwoPi * p.delta_e + kTwoPi * p.kappa * q1, kTwoPi * p.lambda * q2,
                    kTwoPi * p.lambda * q2, shift + 0.5 * kTwoPi * p.delta_e - kTwoPi * p.kappa * q1;
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(v);
                const SurfacePoint e = adiabatic_energies(p, q1, q2);
                CHECK(e.lower == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
                CHECK(e.upper == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("surface grid shape and ordering") {
    const SurfaceGrid g = adiabatic_surfaces(molecule_preset("allene"), GridSpec{-1.0, 1.0, 5});
    CHECK(g.q1_points.size() == 5);
    CHECK(g.lower.rows() == 5);
    CHECK(g.lower.cols() == 5);
    CHECK((g.upper - g.lower).minCoeff() >= 0.0);
    CHECK(g.q1_points.front() == -1.0);
    CHECK(g.q1_points.back() == 1.0);
    CHECK_THROWS_AS(GridSpec({1.0, -1.0, 5}).axis(), Error);
    CHECK_THROWS_AS(GridSpec({-1.0, 1.0, 1}).axis(), Error);
}

TEST_CASE("conical intersection is a degeneracy of the surfaces") {
    for (const auto& p : molecule_presets()) {
        CAPTURE(p.name);
        const auto ci = conical_intersection(p);
        REQUIRE(ci.has_value());
        CHECK(ci->second == 0.0);
        const SurfacePoint e = adiabatic_energies(p, ci->first, ci->second);
        CHECK(std::abs(e.upper - e.lower) < 1e-9 * std::max(1.0, std::abs(e.lower)));
    }
    // Allene: symmetric case, crossing at the origin.
    CHECK(conical_intersection(molecule_preset("allene"))->first == 0.0);
    MoleculeParams no_tuning = molecule_preset("butatriene");
    no_tuning.kappa = 0.0;
    CHECK_FALSE(conical_intersection(no_tuning).has_value());
}

TEST_CASE("parameter validation") {
    MoleculeParams p = molecule_preset("allene");
    p.nu1 = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = molecule_preset("allene");
    p.lambda = std::nan("");
    CHECK_THROWS_AS(build_hamiltonian(p, FockCutoff(3)), Error);
}
