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

#include <bit>
#include <cmath>

#include "vibrosim/resources.hpp"

using namespace vibrosim;

TEST_CASE("qubit count uses binary-encoded modes plus one electronic qubit") {
    CHECK(qubit_count(32, 2) == 11);
    CHECK(qubit_count(2, 1) == 2);
    CHECK(qubit_count(33, 2) == 13);
    for (int n = 2; n <= 300; ++n) {
        CAPTURE(n);
        CHECK(qubit_count(n, 3) == 3 * int(std::bit_width(unsigned(n - 1))) + 1);
    }
    CHECK_THROWS_WITH_AS(qubit_count(1, 2), doctest::Contains("resources"), Error);
    CHECK_THROWS_AS(qubit_count(8, 0), Error);
}

TEST_CASE("mean squared error over the population column") {
    TimeSeries a({0.0, 1.0, 2.0}), b({0.0, 1.0, 2.0}), c({0.0, 1.0, 3.0});
    a.add_column("P_diabatic", {1.0, 0.5, 0.25});
    b.add_column("P_diabatic", {1.0, 0.7, 0.05});
    c.add_column("P_diabatic", {1.0, 0.5, 0.25});
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(a, b) == doctest::Approx((0.04 + 0.04) / 3.0));
    CHECK_THROWS_AS(mse(a, c), Error);
    CHECK_THROWS_AS(mse(a, b, "n1"), Error);
}

TEST_CASE("pinned steps: CNOT total is steps times CNOT per step") {
    const auto& p = molecule_preset("butatriene");
    EstimateRequest req;
    req.t_max_fs = 30.0;
    req.pinned_steps = 300;
    req.cnot_per_step = 1000;
    req.search.n_points = 31;
    const ResourceEstimate e = estimate(p, FockCutoff(8), req);
    CHECK(e.cnot_total == 300000);
    CHECK(e.trotter_steps == 300);
    CHECK(e.steps_pinned);
    CHECK(e.qubits == 7);
    CHECK(e.mse_achieved >= 0.0);
    CHECK(e.mse_achieved < 1e-3);

    const std::string kv = to_key_value(e);
    CHECK(kv.find("cnot_total = 300000\n") != std::string::npos);
    CHECK(kv.find("qubits = 7\n") != std::string::npos);
    CHECK(format_report(e, p, FockCutoff(8), req).find("pinned") != std::string::npos);

    req.cnot_per_step = 0;
    CHECK_THROWS_AS(estimate(p, FockCutoff(8), req), Error);
}

TEST_CASE("step search returns the smallest count meeting the target") {
    const auto& p = molecule_preset("butatriene");
    const FockCutoff c(8);
    TrotterSearchSettings s;
    s.n_points = 61;
    const double target = 1e-4;
    const StepSearchResult r = trotter_steps_for_mse(p, c, 60.0, target, s);
    CAPTURE(r.steps);
    CHECK(r.mse <= target);
    CHECK(r.mse == trotter_mse(p, c, 60.0, r.steps, s));
    CHECK(trotter_mse(p, c, 60.0, r.steps - 1, s) > target);
    // More steps never hurt by much in this regime.
    CHECK(trotter_mse(p, c, 60.0, 4 * r.steps, s) < r.mse);
}

TEST_CASE("step search gives up at the ceiling") {
    TrotterSearchSettings s;
    s.n_points = 11;
    s.step_ceiling = 4;
    CHECK_THROWS_WITH_AS(trotter_steps_for_mse(molecule_preset("allene"), FockCutoff(6), 50.0, 1e-14, s),
                         doctest::Contains("not reached"), Error);
    CHECK_THROWS_AS(trotter_steps_for_mse(molecule_preset("allene"), FockCutoff(6), 50.0, 0.0, s), Error);
}
