// Copyright 2026 The seaqtsim authors
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

#include <catch2/catch_amalgamated.hpp>

#include "seaqtsim/metrics.hpp"
#include "test_util.hpp"

using namespace seaqtsim;
namespace tst = seaqtsim::testing;

TEST_CASE("concurrence closed forms", "[metrics]") {
    const Vector phi = bell_phi();
    REQUIRE(concurrence(phi * phi.adjoint()) == Catch::Approx(1.0).margin(1e-12));

    auto g = tst::rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix prod = kron(tst::random_density(2, g), tst::random_density(2, g));
        REQUIRE(concurrence(prod) < 1e-7);
    }
}

TEST_CASE("werner state concurrence matches the closed form", "[metrics]") {
    // p |Phi><Phi| + (1-p) I/4 has concurrence max(0, (3p-1)/2).
    const Vector phi = bell_phi();
    const Matrix proj = phi * phi.adjoint();
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8}) {
        const Matrix werner = p * proj + (1.0 - p) * 0.25 * identity(4);
        const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        REQUIRE(concurrence(werner) == Catch::Approx(expected).margin(1e-10));
    }
}

TEST_CASE("concurrence is invariant under local unitaries", "[metrics]") {
    auto g = tst::rng(72);
    const Vector phi = bell_phi();
    const Matrix bell = phi * phi.adjoint();
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix u = kron(tst::random_unitary(2, g), tst::random_unitary(2, g));
        const Matrix rotated = u * bell * u.adjoint();
        REQUIRE(std::abs(concurrence(rotated) - 1.0) < 1e-10);
    }
}

TEST_CASE("bell fidelity closed forms", "[metrics]") {
    const Vector phi = bell_phi();
    REQUIRE(bell_fidelity(phi * phi.adjoint()) == Catch::Approx(1.0));

    Vector psi = Vector::Zero(4);  // orthogonal Bell state (|01> + |10>)/sqrt(2)
    psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
    REQUIRE(bell_fidelity(psi * psi.adjoint()) == Catch::Approx(0.0).margin(1e-14));

    REQUIRE(bell_fidelity(0.25 * identity(4)) == Catch::Approx(0.25));
}

TEST_CASE("bell fidelity is linear in the state", "[metrics]") {
    auto g = tst::rng(73);
    const Matrix a = tst::random_density(4, g);
    const Matrix b = tst::random_density(4, g);
    for (double w : {0.0, 0.3, 0.7, 1.0}) {
        const Matrix mix = w * a + (1.0 - w) * b;
        const double lhs = bell_fidelity(mix);
        const double rhs = w * bell_fidelity(a) + (1.0 - w) * bell_fidelity(b);
        REQUIRE(lhs == Catch::Approx(rhs).margin(1e-13));
    }
}
