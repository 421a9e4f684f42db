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
#include <cmath>

#include "seaqtsim/hamiltonians.hpp"
#include "seaqtsim/integrator.hpp"
#include "seaqtsim/lindblad.hpp"
#include "seaqtsim/seaqt.hpp"
#include "test_util.hpp"

using namespace seaqtsim;
namespace tst = seaqtsim::testing;

namespace {

Matrix plus_state() {
    Vector plus = (basis_ket(0, 2) + basis_ket(1, 2)) / std::sqrt(2.0);
    return plus * plus.adjoint();
}

/// Precession under H = (omega/2) sigma_z from |+>: <X>(t) = cos(omega t).
double precession_error(double omega, double t_end, double dt) {
    const Matrix h = 0.5 * omega * pauli_z();
    auto rhs = [&h](const Matrix& rho, double) -> Matrix {
        return -kImag * commutator(h, rho);
    };
    IntegratorConfig cfg;
    cfg.dt = dt;
    const Trajectory traj = integrate(rhs, DensityOperator(plus_state()), t_end, {t_end}, cfg);
    return std::abs(traj.observables.back().x[0] - std::cos(omega * t_end));
}

}  // namespace

TEST_CASE("zero rhs keeps the state fixed", "[integrator]") {
    auto g = tst::rng(61);
    const Matrix rho0 = tst::random_density(2, g);
    auto rhs = [](const Matrix& rho, double) -> Matrix {
        return Matrix::Zero(rho.rows(), rho.cols());
    };
    const Trajectory traj = integrate(rhs, DensityOperator(rho0), 5.0, {1.0, 3.0, 5.0}, {});
    for (const Matrix& rho : traj.states) {
        REQUIRE((rho - rho0).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("analytic precession is reproduced", "[integrator]") {
    const double omega = 1.0;
    REQUIRE(precession_error(omega, 10.0 / omega, 0.005) < 1e-8);
}

TEST_CASE("step halving shows fourth-order convergence", "[integrator]") {
    const double omega = 1.0;
    const double e1 = precession_error(omega, 10.0, 0.1);
    const double e2 = precession_error(omega, 10.0, 0.05);
    const double slope = std::log2(e1 / e2);
    REQUIRE(slope > 3.8);
    REQUIRE(slope < 4.2);
}

TEST_CASE("samples land exactly on requested times", "[integrator]") {
    const Matrix h = 0.5 * pauli_z();
    auto rhs = [&h](const Matrix& rho, double) -> Matrix {
        return -kImag * commutator(h, rho);
    };
    // Sample times incommensurate with dt.
    const std::vector<double> samples = {0.0, 0.0137, 1.001, 2.718};
    const Trajectory traj = integrate(rhs, DensityOperator(plus_state()), 2.718, samples, {});
    REQUIRE(traj.times == samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        REQUIRE(traj.observables[i].x[0] == Catch::Approx(std::cos(samples[i])).margin(1e-9));
    }
}

TEST_CASE("sample validation", "[integrator]") {
    auto rhs = [](const Matrix& rho, double) -> Matrix {
        return Matrix::Zero(rho.rows(), rho.cols());
    };
    const DensityOperator rho0(0.5 * identity(2));
    REQUIRE_THROWS_AS(integrate(rhs, rho0, 1.0, {0.5, 0.4}, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate(rhs, rho0, 1.0, {0.5, 2.0}, {}), std::invalid_argument);
}

TEST_CASE("trace drift aborts the integration", "[integrator]") {
    // A deliberately non-traceless right-hand side.
    auto rhs = [](const Matrix& rho, double) -> Matrix { return 0.01 * identity(rho.rows()); };
    try {
        integrate(rhs, DensityOperator(0.5 * identity(2)), 10.0, {10.0}, {});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        REQUIRE(e.kind == IntegrationError::Kind::trace_drift);
    }
}

TEST_CASE("positivity violation aborts the integration", "[integrator]") {
    // Traceless but indefinite drift pushes an eigenvalue negative.
    auto rhs = [](const Matrix& rho, double) -> Matrix {
        Matrix m = Matrix::Zero(rho.rows(), rho.cols());
        m(0, 0) = 0.05;
        m(1, 1) = -0.05;
        return m;
    };
    Matrix nearly_ground = Matrix::Zero(2, 2);
    nearly_ground(0, 0) = 0.999;
    nearly_ground(1, 1) = 0.001;
    try {
        integrate(rhs, DensityOperator(nearly_ground), 10.0, {10.0}, {});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        REQUIRE(e.kind == IntegrationError::Kind::positivity);
    }
}

TEST_CASE("engine trajectories keep trace and hermiticity over the full horizon",
          "[integrator]") {
    auto g = tst::rng(62);
    const std::vector<double> grid = {10.0, 20.0, 30.0, 42.6};

    SeaqtConfig scfg;
    scfg.tau_dj = 11.3;
    scfg.x0 = 60.5;
    scfg.beta_r = 50.0 / (2.0 * 3.14159265358979 * 4850.0);
    const SeaqtEom seom(Matrix::Zero(2, 2), two_level_hamiltonian(2.0 * 3.14159265358979 * 4850.0),
                        scfg);
    Matrix rho0 = 0.5 * (identity(2) + 0.9 * pauli_x());
    Trajectory traj = integrate(seom, DensityOperator(rho0), 42.6, grid, {});
    for (const Matrix& rho : traj.states) {
        REQUIRE(std::abs(rho.trace().real() - 1.0) < 1e-8);
        REQUIRE(hermiticity_residual(rho) < 1e-10);
    }

    const LindbladEom leom{Matrix::Zero(2, 2), {1.0 / 97.25, 1.0 / 73.2}};
    traj = integrate(leom, DensityOperator(tst::random_density(2, g)), 42.6, grid, {});
    for (const Matrix& rho : traj.states) {
        REQUIRE(std::abs(rho.trace().real() - 1.0) < 1e-8);
        REQUIRE(hermiticity_residual(rho) < 1e-10);
    }
}
