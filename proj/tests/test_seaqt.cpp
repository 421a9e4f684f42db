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
#include <numbers>

#include "seaqtsim/hamiltonians.hpp"
#include "seaqtsim/seaqt.hpp"
#include "test_util.hpp"

using namespace seaqtsim;
namespace tst = seaqtsim::testing;
using std::numbers::pi;

namespace {

Matrix gibbs_state(const Matrix& h, double beta) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd w = (-beta * es.eigenvalues().array()).exp();
    w /= w.sum();
    return es.eigenvectors() * w.asDiagonal().toDenseMatrix().cast<Complex>() *
           es.eigenvectors().adjoint();
}

/// Independent evaluation of the two-qubit dephasing operator: explicit
/// cofactor expansion with the test's own partial-trace, projection and
/// inner-product code.
Matrix dephasing_oracle(const Matrix& rho, const Matrix& h, bool on_first, double rank_eps) {
    const Matrix rho_j = tst::partial_trace_oracle(rho, on_first);
    const Matrix rho_other = tst::partial_trace_oracle(rho, !on_first);

    Eigen::SelfAdjointEigenSolver<Matrix> es_j(rho_j);
    Eigen::VectorXd root = es_j.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix sqrt_j = es_j.eigenvectors() * root.asDiagonal().toDenseMatrix().cast<Complex>() *
                          es_j.eigenvectors().adjoint();

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Eigen::VectorXd lg = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < 4; ++i) {
        if (es.eigenvalues()(i) > rank_eps) lg(i) = std::log(es.eigenvalues()(i));
    }
    const Matrix bln = es.eigenvectors() * lg.asDiagonal().toDenseMatrix().cast<Complex>() *
                       es.eigenvectors().adjoint();

    const Matrix a1 = tst::local_projection_oracle(bln, rho_other, on_first);
    const Matrix a2 = tst::local_projection_oracle(identity(4), rho_other, on_first);
    const Matrix a3 = tst::local_projection_oracle(h, rho_other, on_first);
    auto ip = [&](const Matrix& f, const Matrix& g) {
        return (rho_j * (f * g + g * f)).trace().real();
    };
    const double b1 = ip(a2, a1), b2 = ip(a2, a2), b3 = ip(a2, a3);
    const double c1 = ip(a3, a1), c2 = ip(a3, a2), c3 = ip(a3, a3);
    const double gamma = b2 * c3 - b3 * c2;
    const Matrix num = (sqrt_j * a1) * (b2 * c3 - b3 * c2) - (sqrt_j * a2) * (b1 * c3 - b3 * c1) +
                       (sqrt_j * a3) * (b1 * c2 - b2 * c1);
    const Matrix d_tilde = num / gamma;
    const Matrix sd = sqrt_j * d_tilde;
    return 0.5 * (sd + sd.adjoint().eval());
}

ReservoirMoments canonical_reservoir(int levels, double beta, double spacing, bool center,
                                     const Matrix& rho_sys, const Matrix& h_sys) {
    Eigen::VectorXd e(levels);
    for (int k = 0; k < levels; ++k) e(k) = k * spacing;
    Eigen::VectorXd w = (-beta * e.array()).exp();
    w /= w.sum();
    if (center) e.array() -= (w.array() * e.array()).sum();

    ReservoirMoments m;
    m.p_r = levels;
    m.e_r = (w.array() * e.array()).sum();
    m.e2_r = (w.array() * e.array() * e.array()).sum();
    m.s_r = -(w.array() * w.array().log()).sum();
    m.es_r = -(w.array() * e.array() * w.array().log()).sum();

    m.p_j = static_cast<double>(rho_sys.rows());
    m.s_j = von_neumann_entropy(rho_sys);
    m.e_j = expectation(rho_sys, h_sys);
    m.es_j = -(rho_sys * h_sys * range_log(rho_sys)).trace().real();
    m.e2_j = (rho_sys * h_sys * h_sys).trace().real();
    return m;
}

}  // namespace

TEST_CASE("local projection closed forms", "[seaqt]") {
    auto g = tst::rng(31);
    const Matrix rho = tst::random_density(4, g);
    REQUIRE((local_projection(identity(4), rho, Subsystem::A) - identity(2))
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    REQUIRE((local_projection(identity(4), rho, Subsystem::B) - identity(2))
                .cwiseAbs()
                .maxCoeff() < 1e-13);

    const Matrix a = tst::random_hermitian(2, g);
    REQUIRE((local_projection(kron(a, identity(2)), rho, Subsystem::A) - a).cwiseAbs().maxCoeff() <
            1e-13);
    REQUIRE((local_projection(kron(identity(2), a), rho, Subsystem::B) - a).cwiseAbs().maxCoeff() <
            1e-13);
}

TEST_CASE("local projection matches the contraction oracle", "[seaqt]") {
    auto g = tst::rng(32);
    Vector phi = Vector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const Matrix bell = phi * phi.adjoint();
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix f = tst::random_hermitian(4, g);
        const Matrix rho = (trial == 0) ? bell : tst::random_density(4, g);
        const Matrix rb = tst::partial_trace_oracle(rho, false);
        const Matrix ra = tst::partial_trace_oracle(rho, true);
        REQUIRE((local_projection(f, rho, Subsystem::A) -
                 tst::local_projection_oracle(f, rb, true))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
        REQUIRE((local_projection(f, rho, Subsystem::B) -
                 tst::local_projection_oracle(f, ra, false))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
        const Matrix fa = local_projection(f, rho, Subsystem::A);
        REQUIRE(hermiticity_residual(fa) < 1e-12);
    }
}

TEST_CASE("hs inner product closed forms and oracle", "[seaqt]") {
    auto g = tst::rng(33);
    const Matrix i4 = identity(4);
    const Matrix rho_prod = kron(tst::random_density(2, g), tst::random_density(2, g));
    REQUIRE(hs_inner(i4, i4, rho_prod, Subsystem::A) == Catch::Approx(2.0));
    REQUIRE(hs_inner(i4, i4, rho_prod, Subsystem::B) == Catch::Approx(2.0));

    const Matrix h = tst::random_hermitian(4, g);
    const Matrix rho_a = tst::partial_trace_oracle(rho_prod, true);
    const Matrix ha = tst::local_projection_oracle(h, tst::partial_trace_oracle(rho_prod, false),
                                                   true);
    REQUIRE(hs_inner(i4, h, rho_prod, Subsystem::A) ==
            Catch::Approx(2.0 * (rho_a * ha).trace().real()));

    for (int trial = 0; trial < 20; ++trial) {
        const Matrix f = tst::random_hermitian(4, g);
        const Matrix k = tst::random_hermitian(4, g);
        const Matrix rho = tst::random_density(4, g);
        const Matrix rb = tst::partial_trace_oracle(rho, false);
        const Matrix fa = tst::local_projection_oracle(f, rb, true);
        const Matrix ka = tst::local_projection_oracle(k, rb, true);
        const Matrix ra = tst::partial_trace_oracle(rho, true);
        const double expected = (ra * (fa * ka + ka * fa)).trace().real();
        REQUIRE(hs_inner(f, k, rho, Subsystem::A) == Catch::Approx(expected).margin(1e-11));
    }
}

TEST_CASE("two-qubit dephasing vanishes at SEA equilibria", "[seaqt]") {
    auto g = tst::rng(34);
    SeaqtConfig cfg;

    // Canonical product state with a sum Hamiltonian: the B ln rho column is
    // linearly dependent on the identity and Hamiltonian columns.
    const Matrix ha = tst::random_hermitian(2, g);
    const Matrix hb = tst::random_hermitian(2, g);
    const Matrix h = kron(ha, identity(2)) + kron(identity(2), hb);
    const double beta = 0.7;
    const Matrix rho = kron(gibbs_state(ha, beta), gibbs_state(hb, beta));
    REQUIRE(dephasing_dissipator(rho, h, Subsystem::A, cfg).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(dephasing_dissipator(rho, h, Subsystem::B, cfg).cwiseAbs().maxCoeff() < 1e-10);

    // Maximally mixed state (beta = 0 equilibrium).
    const Matrix mix = 0.25 * identity(4);
    REQUIRE(dephasing_dissipator(mix, h, Subsystem::A, cfg).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two-qubit dephasing matches the cofactor-expansion oracle", "[seaqt]") {
    auto g = tst::rng(35);
    SeaqtConfig cfg;
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix rho = tst::random_density(4, g);
        const Matrix h = tst::random_hermitian(4, g, 2.0);
        const Matrix da = dephasing_dissipator(rho, h, Subsystem::A, cfg);
        const Matrix db = dephasing_dissipator(rho, h, Subsystem::B, cfg);
        REQUIRE((da - dephasing_oracle(rho, h, true, cfg.rank_eps)).cwiseAbs().maxCoeff() < 1e-9);
        REQUIRE((db - dephasing_oracle(rho, h, false, cfg.rank_eps)).cwiseAbs().maxCoeff() < 1e-9);
        REQUIRE(hermiticity_residual(da) < 1e-12);
        // The construction conserves the trace and the locally-perceived
        // energy of every single dissipator exactly.
        REQUIRE(std::abs(da.trace()) < 1e-10);
        const Matrix ha_loc = local_projection(h, rho, Subsystem::A);
        REQUIRE(std::abs((da * ha_loc).trace().real()) < 1e-8);
    }
}

TEST_CASE("degenerate Gram determinant yields a flagged zero", "[seaqt]") {
    SeaqtConfig cfg;
    bool degenerate = false;
    const Matrix d = dephasing_dissipator(0.25 * identity(4), identity(4), Subsystem::A, cfg,
                                          &degenerate);
    REQUIRE(degenerate);
    REQUIRE(d.cwiseAbs().maxCoeff() == 0.0);

    // Same on one qubit: H proportional to the identity cannot pin a
    // temperature on a maximally mixed state.
    bool deg1 = false;
    const Matrix d1 = dephasing_dissipator(0.5 * identity(2), identity(2), cfg, &deg1);
    REQUIRE(deg1);
    REQUIRE(d1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("determinant ratio is invariant under inner-product rescaling", "[seaqt]") {
    auto g = tst::rng(36);
    for (double scale : {3.7, 0.04, 211.0}) {
        const Matrix rho = tst::random_density(2, g);
        const Matrix h = tst::random_hermitian(2, g);
        const Matrix sqrt_rho = matrix_sqrt(rho);
        const Matrix lg = range_log(rho);
        const Matrix i2 = identity(2);
        auto ip = [&](const Matrix& f, const Matrix& k) {
            return (rho * (f * k + k * f)).trace().real();
        };
        const double b1 = ip(i2, lg), b2 = ip(i2, i2), b3 = ip(i2, h);
        const double c1 = ip(h, lg), c2 = ip(h, i2), c3 = ip(h, h);
        bool deg = false;
        const Matrix base = detail::determinant_ratio_dissipator(sqrt_rho, lg, i2, h, b1, b2, b3,
                                                                 c1, c2, c3, 1e-14, &deg);
        const Matrix scaled = detail::determinant_ratio_dissipator(
            sqrt_rho, lg, i2, h, scale * b1, scale * b2, scale * b3, scale * c1, scale * c2,
            scale * c3, 1e-14, &deg);
        REQUIRE((base - scaled).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("single-qubit entropy-form dephasing closed forms", "[seaqt]") {
    SeaqtConfig cfg;
    const Matrix h = two_level_hamiltonian(1.0);
    REQUIRE(single_qubit_dephasing_dissipator(0.5 * identity(2), h, cfg).cwiseAbs().maxCoeff() <
            1e-12);

    const Vector plus = (basis_ket(0, 2) + basis_ket(1, 2)) / std::sqrt(2.0);
    const Matrix pure = plus * plus.adjoint();
    REQUIRE(single_qubit_dephasing_dissipator(pure, h, cfg).cwiseAbs().maxCoeff() < 1e-10);

    // Eigendecomposition-formula oracle: diagonal p_i (ln p_i + S) in the
    // state's own eigenbasis.
    const Matrix rho = 0.5 * (identity(2) + 0.6 * pauli_x() + 0.2 * pauli_z());
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const double s = -(es.eigenvalues().array() * es.eigenvalues().array().log()).sum();
    Eigen::VectorXd diag(2);
    for (int i = 0; i < 2; ++i) {
        diag(i) = es.eigenvalues()(i) * (std::log(es.eigenvalues()(i)) + s);
    }
    const Matrix expected = es.eigenvectors() * diag.asDiagonal().toDenseMatrix().cast<Complex>() *
                            es.eigenvectors().adjoint();
    REQUIRE((single_qubit_dephasing_dissipator(rho, h, cfg) - expected).cwiseAbs().maxCoeff() <
            1e-11);
}

TEST_CASE("relaxation dissipator closed forms", "[seaqt]") {
    // H proportional to the identity has no relaxation direction.
    auto g = tst::rng(37);
    const Matrix rho = tst::random_density(2, g);
    REQUIRE(relaxation_dissipator(rho, identity(2), 0.3).cwiseAbs().maxCoeff() < 1e-13);

    // |1><1| is an (unstable) fixed point: sqrt(rho) annihilates H - <e>I.
    const double omega = 2.0;
    const Matrix h = two_level_hamiltonian(omega);
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    REQUIRE(relaxation_dissipator(excited, h, 0.7).cwiseAbs().maxCoeff() < 1e-12);

    // Closed form for diagonal states: beta omega p0 p1 diag(-1, +1).
    for (double p1 : {0.15, 0.5, 0.9}) {
        Matrix diag = Matrix::Zero(2, 2);
        diag(0, 0) = 1.0 - p1;
        diag(1, 1) = p1;
        const double beta = 0.4;
        const Matrix d = relaxation_dissipator(diag, h, beta);
        const double expected = beta * omega * (1.0 - p1) * p1;
        REQUIRE(d(0, 0).real() == Catch::Approx(-expected).margin(1e-12));
        REQUIRE(d(1, 1).real() == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("combined reservoir dissipator is stationary at the Gibbs state", "[seaqt]") {
    for (double beta_omega : {0.5, 2.0, 50.0}) {
        const double omega = 2.0 * pi * 5.0;
        const Matrix h = two_level_hamiltonian(omega);
        SeaqtConfig cfg;
        cfg.beta_r = beta_omega / omega;
        const Matrix rho = gibbs_state(h, cfg.beta_r);
        REQUIRE(combined_reservoir_dissipator(rho, h, cfg).cwiseAbs().maxCoeff() < 1e-10);
        // The split pieces sum to the same operator.
        const Matrix split = single_qubit_dephasing_dissipator(rho, h, cfg) +
                             relaxation_dissipator(rho, h, cfg.beta_r);
        REQUIRE(split.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("tau_dr follows the sigma_z expectation with a floor", "[seaqt]") {
    SeaqtConfig cfg;
    const double x0 = 60.5;
    Matrix ground = Matrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    REQUIRE(tau_dr(ground, x0, cfg) == Catch::Approx(2.0 * x0));
    REQUIRE(tau_dr(0.5 * identity(2), x0, cfg) == Catch::Approx(x0));

    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    REQUIRE(tau_dr(excited, x0, cfg) == Catch::Approx(x0 * cfg.tau_floor_frac));

    cfg.tau_dr_sign = SeaqtConfig::TauDrSign::minus;
    REQUIRE(tau_dr(excited, x0, cfg) == Catch::Approx(2.0 * x0));
}

TEST_CASE("reservoir determinant ratio approaches -beta_R", "[seaqt]") {
    auto g = tst::rng(38);
    const double beta = 0.1;
    const Matrix h_sys = two_level_hamiltonian(1.0);
    const Matrix rho_sys = gibbs_state(h_sys, 0.3);
    const ReservoirMoments m = canonical_reservoir(1 << 16, beta, 0.01, true, rho_sys, h_sys);
    const double exact = reservoir_b3_over_gamma(m);
    const double limit = reservoir_b3_over_gamma_limit(m);
    REQUIRE(std::abs(exact + beta) / beta < 0.01);
    REQUIRE(limit == Catch::Approx(-beta).epsilon(1e-9));

    // A reservoir with <es> = <e><s> has no energy-entropy correlation.
    ReservoirMoments uncorr = m;
    uncorr.es_r = uncorr.e_r * uncorr.s_r;
    REQUIRE(reservoir_b3_over_gamma_limit(uncorr) == Catch::Approx(0.0).margin(1e-12));

    // With a reservoir no larger than the system the limit form is a poor
    // substitute for the exact determinants.
    const Matrix rho2 = tst::random_density(2, g);
    const ReservoirMoments small = canonical_reservoir(2, 1.0, 1.0, false, rho2, h_sys);
    const double ex_small = reservoir_b3_over_gamma(small);
    const double lim_small = reservoir_b3_over_gamma_limit(small);
    REQUIRE(std::abs(ex_small - lim_small) > 0.1 * std::abs(lim_small));
}

TEST_CASE("seaqt rhs reduces to von Neumann without dissipation", "[seaqt]") {
    auto g = tst::rng(39);
    SeaqtConfig cfg;
    cfg.dephasing = SeaqtConfig::Dephasing::off;
    cfg.relaxation = false;
    const Matrix rho = tst::random_density(2, g);
    const Matrix h = tst::random_hermitian(2, g);
    const Matrix expected = -kImag * commutator(h, rho);
    REQUIRE((seaqt_rhs(rho, h, cfg) - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("seaqt rhs is stationary at the Gibbs state in combined mode", "[seaqt]") {
    const double omega = 2.0 * pi * 5.0;
    const Matrix h = two_level_hamiltonian(omega);
    SeaqtConfig cfg;
    cfg.beta_r = 2.0 / omega;
    cfg.combined_reservoir = true;
    const Matrix rho = gibbs_state(h, cfg.beta_r);
    // The commutator also vanishes (rho is a function of H), so the full
    // right-hand side is zero.
    REQUIRE(seaqt_rhs(rho, h, cfg).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("seaqt rhs structural properties", "[seaqt]") {
    auto g = tst::rng(40);
    SeaqtConfig cfg;
    cfg.beta_r = 0.5;
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix rho2 = tst::random_density(2, g);
        const Matrix h2 = tst::random_hermitian(2, g, 2.0);
        const Matrix r2 = seaqt_rhs(rho2, h2, cfg);
        REQUIRE(std::abs(r2.trace()) < 1e-12);
        REQUIRE(hermiticity_residual(r2) < 1e-12);

        const Matrix rho4 = tst::random_density(4, g);
        const Matrix h4 = tst::random_hermitian(4, g, 2.0);
        const Matrix r4 = seaqt_rhs(rho4, h4, cfg);
        REQUIRE(std::abs(r4.trace()) < 1e-12);
        REQUIRE(hermiticity_residual(r4) < 1e-12);
    }
}

TEST_CASE("dephasing-only rhs ascends entropy and conserves energy", "[seaqt]") {
    auto g = tst::rng(41);
    SeaqtConfig cfg;
    cfg.relaxation = false;
    cfg.tau_dj = 10.0;
    for (int trial = 0; trial < 20; ++trial) {
        const bool two_qubit = trial % 2;
        const Eigen::Index n = two_qubit ? 4 : 2;
        const Matrix rho = tst::random_density(n, g);
        const Matrix h = tst::random_hermitian(n, g);
        const Matrix rhs = seaqt_rhs(rho, h, cfg);
        // dS/dt = -Tr(rhs ln rho) >= 0 (the commutator part drops out).
        const double ds = -(rhs * range_log(rho)).trace().real();
        REQUIRE(ds > -1e-11);
        // d<H>/dt = Tr(rhs H) = 0.
        REQUIRE(std::abs((rhs * h).trace().real()) < 1e-9);
    }
}
