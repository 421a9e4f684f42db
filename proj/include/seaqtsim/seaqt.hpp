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

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "seaqtsim/density.hpp"
#include "seaqtsim/matrix.hpp"

// Steepest-entropy-ascent equation of motion. The non-unitary generator for
// each subsystem J is a determinant ratio of Hilbert-Schmidt inner products
// that projects B ln(rho), as perceived locally by J, onto the complement of
// span{I, H}. That construction conserves the trace and the energy while
// ascending the entropy; a separate reservoir term generates relaxation
// toward the ground state at a state-dependent rate.

namespace seaqtsim {

struct SeaqtConfig {
    double tau_dj = 40.0;         // per-qubit dephasing time, us
    double x0 = 100.0;            // reservoir-interaction constant, us
    double beta_r = 0.0;          // reservoir inverse temperature, 1/(rad/us)
    double tau_floor_frac = 1e-3; // minimum tau_DR as a fraction of x0
    double rank_eps = 1e-12;      // kernel cutoff for B ln(rho)
    double gamma_eps = 1e-14;     // degeneracy threshold for the Gram determinant

    enum class Dephasing { determinant, entropy_form, off };
    Dephasing dephasing = Dephasing::determinant;
    bool relaxation = true;
    // Use the single combined reservoir dissipator (dephasing + relaxation in
    // one operator, one relaxation time) instead of the split form.
    bool combined_reservoir = false;
    // Observable convention for the state-dependent relaxation time:
    // plus -> x0 (1 + <sigma_z>), minus -> x0 (1 - <sigma_z>).
    enum class TauDrSign { plus, minus };
    TauDrSign tau_dr_sign = TauDrSign::plus;

    void validate() const {
        if (tau_dj <= 0.0) throw std::invalid_argument("SeaqtConfig: tau_dj must be positive");
        if (x0 <= 0.0) throw std::invalid_argument("SeaqtConfig: x0 must be positive");
        if (tau_floor_frac <= 0.0 || tau_floor_frac >= 1.0) {
            throw std::invalid_argument("SeaqtConfig: tau_floor_frac must lie in (0, 1)");
        }
        if (rank_eps <= 0.0) throw std::invalid_argument("SeaqtConfig: rank_eps must be positive");
    }
};

/// Locally perceived operator (F)^A = Tr_B[(I_A x rho_B) F] and the B
/// counterpart with the roles swapped.
inline Matrix local_projection(const Matrix& f, const Matrix& rho, Subsystem j) {
    if (f.rows() != 4 || f.cols() != 4) {
        throw std::invalid_argument("local_projection: expected a 4x4 operator");
    }
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument("local_projection: expected a 4x4 state");
    }
    Matrix out = Matrix::Zero(2, 2);
    if (j == Subsystem::A) {
        const Matrix rho_b = partial_trace(rho, Subsystem::B);
        for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap)
                for (int b = 0; b < 2; ++b)
                    for (int bpp = 0; bpp < 2; ++bpp)
                        out(a, ap) += rho_b(b, bpp) * f(2 * a + bpp, 2 * ap + b);
    } else {
        const Matrix rho_a = partial_trace(rho, Subsystem::A);
        for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
                for (int a = 0; a < 2; ++a)
                    for (int app = 0; app < 2; ++app)
                        out(b, bp) += rho_a(a, app) * f(2 * app + b, 2 * a + bp);
    }
    return out;
}

namespace detail {

/// Tr(rho_j {f_j, g_j}) for already-projected operators.
inline double weighted_anticomm_inner(const Matrix& f_j, const Matrix& g_j, const Matrix& rho_j) {
    return (rho_j * (f_j * g_j + g_j * f_j)).trace().real();
}

/// Symmetrized dissipator 1/2 (sqrt(rho) D~ + (sqrt(rho) D~)+) for a
/// direction D~ = sqrt(rho) M with hermitian M. By associativity this is
/// exactly the anticommutator 1/2 {rho, M}, which is how it is evaluated:
/// no square root enters, and the trace/energy orthogonality identities of
/// the Gram solve hold for the very same rho that weights them.
inline Matrix symmetrized_dissipator(const Matrix& rho, const Matrix& direction) {
    return 0.5 * (rho * direction + direction * rho);
}

/// Cofactor expansion of the operator-valued 3x3 determinant over the 2x2
/// Gram determinant: the SEA direction M = op_log - alpha op_id - beta op_h
/// with (alpha, beta) from Cramer's rule on the Gram rows. A Gram
/// determinant below gamma_eps times its natural scale yields zero with
/// `degenerate` set.
inline Matrix determinant_ratio_dissipator(const Matrix& rho_weight, const Matrix& op_log,
                                           const Matrix& op_id, const Matrix& op_h, double b1,
                                           double b2, double b3, double c1, double c2, double c3,
                                           double gamma_eps, bool* degenerate) {
    if (degenerate) *degenerate = false;
    const double gamma = b2 * c3 - b3 * c2;
    const double scale = std::max({std::abs(b2 * c3), std::abs(b3 * c2), 1e-300});
    if (std::abs(gamma) <= gamma_eps * scale) {
        if (degenerate) *degenerate = true;
        return Matrix::Zero(rho_weight.rows(), rho_weight.cols());
    }
    const double cof2 = b1 * c3 - b3 * c1;
    const double cof3 = b1 * c2 - b2 * c1;
    const Matrix direction = op_log - (cof2 / gamma) * op_id + (cof3 / gamma) * op_h;
    return symmetrized_dissipator(rho_weight, direction);
}

/// Projection onto the positive unit-trace cone. The equation of motion is
/// nonlinear; evaluating it on the projected state keeps the functional
/// calculus (B ln rho, entropies, tau_DR) well defined for Runge-Kutta
/// stage states that wander O(dt ||rhs||) outside the cone, while states
/// already inside pass through untouched.
inline Matrix positive_unit(const Matrix& rho) {
    const Spectrum s = spectrum(hermitize(rho));
    if (s.values.minCoeff() < -0.1) {
        throw std::invalid_argument("seaqt: state is far outside the positive cone");
    }
    Eigen::VectorXd lam = s.values.cwiseMax(0.0);
    const double tr = lam.sum();
    if (tr <= 0.5) throw std::invalid_argument("seaqt: state trace collapsed");
    lam /= tr;
    return s.vectors * lam.asDiagonal() * s.vectors.adjoint();
}

}  // namespace detail

/// Hilbert-Schmidt inner product (F, G)^J = Tr_J(rho_J {(F)^J, (G)^J}) on a
/// two-qubit state, anticommutator form as written (no 1/2; the dissipator
/// ratio is invariant under a uniform rescaling of all inner products).
inline double hs_inner(const Matrix& f, const Matrix& g, const Matrix& rho, Subsystem j) {
    const Matrix rho_j = partial_trace(rho, j);
    return detail::weighted_anticomm_inner(local_projection(f, rho, j),
                                           local_projection(g, rho, j), rho_j);
}

/// Single-system variant: (F, G) = Tr(rho {F, G}).
inline double hs_inner(const Matrix& f, const Matrix& g, const Matrix& rho) {
    require_same_dim(f, g, "hs_inner");
    require_same_dim(f, rho, "hs_inner");
    return detail::weighted_anticomm_inner(f, g, rho);
}

/// Dephasing dissipation operator for qubit J of a two-qubit state: the
/// determinant-ratio construction with B ln(rho) of the composite state and
/// the composite Hamiltonian, all perceived locally by J.
namespace detail {

/// Shared tail of the dephasing construction: span{I, H} only matters, and
/// the determinant ratio is invariant under H -> c H, so the generator
/// enters as its traceless part normalized to unit magnitude. That keeps
/// the Gram solve conditioned when the perceived Hamiltonian sweeps through
/// a multiple of the identity (an analytically removable 0/0); a generator
/// degenerate at the scale of the composite one yields a flagged zero.
inline Matrix dephasing_from_projections(const Matrix& rho_w, const Matrix& op_log,
                                         const Matrix& op_h_raw, double h_ref,
                                         const SeaqtConfig& cfg, bool* degenerate) {
    const Eigen::Index n = rho_w.rows();
    const Matrix op_id = identity(n);
    Matrix op_h = op_h_raw - (op_h_raw.trace() / static_cast<double>(n)) * op_id;
    const double hnorm = op_h.cwiseAbs().maxCoeff();
    if (hnorm <= 1e-12 * std::max(h_ref, 1e-300)) {
        if (degenerate) *degenerate = true;
        return Matrix::Zero(n, n);
    }
    op_h /= hnorm;
    const double b1 = weighted_anticomm_inner(op_id, op_log, rho_w);
    const double b2 = weighted_anticomm_inner(op_id, op_id, rho_w);
    const double b3 = weighted_anticomm_inner(op_id, op_h, rho_w);
    const double c1 = weighted_anticomm_inner(op_h, op_log, rho_w);
    const double c3 = weighted_anticomm_inner(op_h, op_h, rho_w);
    return determinant_ratio_dissipator(rho_w, op_log, op_id, op_h, b1, b2, b3, c1, b3, c3,
                                        cfg.gamma_eps, degenerate);
}

}  // namespace detail

inline Matrix dephasing_dissipator(const Matrix& rho, const Matrix& h, Subsystem j,
                                   const SeaqtConfig& cfg, bool* degenerate = nullptr) {
    if (rho.rows() != 4 || h.rows() != 4) {
        throw std::invalid_argument("dephasing_dissipator: expected 4x4 state and Hamiltonian");
    }
    if (degenerate) *degenerate = false;
    const Matrix rho_j = partial_trace(rho, j);
    const Matrix bln = range_log(rho, cfg.rank_eps);
    const Matrix op_log = local_projection(bln, rho, j);
    const Matrix op_h = local_projection(h, rho, j);
    return detail::dephasing_from_projections(rho_j, op_log, op_h, h.cwiseAbs().maxCoeff(), cfg,
                                              degenerate);
}

/// Single-system determinant-ratio dissipator (the one-qubit reduction of
/// the same construction; local perception is the identity map).
inline Matrix dephasing_dissipator(const Matrix& rho, const Matrix& h, const SeaqtConfig& cfg,
                                   bool* degenerate = nullptr) {
    require_same_dim(rho, h, "dephasing_dissipator");
    if (degenerate) *degenerate = false;
    const Matrix op_log = range_log(rho, cfg.rank_eps);
    return detail::dephasing_from_projections(rho, op_log, h, h.cwiseAbs().maxCoeff(), cfg,
                                              degenerate);
}

/// Reservoir-limit dephasing part, D~ = sqrt(rho) (B ln rho + <s> I).
inline Matrix single_qubit_dephasing_dissipator(const Matrix& rho, const Matrix& h,
                                                const SeaqtConfig& cfg) {
    (void)h;  // the entropy-form dephasing depends on the state alone
    const Matrix bln = range_log(rho, cfg.rank_eps);
    const double s = von_neumann_entropy(rho, cfg.rank_eps);
    return detail::symmetrized_dissipator(rho, bln + s * identity(rho.rows()));
}

/// Relaxation dissipator, D~ = sqrt(rho) beta_R (H - <e> I).
inline Matrix relaxation_dissipator(const Matrix& rho, const Matrix& h, double beta_r) {
    require_same_dim(rho, h, "relaxation_dissipator");
    const double e = expectation(rho, h) / rho.trace().real();
    return detail::symmetrized_dissipator(rho,
                                          beta_r * (h - e * identity(rho.rows())));
}

/// Two-qubit relaxation: the same anticommutator with the local generator
/// lifted into the composite space, 1/2 {rho, K_J x I}. On product states
/// this equals the marginal dissipator tensored with the other factor, and
/// its partial trace reproduces the marginal dynamics for every state; the
/// flow it generates is a congruence rho -> G rho G+, so composite
/// positivity survives entanglement (a bare product-operator lift does not).
inline Matrix relaxation_dissipator(const Matrix& rho, const Matrix& h_local, Subsystem j,
                                    double beta_r) {
    if (rho.rows() != 4 || h_local.rows() != 2) {
        throw std::invalid_argument("relaxation_dissipator: expected 4x4 state, 2x2 generator");
    }
    const Matrix rho_j = partial_trace(rho, j);
    const double e = expectation(rho_j, h_local) / rho_j.trace().real();
    const Matrix k = beta_r * (h_local - e * identity(2));
    const Matrix lifted = (j == Subsystem::A) ? kron(k, identity(2)) : kron(identity(2), k);
    return detail::symmetrized_dissipator(rho, lifted);
}

/// Combined reservoir dissipator,
/// D~ = sqrt(rho) (B ln rho + <s> I + beta_R (H - <e> I)); canonical states
/// of H at beta_R are its fixed points.
inline Matrix combined_reservoir_dissipator(const Matrix& rho, const Matrix& h,
                                            const SeaqtConfig& cfg) {
    const Matrix bln = range_log(rho, cfg.rank_eps);
    const double s = von_neumann_entropy(rho, cfg.rank_eps);
    const double e = expectation(rho, h) / rho.trace().real();
    const Matrix eye = identity(rho.rows());
    return detail::symmetrized_dissipator(rho, bln + s * eye + cfg.beta_r * (h - e * eye));
}

/// State-dependent relaxation time tau_DR = x0 (1 +/- <sigma_z>), floored at
/// tau_floor_frac * x0 so the rate stays finite at the inverted pole.
inline double tau_dr(const Matrix& rho, double x0, const SeaqtConfig& cfg) {
    if (rho.rows() != 2) throw std::invalid_argument("tau_dr: expected a 2x2 state");
    const double z = expectation(rho, pauli_z());
    const double s = (cfg.tau_dr_sign == SeaqtConfig::TauDrSign::plus) ? 1.0 : -1.0;
    return std::max(x0 * (1.0 + s * z), x0 * cfg.tau_floor_frac);
}

inline double tau_dr(const DensityOperator& rho, double x0, const SeaqtConfig& cfg) {
    return tau_dr(rho.matrix(), x0, cfg);
}

/// Moment table for the system-reservoir determinants. Entropy-type entries
/// (s_*, es_*) are given in the entropy convention (<s> = -Tr(rho ln rho)
/// and <es> = -Tr(rho H ln rho)); the determinant rows internally use the
/// Tr(rho ln rho)-weighted values.
struct ReservoirMoments {
    double p_j = 2;   // system eigenlevel count
    double s_j = 0;   // <s>_J
    double e_j = 0;   // <e>_J
    double es_j = 0;  // <es>_J
    double e2_j = 0;  // <e^2>_J
    double p_r = 1;   // reservoir eigenlevel count
    double s_r = 0;
    double e_r = 0;
    double es_r = 0;
    double e2_r = 0;

    void validate() const {
        if (p_r < 1 || p_j < 1) throw std::invalid_argument("ReservoirMoments: level counts < 1");
        if (e2_r - e_r * e_r < 0) {
            throw std::invalid_argument("ReservoirMoments: negative reservoir energy variance");
        }
        if (e2_j - e_j * e_j < 0) {
            throw std::invalid_argument("ReservoirMoments: negative system energy variance");
        }
    }
};

namespace detail {
inline double det3(double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
}
}  // namespace detail

/// Exact determinant ratio B3/Gamma of the system-reservoir construction.
/// For a canonical reservoir with many levels this approaches -beta_R.
inline double reservoir_b3_over_gamma(const ReservoirMoments& m) {
    m.validate();
    if (m.e2_r - m.e_r * m.e_r <= 0) {
        throw std::invalid_argument("reservoir_b3_over_gamma: reservoir variance must be > 0");
    }
    const double st_j = -m.s_j;  // Tr(rho ln rho)-weighted entries
    const double st_r = -m.s_r;
    const double est = -(m.es_j + m.es_r);
    const double e2 = m.e2_j + m.e2_r;
    const double b3 =
        detail::det3(st_j, m.p_j, 0.0, st_r, 0.0, m.p_r, est, m.e_j, m.e_r);
    const double gamma =
        detail::det3(m.p_j, 0.0, m.e_j, 0.0, m.p_r, m.e_r, m.e_j, m.e_r, e2);
    if (gamma == 0.0) throw std::runtime_error("reservoir_b3_over_gamma: zero Gram determinant");
    return b3 / gamma;
}

/// Large-reservoir limit of the same ratio,
/// -(<es>_R - <e>_R <s>_R) / (<e^2>_R - <e>_R^2); equals -beta_R exactly for
/// a canonical reservoir.
inline double reservoir_b3_over_gamma_limit(const ReservoirMoments& m) {
    m.validate();
    const double var = m.e2_r - m.e_r * m.e_r;
    if (var <= 0) {
        throw std::invalid_argument("reservoir_b3_over_gamma_limit: reservoir variance must be > 0");
    }
    return -(m.es_r - m.e_r * m.s_r) / var;
}

/// Companion B1/Gamma ratio (coefficient of the identity column).
inline double reservoir_b1_over_gamma(const ReservoirMoments& m) {
    m.validate();
    const double st_j = -m.s_j;
    const double st_r = -m.s_r;
    const double est = -(m.es_j + m.es_r);
    const double e2 = m.e2_j + m.e2_r;
    const double b1 =
        detail::det3(st_j, 0.0, m.e_j, st_r, m.p_r, m.e_r, est, m.e_r, e2);
    const double gamma =
        detail::det3(m.p_j, 0.0, m.e_j, 0.0, m.p_r, m.e_r, m.e_j, m.e_r, e2);
    if (gamma == 0.0) throw std::runtime_error("reservoir_b1_over_gamma: zero Gram determinant");
    return b1 / gamma;
}

// ---------------------------------------------------------------------------
// Right-hand sides

/// Single-qubit equation of motion. `h_frame` generates the coherent term;
/// `h_diss` is the generator entering the dissipators (the physical qubit
/// Hamiltonian; the two coincide unless a rotating frame removed fast
/// sigma_z precession from the coherent part).
struct SeaqtEom {
    Matrix h_frame;
    Matrix h_diss;
    SeaqtConfig cfg;

    SeaqtEom(Matrix frame, Matrix diss, SeaqtConfig c)
        : h_frame(std::move(frame)), h_diss(std::move(diss)), cfg(std::move(c)) {}
    SeaqtEom(Matrix h, SeaqtConfig c) : h_frame(h), h_diss(std::move(h)), cfg(std::move(c)) {}

    Matrix operator()(const Matrix& rho, double /*t*/) const {
        Matrix rhs = -kImag * commutator(h_frame, rho);
        const bool dissipative = cfg.combined_reservoir || cfg.relaxation ||
                                 cfg.dephasing != SeaqtConfig::Dephasing::off;
        if (!dissipative) return rhs;
        const Matrix rc = detail::positive_unit(rho);
        if (cfg.combined_reservoir) {
            const double tau = tau_dr(rc, cfg.x0, cfg);
            rhs -= combined_reservoir_dissipator(rc, h_diss, cfg) / tau;
            return rhs;
        }
        switch (cfg.dephasing) {
            case SeaqtConfig::Dephasing::determinant:
                rhs -= dephasing_dissipator(rc, h_diss, cfg) / cfg.tau_dj;
                break;
            case SeaqtConfig::Dephasing::entropy_form:
                rhs -= single_qubit_dephasing_dissipator(rc, h_diss, cfg) / cfg.tau_dj;
                break;
            case SeaqtConfig::Dephasing::off:
                break;
        }
        if (cfg.relaxation) {
            const double tau = tau_dr(rc, cfg.x0, cfg);
            rhs -= relaxation_dissipator(rc, h_diss, cfg.beta_r) / tau;
        }
        return rhs;
    }
};

/// Two-qubit equation of motion. Dephasing operators are built from the
/// composite state and `h_deph`; relaxation from each qubit's marginal and
/// its local Hamiltonian. For J = A the dissipator enters as D_A x rho_B,
/// for J = B as rho_A x D_B.
struct SeaqtEom2 {
    Matrix h_frame;
    Matrix h_deph;
    std::array<Matrix, 2> h_local;
    std::array<SeaqtConfig, 2> cfg;

    Matrix operator()(const Matrix& rho, double /*t*/) const {
        Matrix rhs = -kImag * commutator(h_frame, rho);
        const bool dissipative =
            cfg[0].relaxation || cfg[1].relaxation ||
            cfg[0].dephasing != SeaqtConfig::Dephasing::off ||
            cfg[1].dephasing != SeaqtConfig::Dephasing::off;
        if (!dissipative) return rhs;
        const Matrix rc = detail::positive_unit(rho);
        const Matrix rho_a = partial_trace(rc, Subsystem::A);
        const Matrix rho_b = partial_trace(rc, Subsystem::B);
        for (int q = 0; q < 2; ++q) {
            const Subsystem j = (q == 0) ? Subsystem::A : Subsystem::B;
            const Matrix& rho_j = (q == 0) ? rho_a : rho_b;
            const Matrix& rho_jbar = (q == 0) ? rho_b : rho_a;
            if (cfg[q].dephasing == SeaqtConfig::Dephasing::determinant) {
                const Matrix d = dephasing_dissipator(rc, h_deph, j, cfg[q]) / cfg[q].tau_dj;
                rhs -= (q == 0) ? kron(d, rho_jbar) : kron(rho_jbar, d);
            } else if (cfg[q].dephasing == SeaqtConfig::Dephasing::entropy_form) {
                const Matrix d = single_qubit_dephasing_dissipator(rho_j, h_local[q], cfg[q]) /
                                 cfg[q].tau_dj;
                rhs -= (q == 0) ? kron(d, rho_jbar) : kron(rho_jbar, d);
            }
            if (cfg[q].relaxation) {
                const double tau = tau_dr(rho_j, cfg[q].x0, cfg[q]);
                rhs -= relaxation_dissipator(rc, h_local[q], j, cfg[q].beta_r) / tau;
            }
        }
        return rhs;
    }
};

/// Local generator of qubit J extracted from a composite Hamiltonian by the
/// normalized partial trace. Identity shifts are immaterial to the
/// relaxation dissipator, so this is exact for local + traceless-coupling
/// Hamiltonians.
inline Matrix local_hamiltonian(const Matrix& h, Subsystem j) {
    return 0.5 * partial_trace(h, j);
}

inline Matrix seaqt_rhs(const Matrix& rho, const Matrix& h, const SeaqtConfig& cfg) {
    require_same_dim(rho, h, "seaqt_rhs");
    if (rho.rows() == 2) return SeaqtEom(h, cfg)(rho, 0.0);
    if (rho.rows() == 4) {
        SeaqtEom2 eom{h, h, {local_hamiltonian(h, Subsystem::A), local_hamiltonian(h, Subsystem::B)},
                      {cfg, cfg}};
        return eom(rho, 0.0);
    }
    throw std::invalid_argument("seaqt_rhs: expected a 2x2 or 4x4 state");
}

inline Matrix seaqt_rhs(const DensityOperator& rho, const Matrix& h, const SeaqtConfig& cfg) {
    return seaqt_rhs(rho.matrix(), h, cfg);
}

}  // namespace seaqtsim
