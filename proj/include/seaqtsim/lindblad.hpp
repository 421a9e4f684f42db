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
#include <stdexcept>
#include <vector>

#include "seaqtsim/matrix.hpp"

namespace seaqtsim {

/// GKLS channel strengths. The jump operators are L_1 = b (annihilation
/// toward the <sigma_z> = +1 ground state) and L_2 = sigma_z, with gamma_j
/// applied once, in the master equation.
struct LindbladConfig {
    double gamma1 = 0.0;  // relaxation strength, 1/us
    double gamma2 = 0.0;  // dephasing strength, 1/us

    void validate() const {
        if (gamma1 < 0.0 || gamma2 < 0.0) {
            throw std::invalid_argument("LindbladConfig: rates must be nonnegative");
        }
    }
};

/// b|1> = |0>, b|0> = 0 in the module basis convention.
inline Matrix annihilation_2() {
    Matrix b = Matrix::Zero(2, 2);
    b(0, 1) = 1.0;
    return b;
}

namespace detail {
inline Matrix gkls_term(const Matrix& rho, const Matrix& l, double gamma) {
    const Matrix ldag = l.adjoint();
    const Matrix ldl = ldag * l;
    return 0.5 * gamma * (2.0 * (l * rho * ldag) - ldl * rho - rho * ldl);
}
}  // namespace detail

/// drho/dt = -i[H, rho] + (1/2) sum_j gamma_j (2 L_j rho L_j+ - {L_j+ L_j, rho}).
inline Matrix lindblad_rhs(const Matrix& rho, const Matrix& h, const LindbladConfig& cfg) {
    require_same_dim(rho, h, "lindblad_rhs");
    if (rho.rows() != 2) throw std::invalid_argument("lindblad_rhs: expected a 2x2 state");
    Matrix rhs = -kImag * commutator(h, rho);
    if (cfg.gamma1 > 0.0) rhs += detail::gkls_term(rho, annihilation_2(), cfg.gamma1);
    if (cfg.gamma2 > 0.0) rhs += detail::gkls_term(rho, pauli_z(), cfg.gamma2);
    return rhs;
}

/// Two-qubit form: each qubit's damping and dephasing channels lifted as
/// local operators tensored with the identity (no collective dissipation).
inline Matrix lindblad_rhs(const Matrix& rho, const Matrix& h, const LindbladConfig& cfg_a,
                           const LindbladConfig& cfg_b) {
    require_same_dim(rho, h, "lindblad_rhs");
    if (rho.rows() != 4) throw std::invalid_argument("lindblad_rhs: expected a 4x4 state");
    const Matrix i2 = identity(2);
    Matrix rhs = -kImag * commutator(h, rho);
    if (cfg_a.gamma1 > 0.0) rhs += detail::gkls_term(rho, kron(annihilation_2(), i2), cfg_a.gamma1);
    if (cfg_a.gamma2 > 0.0) rhs += detail::gkls_term(rho, kron(pauli_z(), i2), cfg_a.gamma2);
    if (cfg_b.gamma1 > 0.0) rhs += detail::gkls_term(rho, kron(i2, annihilation_2()), cfg_b.gamma1);
    if (cfg_b.gamma2 > 0.0) rhs += detail::gkls_term(rho, kron(i2, pauli_z()), cfg_b.gamma2);
    return rhs;
}

/// Callable wrappers mirroring the SEAQT equation-of-motion objects.
struct LindbladEom {
    Matrix h_frame;
    LindbladConfig cfg;
    Matrix operator()(const Matrix& rho, double /*t*/) const {
        return lindblad_rhs(rho, h_frame, cfg);
    }
};

struct LindbladEom2 {
    Matrix h_frame;
    LindbladConfig cfg_a;
    LindbladConfig cfg_b;
    Matrix operator()(const Matrix& rho, double /*t*/) const {
        return lindblad_rhs(rho, h_frame, cfg_a, cfg_b);
    }
};

}  // namespace seaqtsim
