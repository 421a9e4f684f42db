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

#include <algorithm>
#include <cmath>

#include "seaqtsim/density.hpp"
#include "seaqtsim/matrix.hpp"

namespace seaqtsim {

/// |Phi> = (|00> + |11>)/sqrt(2).
inline Vector bell_phi() {
    Vector v = Vector::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = 1.0 / std::sqrt(2.0);
    return v;
}

/// Wootters concurrence, max(0, l1 - l2 - l3 - l4) with l_i the descending
/// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
/// Those l_i are the singular values of K = sqrt(rho) S conj(sqrt(rho))
/// (K K+ reproduces the Wootters matrix), which keeps the near-zero ones at
/// machine precision instead of sqrt(roundoff).
inline double concurrence(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument("concurrence: expected a 4x4 state");
    }
    const Matrix spinflip = kron(pauli_y(), pauli_y());
    const Spectrum s = spectrum(hermitize(rho));
    const double lmax = std::max(s.values(0), 0.0);
    Eigen::VectorXd root(4);
    for (int i = 0; i < 4; ++i) {
        // Eigenvalues at roundoff scale are rank-deficiency noise; keeping
        // them would leak sqrt(eps) into the subtracted singular values.
        const double v = s.values(i);
        root(i) = (v > 1e-14 * lmax) ? std::sqrt(v) : 0.0;
    }
    const Matrix sqrt_rho = s.vectors * root.asDiagonal() * s.vectors.adjoint();
    const Matrix k = sqrt_rho * spinflip * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Matrix> svd(k);
    const auto& sv = svd.singularValues();
    return std::max(0.0, sv(0) - sv(1) - sv(2) - sv(3));
}

inline double concurrence(const DensityOperator& rho) { return concurrence(rho.matrix()); }

/// Overlap fidelity <Phi| rho |Phi> against the pure Bell target.
inline double bell_fidelity(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument("bell_fidelity: expected a 4x4 state");
    }
    const Vector phi = bell_phi();
    return (phi.adjoint() * rho * phi)(0).real();
}

inline double bell_fidelity(const DensityOperator& rho) { return bell_fidelity(rho.matrix()); }

}  // namespace seaqtsim
