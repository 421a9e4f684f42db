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

#include <cmath>
#include <stdexcept>
#include <string>

#include "seaqtsim/matrix.hpp"

namespace seaqtsim {

/// Eigendecomposition of a hermitian matrix, eigenvalues sorted descending.
/// This is the single backend used for sqrt(rho), the range-restricted log,
/// entropies and positivity checks.
struct Spectrum {
    Eigen::VectorXd values;  // descending
    Matrix vectors;          // columns match values
};

inline Spectrum spectrum(const Matrix& a) {
    require_square(a, "spectrum");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("spectrum: eigendecomposition failed");
    }
    const Eigen::Index n = a.rows();
    Spectrum s;
    s.values.resize(n);
    s.vectors.resize(n, n);
    // SelfAdjointEigenSolver sorts ascending; flip to descending.
    for (Eigen::Index i = 0; i < n; ++i) {
        s.values(i) = es.eigenvalues()(n - 1 - i);
        s.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return s;
}

inline double min_eigenvalue(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

struct ValidityTolerances {
    double herm = 1e-10;
    double trace = 1e-8;
    double psd = 1e-9;
};

/// A positive, unit-trace operator. Construction validates hermiticity,
/// trace and positivity against the supplied tolerances and throws
/// std::invalid_argument naming the violated property.
class DensityOperator {
  public:
    explicit DensityOperator(Matrix m, const ValidityTolerances& tol = {}) : m_(std::move(m)) {
        require_square(m_, "DensityOperator");
        if (!all_finite(m_)) throw std::invalid_argument("DensityOperator: non-finite entries");
        const double hres = hermiticity_residual(m_);
        if (hres > tol.herm) {
            throw std::invalid_argument("DensityOperator: hermiticity residual " +
                                        std::to_string(hres) + " exceeds tolerance");
        }
        const double tr_err = std::abs(m_.trace() - Complex(1.0, 0.0));
        if (tr_err > tol.trace) {
            throw std::invalid_argument("DensityOperator: trace deviates from 1 by " +
                                        std::to_string(tr_err));
        }
        const double lmin = min_eigenvalue(hermitize(m_));
        if (lmin < -tol.psd) {
            throw std::invalid_argument("DensityOperator: minimum eigenvalue " +
                                        std::to_string(lmin) + " below -tol_psd");
        }
    }

    static DensityOperator pure(const Vector& psi) {
        const double n2 = psi.squaredNorm();
        if (n2 <= 0.0) throw std::invalid_argument("DensityOperator::pure: zero vector");
        Matrix m = (psi * psi.adjoint()) / n2;
        return DensityOperator(std::move(m));
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Matrix m_;
};

enum class Subsystem { A, B };

/// Trace out one qubit of a two-qubit state. Basis ordering is
/// |a b> -> index 2a + b with `a` the leading (A) qubit.
inline Matrix partial_trace(const Matrix& rho, Subsystem keep) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument("partial_trace: expected a 4x4 operator");
    }
    Matrix out = Matrix::Zero(2, 2);
    if (keep == Subsystem::A) {
        for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap)
                for (int b = 0; b < 2; ++b) out(a, ap) += rho(2 * a + b, 2 * ap + b);
    } else {
        for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
                for (int a = 0; a < 2; ++a) out(b, bp) += rho(2 * a + b, 2 * a + bp);
    }
    return out;
}

inline DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep,
                                     const ValidityTolerances& tol = {}) {
    return DensityOperator(partial_trace(rho.matrix(), keep), tol);
}

/// Hermitian PSD square root via eigendecomposition. Small negative
/// eigenvalues in [-tol_psd, 0) are clamped to zero before the root;
/// anything more negative is an error, as is a non-hermitian input.
inline Matrix matrix_sqrt(const Matrix& rho, double tol_herm = 1e-10, double tol_psd = 1e-9) {
    require_square(rho, "matrix_sqrt");
    const double hres = hermiticity_residual(rho);
    if (hres > tol_herm) {
        throw std::invalid_argument("matrix_sqrt: input not hermitian (residual " +
                                    std::to_string(hres) + ")");
    }
    const Spectrum s = spectrum(hermitize(rho));
    const Eigen::Index n = rho.rows();
    Eigen::VectorXd root(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = s.values(i);
        if (v < -tol_psd) {
            throw std::invalid_argument("matrix_sqrt: eigenvalue " + std::to_string(v) +
                                        " below -tol_psd");
        }
        root(i) = std::sqrt(std::max(v, 0.0));
    }
    return s.vectors * root.asDiagonal() * s.vectors.adjoint();
}

inline Matrix matrix_sqrt(const DensityOperator& rho) { return matrix_sqrt(rho.matrix()); }

/// Range-restricted logarithm: sum over eigenvalues above rank_eps of
/// ln(lambda_i) P_i, zero on the kernel. This is the B ln(rho) operator.
inline Matrix range_log(const Matrix& rho, double rank_eps = 1e-12) {
    require_square(rho, "range_log");
    if (rank_eps <= 0.0) throw std::invalid_argument("range_log: rank_eps must be positive");
    const Spectrum s = spectrum(hermitize(rho));
    const Eigen::Index n = rho.rows();
    Eigen::VectorXd lg = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s.values(i) > rank_eps) lg(i) = std::log(s.values(i));
    }
    return s.vectors * lg.asDiagonal() * s.vectors.adjoint();
}

inline Matrix range_log(const DensityOperator& rho, double rank_eps = 1e-12) {
    return range_log(rho.matrix(), rank_eps);
}

/// Tr(rho * obs) for a hermitian observable; the imaginary residue is
/// discarded (it is bounded by the hermiticity tolerances).
inline double expectation(const Matrix& rho, const Matrix& obs) {
    require_same_dim(rho, obs, "expectation");
    return (rho * obs).trace().real();
}

inline double expectation(const DensityOperator& rho, const Matrix& obs) {
    return expectation(rho.matrix(), obs);
}

/// -Tr(rho ln rho) from the eigenvalues, with 0 ln 0 := 0.
inline double von_neumann_entropy(const Matrix& rho, double rank_eps = 1e-12) {
    const Spectrum s = spectrum(hermitize(rho));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const double v = s.values(i);
        if (v > rank_eps) acc -= v * std::log(v);
    }
    return acc;
}

inline double von_neumann_entropy(const DensityOperator& rho, double rank_eps = 1e-12) {
    return von_neumann_entropy(rho.matrix(), rank_eps);
}

inline double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

/// Nearest positive matrix of the same trace by eigenvalue clipping: zero
/// the negative eigenvalues and subtract the accumulated deficit uniformly
/// from the remaining positive ones, repeating until none go negative.
inline Matrix psd_project(const Matrix& herm, double* clipped = nullptr) {
    const Spectrum s = spectrum(hermitize(herm));
    const Eigen::Index n = herm.rows();
    Eigen::VectorXd lam = s.values;
    double total_clip = 0.0;
    while (true) {
        double deficit = 0.0;
        int positive = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lam(i) < 0.0) {
                deficit += lam(i);
                lam(i) = 0.0;
            } else if (lam(i) > 0.0) {
                ++positive;
            }
        }
        total_clip += -deficit;
        if (deficit == 0.0 || positive == 0) break;
        const double shift = deficit / positive;
        bool went_negative = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lam(i) > 0.0) {
                lam(i) += shift;
                if (lam(i) < 0.0) went_negative = true;
            }
        }
        if (!went_negative) break;
    }
    if (clipped) *clipped = total_clip;
    return s.vectors * lam.asDiagonal() * s.vectors.adjoint();
}

}  // namespace seaqtsim
