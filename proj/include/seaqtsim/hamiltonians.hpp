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
#include <numbers>

#include "seaqtsim/density.hpp"
#include "seaqtsim/matrix.hpp"

// Hamiltonian and pulse constructors. Units are hbar = 1, time in
// microseconds, angular frequencies in rad/us; unit conversions from
// GHz/kHz/ns happen at the configuration boundary.

namespace seaqtsim {

/// Duffing-oscillator transmon truncated to `levels` eigenlevels.
struct TransmonSpec {
    double omega = 0.0;  // transmon frequency, rad/us
    double delta = 0.0;  // anharmonicity, rad/us
    int levels = 2;
};

/// Gaussian envelope with optional derivative component riding the same
/// quadrature. The bare Gaussian peaks at 1/(sqrt(2 pi) sigma).
struct PulseEnvelope {
    double t_gate = 0.0352;         // us
    double sigma = 0.0352 / 4.0;    // us
    double t0 = 0.0352 / 2.0;       // pulse center, us
    double amp = 1.0;               // dimensionless
    double drag_beta = 0.0;         // derivative coefficient
};

struct DriveSpec {
    double delta_omega = 0.0;  // detuning omega_q - omega_d, rad/us
    PulseEnvelope envelope;
};

/// Cross-resonance effective Hamiltonian coefficients (rad/us). `nu` holds
/// the unechoed five-term set {ZX, IZ, IX, ZI, ZZ}; `nu_echo` the echoed
/// three-term set {ZX, IY, IZ}. amp_scale multiplies every coefficient.
struct CRSpec {
    double nu_zx = 0.0;
    double nu_iz = 0.0;
    double nu_ix = 0.0;
    double nu_zi = 0.0;
    double nu_zz = 0.0;
    double nu_echo_zx = 0.0;
    double nu_echo_iy = 0.0;
    double nu_echo_iz = 0.0;
    double amp_scale = 0.1;
    double width = 0.0;  // gate width t_g, us
};

inline Matrix transmon_hamiltonian(const TransmonSpec& spec) {
    if (spec.levels < 2) throw std::invalid_argument("transmon_hamiltonian: levels must be >= 2");
    Matrix h = Matrix::Zero(spec.levels, spec.levels);
    for (int j = 0; j < spec.levels; ++j) {
        h(j, j) = (spec.omega - 0.5 * spec.delta) * j + 0.5 * spec.delta * j * j;
    }
    return h;
}

/// Two-level reduction, H = -(omega_q/2) sigma_z.
inline Matrix two_level_hamiltonian(double omega_q) { return -0.5 * omega_q * pauli_z(); }

inline double gaussian_envelope(double t, const PulseEnvelope& env) {
    const double u = (t - env.t0) / env.sigma;
    return std::exp(-u * u) / (std::sqrt(2.0 * std::numbers::pi) * env.sigma);
}

/// amp * [ G(t) + drag_beta * dG/dt ] with G the normalized Gaussian above.
inline double drag_envelope(double t, const PulseEnvelope& env) {
    if (env.sigma <= 0.0 || env.t_gate <= 0.0) {
        throw std::invalid_argument("drag_envelope: sigma and t_gate must be positive");
    }
    const double g = gaussian_envelope(t, env);
    const double dg = -2.0 * (t - env.t0) / (env.sigma * env.sigma) * g;
    return env.amp * (g + env.drag_beta * dg);
}

/// Integral of the bare Gaussian over [a, b] (amp and drag excluded).
/// int exp(-((t-t0)/sigma)^2) dt = sigma sqrt(pi)/2 [erf((b-t0)/sigma) - erf((a-t0)/sigma)].
inline double gaussian_envelope_integral(const PulseEnvelope& env, double a, double b) {
    const double raw = env.sigma * std::sqrt(std::numbers::pi) / 2.0 *
                       (std::erf((b - env.t0) / env.sigma) - std::erf((a - env.t0) / env.sigma));
    return raw / (std::sqrt(2.0 * std::numbers::pi) * env.sigma);
}

/// Drive-frame Hamiltonian delta_omega * sigma_z + theta_G(t) * sigma_y.
inline Matrix drive_hamiltonian(double t, const DriveSpec& drive) {
    return drive.delta_omega * pauli_z() + drag_envelope(t, drive.envelope) * pauli_y();
}

/// CR effective Hamiltonian. For echoed = false this is the five-term form
/// with the drive-odd coefficients nu_zx, nu_ix flipped by `sign`; for
/// echoed = true the three-term echoed form (sign has no effect).
inline Matrix cr_hamiltonian(const CRSpec& spec, int sign, bool echoed) {
    if (spec.width < 0.0) throw std::invalid_argument("cr_hamiltonian: negative width");
    const Matrix i2 = identity(2);
    const Matrix x = pauli_x();
    const Matrix y = pauli_y();
    const Matrix z = pauli_z();
    const double s = (sign >= 0) ? 1.0 : -1.0;
    const double a = spec.amp_scale;
    if (echoed) {
        return 0.5 * a *
               (spec.nu_echo_zx * kron(z, x) + spec.nu_echo_iy * kron(i2, y) +
                spec.nu_echo_iz * kron(i2, z));
    }
    return 0.5 * a *
           (s * spec.nu_zx * kron(z, x) + spec.nu_iz * kron(i2, z) + s * spec.nu_ix * kron(i2, x) +
            spec.nu_zi * kron(z, i2) + spec.nu_zz * kron(z, z));
}

/// exp(-i H t) for hermitian H, via the spectral decomposition.
inline Matrix propagator(const Matrix& h, double t) {
    const Spectrum s = spectrum(hermitize(h));
    const Eigen::Index n = h.rows();
    Vector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(-kImag * s.values(i) * t);
    return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

/// Echo-sequence propagator U = XI exp(-i H(-O) t_g) XI exp(-i H(+O) t_g).
inline Matrix echo_propagator(const CRSpec& spec, double t_g) {
    if (t_g < 0.0) throw std::invalid_argument("echo_propagator: t_g must be >= 0");
    const Matrix xi = kron(pauli_x(), identity(2));
    const Matrix u_plus = propagator(cr_hamiltonian(spec, +1, false), t_g);
    const Matrix u_minus = propagator(cr_hamiltonian(spec, -1, false), t_g);
    return xi * u_minus * xi * u_plus;
}

// Ideal single-qubit gates used for instantaneous state preparation.

inline Matrix x_gate() { return pauli_x(); }

/// pi/2 rotation about y: |0> -> |+>.
inline Matrix x_half_gate() {
    Matrix m(2, 2);
    const double c = 1.0 / std::sqrt(2.0);
    m << c, -c, c, c;
    return m;
}

inline Matrix hadamard_gate() {
    Matrix m(2, 2);
    const double c = 1.0 / std::sqrt(2.0);
    m << c, c, c, -c;
    return m;
}

inline Matrix s_gate() {
    Matrix m(2, 2);
    m << 1, 0, 0, kImag;
    return m;
}

}  // namespace seaqtsim
