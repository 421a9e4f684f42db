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
#include <vector>

#include "seaqtsim/density.hpp"
#include "seaqtsim/matrix.hpp"
#include "seaqtsim/metrics.hpp"

namespace seaqtsim {

/// Fixed-step classical RK4. Deterministic by construction; the stiffest
/// configured scale is bounded below by the floored relaxation time, so a
/// conservative dt suffices.
///
/// psd_repair: clip small negative eigenvalues after each step (trace
/// preserved by uniform redistribution). The two-qubit steepest-entropy
/// equation's per-qubit dissipators tensored with the partner marginal do
/// not protect the composite kernel once the state is entangled, so the
/// exact flow grazes slightly outside the positive cone; the repair keeps
/// the numerical state physical, is bounded per step by repair_tol, and the
/// total clipped weight is reported on the trajectory. Trace drift is never
/// repaired.
struct IntegratorConfig {
    double dt = 0.005;        // us
    double tol_trace = 1e-8;  // abort threshold on |Tr rho - 1|
    double tol_psd = 1e-9;    // abort at min eigenvalue < -tol_psd * 1e3
    bool resym = true;        // re-hermitize after every step
    bool psd_repair = false;
    double repair_tol = 1e-4;  // abort if one step needs more clipping than this
};

class IntegrationError : public std::runtime_error {
  public:
    enum class Kind { trace_drift, positivity, non_finite };
    IntegrationError(Kind k, const std::string& msg, double t)
        : std::runtime_error(msg + " at t = " + std::to_string(t) + " us"), kind(k), time(t) {}
    Kind kind;
    double time;
};

/// Derived quantities recorded at every sample time. Bloch components are
/// per qubit (marginals for a two-qubit state); concurrence and Bell
/// fidelity are filled for 4x4 states only.
struct ObservableRecord {
    double t = 0.0;
    std::vector<double> x, y, z;  // one entry per qubit
    double entropy = 0.0;
    double purity = 0.0;
    double concurrence = 0.0;
    double bell_fidelity = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
    std::vector<ObservableRecord> observables;
    double repaired_weight = 0.0;  // total eigenvalue mass clipped by psd_repair
};

namespace detail {

inline ObservableRecord observe(const Matrix& rho, double t) {
    ObservableRecord rec;
    rec.t = t;
    rec.entropy = von_neumann_entropy(rho);
    rec.purity = purity(rho);
    if (rho.rows() == 2) {
        rec.x = {expectation(rho, pauli_x())};
        rec.y = {expectation(rho, pauli_y())};
        rec.z = {expectation(rho, pauli_z())};
    } else if (rho.rows() == 4) {
        const Matrix ra = partial_trace(rho, Subsystem::A);
        const Matrix rb = partial_trace(rho, Subsystem::B);
        rec.x = {expectation(ra, pauli_x()), expectation(rb, pauli_x())};
        rec.y = {expectation(ra, pauli_y()), expectation(rb, pauli_y())};
        rec.z = {expectation(ra, pauli_z()), expectation(rb, pauli_z())};
        rec.concurrence = concurrence(rho);
        rec.bell_fidelity = bell_fidelity(rho);
    }
    return rec;
}

template <class Rhs>
inline void rk4_step(Rhs&& rhs, Matrix& rho, double t, double h) {
    const Matrix k1 = rhs(rho, t);
    const Matrix k2 = rhs((rho + 0.5 * h * k1).eval(), t + 0.5 * h);
    const Matrix k3 = rhs((rho + 0.5 * h * k2).eval(), t + 0.5 * h);
    const Matrix k4 = rhs((rho + h * k3).eval(), t + h);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Integrate drho/dt = rhs(rho, t) from t = 0, recording the state at each
/// requested sample time (the stepper lands on samples exactly by truncating
/// the final step). Trace drift and positivity violations abort with an
/// IntegrationError rather than being silently corrected.
template <class Rhs>
inline Trajectory integrate(Rhs&& rhs, const DensityOperator& rho0, double t_end,
                            const std::vector<double>& samples, const IntegratorConfig& cfg = {}) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("integrate: dt must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < 0.0 || samples[i] > t_end + 1e-12) {
            throw std::invalid_argument("integrate: samples must lie in [0, t_end]");
        }
        if (i > 0 && samples[i] <= samples[i - 1]) {
            throw std::invalid_argument("integrate: samples must be strictly increasing");
        }
    }

    Trajectory traj;
    traj.times.reserve(samples.size());
    traj.states.reserve(samples.size());
    traj.observables.reserve(samples.size());

    Matrix rho = rho0.matrix();
    double t = 0.0;
    auto check = [&](const Matrix& m, double at) {
        if (!all_finite(m)) {
            throw IntegrationError(IntegrationError::Kind::non_finite, "non-finite state", at);
        }
        const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
        if (tr_err > cfg.tol_trace) {
            throw IntegrationError(IntegrationError::Kind::trace_drift,
                                   "trace drift " + std::to_string(tr_err), at);
        }
        if (min_eigenvalue(hermitize(m)) < -cfg.tol_psd * 1e3) {
            throw IntegrationError(IntegrationError::Kind::positivity,
                                   "positivity violation", at);
        }
    };

    for (double s : samples) {
        while (t < s - 1e-12) {
            const double h = std::min(cfg.dt, s - t);
            detail::rk4_step(rhs, rho, t, h);
            t += h;
            if (cfg.resym) rho = hermitize(rho);
            if (cfg.psd_repair && min_eigenvalue(rho) < 0.0) {
                double clipped = 0.0;
                rho = psd_project(rho, &clipped);
                if (clipped > cfg.repair_tol) {
                    throw IntegrationError(IntegrationError::Kind::positivity,
                                           "positivity repair exceeded its per-step budget", t);
                }
                traj.repaired_weight += clipped;
            }
            check(rho, t);
        }
        traj.times.push_back(s);
        traj.states.push_back(rho);
        traj.observables.push_back(detail::observe(rho, s));
    }
    return traj;
}

}  // namespace seaqtsim
