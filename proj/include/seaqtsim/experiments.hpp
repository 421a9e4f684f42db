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
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seaqtsim/hamiltonians.hpp"
#include "seaqtsim/integrator.hpp"
#include "seaqtsim/lindblad.hpp"
#include "seaqtsim/metrics.hpp"
#include "seaqtsim/optim.hpp"
#include "seaqtsim/rng.hpp"
#include "seaqtsim/seaqt.hpp"
#include "seaqtsim/tomography.hpp"

// Simulation pipelines for the three characterization protocols: inversion
// recovery (T1), Ramsey (T2*/detuning) and the CR entanglement-
// disentanglement sweep, plus finite-shot emulation and curve fits.

namespace seaqtsim {

class NonIdentifiableError : public std::runtime_error {
  public:
    explicit NonIdentifiableError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Per-qubit physical and dissipation parameters (one device-table row).
struct QubitParams {
    int index = 0;
    double freq_ghz = 5.0;
    double delta_f_khz = 0.0;
    double x0_us = 100.0;
    double tau_dj_us = 40.0;
    std::optional<double> tau_dj_2q_us;
    double inv_gamma1_us = 100.0;
    double inv_gamma2_us = 100.0;
    double t1_ref_us = 0.0;
    double t2_ref_us = 0.0;

    double omega_rad_us() const { return 2.0 * std::numbers::pi * freq_ghz * 1e3; }
    double delta_omega_rad_us() const { return 2.0 * std::numbers::pi * delta_f_khz * 1e-3; }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) {
                throw std::invalid_argument(std::string("QubitParams: ") + name +
                                            " must be positive");
            }
        };
        if (index < 0) throw std::invalid_argument("QubitParams: negative index");
        positive(freq_ghz, "freq_ghz");
        positive(delta_f_khz, "delta_f_khz");
        positive(x0_us, "x0_us");
        positive(tau_dj_us, "tau_dj_us");
        if (tau_dj_2q_us) positive(*tau_dj_2q_us, "tau_dj_2q_us");
        positive(inv_gamma1_us, "inv_gamma1_us");
        positive(inv_gamma2_us, "inv_gamma2_us");
    }
};

enum class ExperimentKind { t1, ramsey, entangle };
enum class EngineKind { seaqt, lindblad, both };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::t1: return "t1";
        case ExperimentKind::ramsey: return "ramsey";
        default: return "entangle";
    }
}

inline std::string to_string(EngineKind e) {
    switch (e) {
        case EngineKind::seaqt: return "seaqt";
        case EngineKind::lindblad: return "lindblad";
        default: return "both";
    }
}

struct ExperimentPlan {
    ExperimentKind kind = ExperimentKind::t1;
    std::vector<double> delays;  // delay times (or CR widths), us
    std::uint64_t shots = 8192;
    bool apply_shot_noise = true;
    EngineKind engine = EngineKind::both;
    std::uint64_t seed = 0;

    void validate() const {
        if (delays.empty()) throw std::invalid_argument("ExperimentPlan: delays must be nonempty");
        for (std::size_t i = 1; i < delays.size(); ++i) {
            if (delays[i] < delays[i - 1]) {
                throw std::invalid_argument("ExperimentPlan: delays must be nondecreasing");
            }
        }
        if (shots < 1) throw std::invalid_argument("ExperimentPlan: shots must be >= 1");
    }
};

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) return {a};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

/// The hardware grids: 25 delays to 42.6 us, 30 CR widths to 20.45 us.
inline std::vector<double> default_delay_grid() { return linspace(0.0, 42.6, 25); }
inline std::vector<double> default_width_grid() { return linspace(0.0, 20.45, 30); }

struct GateSettings {
    double t_gate_us = 0.0352;
    double sigma_frac = 0.25;  // sigma = sigma_frac * t_gate
    double drag_beta = 0.0;
};

struct EntangleSettings {
    CRSpec cr{.nu_zx = 5.0, .nu_echo_zx = 5.0, .amp_scale = 0.1};
    bool local_correction = true;  // fixed target-frame rotation before fidelity
    bool explicit_echo = false;    // integrate the two signed CR halves explicitly
};

/// Pipeline-level knobs shared by all experiments (per-qubit numbers come
/// from QubitParams).
struct EngineSettings {
    IntegratorConfig integrator;
    double beta_r_omega = 5.0;  // beta_R * omega_q, dimensionless
    double tau_floor_frac = 1e-3;
    double rank_eps = 1e-12;
    SeaqtConfig::Dephasing dephasing = SeaqtConfig::Dephasing::determinant;
    bool combined_reservoir = false;
    SeaqtConfig::TauDrSign tau_dr_sign = SeaqtConfig::TauDrSign::plus;
    double prep_error = 1e-6;  // preparation infidelity mixed into rho0
    bool pulse_resolved_prep = false;
    bool dissipation = true;  // master switch; false gives the unitary reference
    GateSettings gates;
    EntangleSettings entangle;
};

inline SeaqtConfig make_seaqt_config(const QubitParams& q, const EngineSettings& s,
                                     double tau_dj) {
    SeaqtConfig c;
    c.tau_dj = tau_dj;
    c.x0 = q.x0_us;
    c.beta_r = s.beta_r_omega / q.omega_rad_us();
    c.tau_floor_frac = s.tau_floor_frac;
    c.rank_eps = s.rank_eps;
    c.dephasing = s.dissipation ? s.dephasing : SeaqtConfig::Dephasing::off;
    c.relaxation = s.dissipation;
    c.combined_reservoir = s.combined_reservoir;
    c.tau_dr_sign = s.tau_dr_sign;
    return c;
}

inline LindbladConfig make_lindblad_config(const QubitParams& q, const EngineSettings& s) {
    if (!s.dissipation) return {};
    return {1.0 / q.inv_gamma1_us, 1.0 / q.inv_gamma2_us};
}

// ---------------------------------------------------------------------------
// Shot emulation

struct SampleStat {
    double mean = 0.0;
    double std = 0.0;
};

/// Binomial estimate of a probability from `shots` repetitions; the reported
/// std is the binomial standard error sqrt(p(1-p)/shots).
inline SampleStat shot_sample(double p, std::uint64_t shots, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("shot_sample: p outside [0, 1]");
    if (shots < 1) throw std::invalid_argument("shot_sample: shots must be >= 1");
    auto rng = make_rng(seed);
    const std::uint64_t hits = binomial_draw(rng, shots, p);
    SampleStat s;
    s.mean = static_cast<double>(hits) / static_cast<double>(shots);
    s.std = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    return s;
}

// ---------------------------------------------------------------------------
// Curves

struct CurveColumn {
    std::string name;
    std::vector<double> value;
    std::vector<double> std;
};

struct ExperimentCurves {
    ExperimentKind kind = ExperimentKind::t1;
    std::vector<double> t_us;
    std::vector<CurveColumn> columns;

    const CurveColumn& column(const std::string& name) const {
        for (const auto& c : columns) {
            if (c.name == name) return c;
        }
        throw std::invalid_argument("ExperimentCurves: no column named '" + name + "'");
    }
    bool has_column(const std::string& name) const {
        for (const auto& c : columns) {
            if (c.name == name) return true;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// State preparation

/// Ideal instantaneous gate followed by an optional small depolarizing
/// admixture. The admixture keeps the prepared state full rank; the exact
/// post-gate projector |1><1| is an (unstable) fixed point of every SEA
/// dissipator, which a hardware pulse never prepares exactly.
inline Matrix prepare_with_gate(const Matrix& gate, const Matrix& rho0, double prep_error) {
    Matrix rho = gate * rho0 * gate.adjoint();
    if (prep_error > 0.0) {
        const double d = static_cast<double>(rho.rows());
        rho = (1.0 - prep_error) * rho + (prep_error / d) * identity(rho.rows());
    }
    return rho;
}

/// Pulse-resolved preparation: integrate the drive-frame Hamiltonian with
/// the DRAG envelope across the gate window (unitary part only; the gate
/// time is three orders of magnitude below the dissipation scales).
inline Matrix pulse_resolved_prepare(const Matrix& rho0, double rotation_angle,
                                     const GateSettings& g, double delta_omega = 0.0,
                                     double prep_error = 0.0) {
    PulseEnvelope env;
    env.t_gate = g.t_gate_us;
    env.sigma = g.sigma_frac * g.t_gate_us;
    env.t0 = 0.5 * g.t_gate_us;
    env.drag_beta = g.drag_beta;
    env.amp = 1.0;
    const double window = gaussian_envelope_integral(env, 0.0, env.t_gate);
    env.amp = 0.5 * rotation_angle / window;
    const DriveSpec drive{delta_omega, env};

    Matrix rho = rho0;
    const int steps = 500;
    const double h = env.t_gate / steps;
    auto rhs = [&drive](const Matrix& r, double t) -> Matrix {
        return -kImag * commutator(drive_hamiltonian(t, drive), r);
    };
    double t = 0.0;
    for (int i = 0; i < steps; ++i) {
        detail::rk4_step(rhs, rho, t, h);
        t += h;
        rho = hermitize(rho);
    }
    if (prep_error > 0.0) {
        const double d = static_cast<double>(rho.rows());
        rho = (1.0 - prep_error) * rho + (prep_error / d) * identity(rho.rows());
    }
    return rho;
}

namespace detail {

inline std::vector<EngineKind> expand_engines(EngineKind e) {
    if (e == EngineKind::both) return {EngineKind::seaqt, EngineKind::lindblad};
    return {e};
}

inline std::uint64_t stream_id(int engine_idx, int observable_idx, std::size_t point_idx) {
    return static_cast<std::uint64_t>(engine_idx) * 1000003ULL +
           static_cast<std::uint64_t>(observable_idx) * 1009ULL +
           static_cast<std::uint64_t>(point_idx);
}

/// Turn exact expectation values of a +/-1 observable into a sampled column.
inline CurveColumn sample_column(const std::string& name, const std::vector<double>& exact,
                                 const ExperimentPlan& plan, int engine_idx, int observable_idx) {
    CurveColumn col;
    col.name = name;
    col.value.reserve(exact.size());
    col.std.reserve(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (plan.apply_shot_noise) {
            const double p = std::clamp(0.5 * (1.0 + exact[i]), 0.0, 1.0);
            const auto s = shot_sample(
                p, plan.shots, mix_seed(plan.seed, stream_id(engine_idx, observable_idx, i)));
            col.value.push_back(2.0 * s.mean - 1.0);
            col.std.push_back(2.0 * s.std);
        } else {
            col.value.push_back(exact[i]);
            col.std.push_back(0.0);
        }
    }
    return col;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inversion recovery (T1)

/// Prepare |1> with an X gate, wait, measure <Z>. The delay frame removes
/// the fast sigma_z precession (to which <Z> is blind); the dissipators are
/// built from the physical qubit Hamiltonian.
inline ExperimentCurves inversion_recovery(const QubitParams& q, const ExperimentPlan& plan,
                                           const EngineSettings& s) {
    if (plan.kind != ExperimentKind::t1) {
        throw std::invalid_argument("inversion_recovery: plan.kind must be t1");
    }
    plan.validate();
    q.validate();

    ExperimentCurves out;
    out.kind = ExperimentKind::t1;
    out.t_us = plan.delays;

    const Matrix h_frame = Matrix::Zero(2, 2);
    const Matrix h_phys = two_level_hamiltonian(q.omega_rad_us());
    const Matrix ground = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
    const Matrix rho0 = s.pulse_resolved_prep
                            ? pulse_resolved_prepare(ground, std::numbers::pi, s.gates, 0.0,
                                                     s.prep_error)
                            : prepare_with_gate(x_gate(), ground, s.prep_error);

    int engine_idx = 0;
    for (EngineKind eng : detail::expand_engines(plan.engine)) {
        Trajectory traj;
        if (eng == EngineKind::seaqt) {
            const SeaqtEom eom(h_frame, h_phys, make_seaqt_config(q, s, q.tau_dj_us));
            traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                             s.integrator);
        } else {
            const LindbladEom eom{h_frame, make_lindblad_config(q, s)};
            traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                             s.integrator);
        }
        std::vector<double> z_exact(traj.observables.size());
        for (std::size_t i = 0; i < traj.observables.size(); ++i) {
            z_exact[i] = traj.observables[i].z[0];
        }
        const std::string tag = to_string(eng);
        CurveColumn zc = detail::sample_column("z_" + tag, z_exact, plan, engine_idx, 0);
        CurveColumn p1c;
        p1c.name = "p1_" + tag;
        for (std::size_t i = 0; i < zc.value.size(); ++i) {
            p1c.value.push_back(0.5 * (1.0 - zc.value[i]));
            p1c.std.push_back(0.5 * zc.std[i]);
        }
        out.columns.push_back(std::move(zc));
        out.columns.push_back(std::move(p1c));
        if (eng == EngineKind::seaqt) {
            CurveColumn tau;
            tau.name = "tau_dr_" + tag;
            const SeaqtConfig cfg = make_seaqt_config(q, s, q.tau_dj_us);
            for (const Matrix& st : traj.states) {
                tau.value.push_back(tau_dr(st, q.x0_us, cfg));
                tau.std.push_back(0.0);
            }
            out.columns.push_back(std::move(tau));
        }
        ++engine_idx;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ramsey

/// Prepare |+>, free-evolve under the detuning-frame Hamiltonian
/// -(delta_omega/2) sigma_z plus the engine dissipators, measure <X>, <Y>,
/// <Z> (each its own measurement run when shot noise is on).
inline ExperimentCurves ramsey(const QubitParams& q, const ExperimentPlan& plan,
                               const EngineSettings& s) {
    if (plan.kind != ExperimentKind::ramsey) {
        throw std::invalid_argument("ramsey: plan.kind must be ramsey");
    }
    plan.validate();
    q.validate();

    ExperimentCurves out;
    out.kind = ExperimentKind::ramsey;
    out.t_us = plan.delays;

    const Matrix h_frame = -0.5 * q.delta_omega_rad_us() * pauli_z();
    const Matrix h_phys = two_level_hamiltonian(q.omega_rad_us());
    const Matrix ground = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
    const Matrix rho0 = s.pulse_resolved_prep
                            ? pulse_resolved_prepare(ground, 0.5 * std::numbers::pi, s.gates, 0.0,
                                                     s.prep_error)
                            : prepare_with_gate(x_half_gate(), ground, s.prep_error);

    int engine_idx = 0;
    for (EngineKind eng : detail::expand_engines(plan.engine)) {
        Trajectory traj;
        if (eng == EngineKind::seaqt) {
            const SeaqtEom eom(h_frame, h_phys, make_seaqt_config(q, s, q.tau_dj_us));
            traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                             s.integrator);
        } else {
            const LindbladEom eom{h_frame, make_lindblad_config(q, s)};
            traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                             s.integrator);
        }
        const std::size_t n = traj.observables.size();
        std::vector<double> xe(n), ye(n), ze(n);
        for (std::size_t i = 0; i < n; ++i) {
            xe[i] = traj.observables[i].x[0];
            ye[i] = traj.observables[i].y[0];
            ze[i] = traj.observables[i].z[0];
        }
        const std::string tag = to_string(eng);
        out.columns.push_back(detail::sample_column("x_" + tag, xe, plan, engine_idx, 0));
        out.columns.push_back(detail::sample_column("y_" + tag, ye, plan, engine_idx, 1));
        out.columns.push_back(detail::sample_column("z_" + tag, ze, plan, engine_idx, 2));
        ++engine_idx;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entanglement-disentanglement

/// Fixed target-frame rotation on the target qubit mapping the CR-generated
/// state family onto |Phi> at maximum entanglement (concurrence is blind to
/// it; the fidelity readout needs it).
inline Matrix entangle_local_correction() { return kron(identity(2), hadamard_gate() * s_gate()); }

/// Hadamard on the control, then the echoed CR interaction for each pulse
/// width t_g, with each engine's dissipators active during the pulse.
/// Scenario 1 uses the single-qubit dephasing times, scenario 2 the
/// two-qubit ones; the relaxation constants x0 are common to both.
inline ExperimentCurves entangle_disentangle(const QubitParams& q0, const QubitParams& q1,
                                             const ExperimentPlan& plan, const EngineSettings& s,
                                             int scenario) {
    if (plan.kind != ExperimentKind::entangle) {
        throw std::invalid_argument("entangle_disentangle: plan.kind must be entangle");
    }
    if (scenario != 1 && scenario != 2) {
        throw std::invalid_argument("entangle_disentangle: scenario must be 1 or 2");
    }
    plan.validate();
    q0.validate();
    q1.validate();

    auto scenario_tau = [&](const QubitParams& q) {
        if (scenario == 1) return q.tau_dj_us;
        if (!q.tau_dj_2q_us) {
            throw std::invalid_argument("entangle_disentangle: qubit " + std::to_string(q.index) +
                                        " has no tau_dj_2q value for scenario 2");
        }
        return *q.tau_dj_2q_us;
    };

    ExperimentCurves out;
    out.kind = ExperimentKind::entangle;
    out.t_us = plan.delays;

    const Matrix h_eff = cr_hamiltonian(s.entangle.cr, +1, true);
    // Relaxation generators are the physical qubit Hamiltonians; the
    // dephasing determinant uses the frame Hamiltonian the state actually
    // evolves under, which keeps its conserved pairing aligned with the
    // motion.
    const Matrix h_loc_a = two_level_hamiltonian(q0.omega_rad_us());
    const Matrix h_loc_b = two_level_hamiltonian(q1.omega_rad_us());
    const Matrix h_deph = h_eff;
    const Matrix ket00 = kron(basis_ket(0, 2), basis_ket(0, 2));
    const Matrix rho00 = ket00 * ket00.adjoint();
    const Matrix had = kron(hadamard_gate(), identity(2));
    const Matrix rho0 = prepare_with_gate(had, rho00, s.prep_error);
    const Matrix corr = entangle_local_correction();

    int engine_idx = 0;
    for (EngineKind eng : detail::expand_engines(plan.engine)) {
        std::vector<Matrix> states;
        // The per-qubit dissipators tensored with the partner marginal do
        // not protect the composite kernel once the qubits entangle; the
        // bounded eigenvalue repair keeps the integrated state physical.
        IntegratorConfig icfg = s.integrator;
        if (eng == EngineKind::seaqt && s.dissipation) icfg.psd_repair = true;

        auto run_effective = [&]() {
            Trajectory traj;
            if (eng == EngineKind::seaqt) {
                SeaqtEom2 eom{h_eff,
                              h_deph,
                              {h_loc_a, h_loc_b},
                              {make_seaqt_config(q0, s, scenario_tau(q0)),
                               make_seaqt_config(q1, s, scenario_tau(q1))}};
                traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                                 icfg);
            } else {
                const LindbladEom2 eom{h_eff, make_lindblad_config(q0, s),
                                       make_lindblad_config(q1, s)};
                traj = integrate(eom, DensityOperator(rho0), plan.delays.back(), plan.delays,
                                 icfg);
            }
            states = std::move(traj.states);
        };

        auto run_explicit_echo = [&]() {
            // Per width: CR(+O) for t_g/2, X on the control, CR(-O) for
            // t_g/2, X on the control again.
            const Matrix xi = kron(pauli_x(), identity(2));
            const Matrix h_plus = cr_hamiltonian(s.entangle.cr, +1, false);
            const Matrix h_minus = cr_hamiltonian(s.entangle.cr, -1, false);
            for (double width : plan.delays) {
                Matrix rho = rho0;
                auto evolve = [&](const Matrix& h, double duration) {
                    if (duration <= 0.0) return;
                    std::vector<double> end = {duration};
                    Trajectory seg;
                    if (eng == EngineKind::seaqt) {
                        SeaqtEom2 eom{h,
                                      h_deph,
                                      {h_loc_a, h_loc_b},
                                      {make_seaqt_config(q0, s, scenario_tau(q0)),
                                       make_seaqt_config(q1, s, scenario_tau(q1))}};
                        seg = integrate(eom, DensityOperator(rho), duration, end, icfg);
                    } else {
                        const LindbladEom2 eom{h, make_lindblad_config(q0, s),
                                               make_lindblad_config(q1, s)};
                        seg = integrate(eom, DensityOperator(rho), duration, end, icfg);
                    }
                    rho = seg.states.back();
                };
                evolve(h_plus, 0.5 * width);
                rho = xi * rho * xi.adjoint();
                evolve(h_minus, 0.5 * width);
                rho = xi * rho * xi.adjoint();
                states.push_back(rho);
            }
        };

        if (s.entangle.explicit_echo) {
            run_explicit_echo();
        } else {
            run_effective();
        }

        CurveColumn conc, fid;
        const std::string tag = to_string(eng);
        conc.name = "concurrence_" + tag;
        fid.name = "fidelity_" + tag;
        for (std::size_t i = 0; i < states.size(); ++i) {
            Matrix rho = states[i];
            if (s.entangle.local_correction) rho = corr * rho * corr.adjoint();
            if (plan.apply_shot_noise) {
                // Emulate the 9-setting tomography readout and compute the
                // metrics from the reconstructed state.
                std::vector<MeasurementRecord> recs;
                const auto& settings = tomography_settings();
                for (std::size_t k = 0; k < settings.size(); ++k) {
                    recs.push_back(simulate_counts(
                        rho, settings[k], plan.shots,
                        mix_seed(plan.seed, detail::stream_id(engine_idx, static_cast<int>(k), i))));
                }
                rho = reconstruct(recs);
            }
            conc.value.push_back(concurrence(rho));
            conc.std.push_back(0.0);
            fid.value.push_back(bell_fidelity(rho));
            fid.std.push_back(0.0);
        }
        out.columns.push_back(std::move(conc));
        out.columns.push_back(std::move(fid));
        ++engine_idx;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curve fits

struct T1FitResult {
    double t1_us = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Least-squares fit of P1(t) = A exp(-t/T1) (+ c when with_offset).
inline T1FitResult fit_t1(const std::vector<double>& t, const std::vector<double>& p1,
                          const std::vector<double>* stds = nullptr, bool with_offset = false) {
    if (t.size() != p1.size() || t.size() < 3) {
        throw std::invalid_argument("fit_t1: need at least 3 (t, p1) points");
    }
    const double lo = *std::min_element(p1.begin(), p1.end());
    const double hi = *std::max_element(p1.begin(), p1.end());
    if (hi - lo <= 1e-9 * std::max(1.0, std::abs(hi))) {
        throw NonIdentifiableError("fit_t1: curve is flat");
    }

    // Log-linear initialization on the clearly positive part of the decay.
    const double base = with_offset ? lo : 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = p1[i] - base;
        if (v > 1e-6 * (hi - base)) {
            const double ly = std::log(v);
            sx += t[i];
            sy += ly;
            sxx += t[i] * t[i];
            sxy += t[i] * ly;
            ++m;
        }
    }
    double rate0 = 1.0 / std::max(t.back(), 1e-6);
    double a0 = hi - base;
    if (m >= 2) {
        const double denom = m * sxx - sx * sx;
        if (std::abs(denom) > 0) {
            const double slope = (m * sxy - sx * sy) / denom;
            if (slope < 0) rate0 = -slope;
            a0 = std::exp((sy - slope * sx) / m);
        }
    }

    auto weight = [&](std::size_t i) {
        if (!stds || (*stds)[i] <= 0.0) return 1.0;
        return 1.0 / ((*stds)[i] * (*stds)[i]);
    };
    auto sse_of = [&](const std::vector<double>& th) {
        const double a = th[0], rate = std::exp(th[1]);
        const double c = with_offset ? th[2] : 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = a * std::exp(-rate * t[i]) + c - p1[i];
            acc += weight(i) * r * r;
        }
        return acc;
    };

    std::vector<double> th0 = {a0, std::log(rate0)};
    if (with_offset) th0.push_back(base);
    const MinimizeResult mr = nelder_mead(sse_of, th0, {.max_iterations = 500, .rel_tol = 1e-10});

    T1FitResult res;
    res.amplitude = mr.x[0];
    res.t1_us = 1.0 / std::exp(mr.x[1]);
    res.offset = with_offset ? mr.x[2] : 0.0;
    res.sse = mr.value;
    res.iterations = mr.iterations;
    res.converged = mr.converged;
    return res;
}

struct DftPeak {
    double f_peak = 0.0;       // cycles per us
    double bin_width = 0.0;    // cycles per us
};

/// Magnitude peak of the discrete Fourier transform of a uniformly sampled
/// real signal (mean removed), searched over the positive-frequency bins.
inline DftPeak dft_peak(const std::vector<double>& t, const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 4 || t.size() != n) throw std::invalid_argument("dft_peak: need >= 4 samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * std::max(dt, 1.0)) {
            throw std::invalid_argument("dft_peak: samples must be uniformly spaced");
        }
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);

    DftPeak out;
    out.bin_width = 1.0 / (static_cast<double>(n) * dt);
    double best = -1.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(k * j) /
                                 static_cast<double>(n);
            acc += (v[j] - mean) * Complex(std::cos(phase), std::sin(phase));
        }
        if (std::abs(acc) > best) {
            best = std::abs(acc);
            out.f_peak = static_cast<double>(k) * out.bin_width;
        }
    }
    return out;
}

struct RamseyFitResult {
    double t2_star_us = 0.0;
    bool t2_unbounded = false;  // decay not resolvable; t2_star is +inf
    double delta_f_khz = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double f_peak_khz = 0.0;    // DFT initializer diagnostics
    double fft_bin_khz = 0.0;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped-cosine fit A exp(-t/T2*) cos(2 pi f t + phi) + c with the
/// frequency initialized from the DFT peak.
inline RamseyFitResult fit_ramsey(const std::vector<double>& t, const std::vector<double>& x,
                                  const std::vector<double>* stds = nullptr) {
    if (t.size() != x.size() || t.size() < 8) {
        throw std::invalid_argument("fit_ramsey: need at least 8 (t, x) points");
    }
    const double span = t.back() - t.front();
    double lo = *std::min_element(x.begin(), x.end());
    double hi = *std::max_element(x.begin(), x.end());
    if (hi - lo <= 1e-9 * std::max(1.0, std::abs(hi))) {
        throw NonIdentifiableError("fit_ramsey: signal is flat");
    }
    const DftPeak peak = dft_peak(t, x);
    if (peak.f_peak * span < 2.0) {
        throw NonIdentifiableError("fit_ramsey: fewer than 2 oscillation periods visible");
    }

    auto weight = [&](std::size_t i) {
        if (!stds || (*stds)[i] <= 0.0) return 1.0;
        return 1.0 / ((*stds)[i] * (*stds)[i]);
    };
    auto sse_of = [&](const std::vector<double>& th) {
        const double a = th[0], rate = th[1], f = th[2], phi = th[3], c = th[4];
        double acc = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double model =
                a * std::exp(-rate * t[i]) *
                    std::cos(2.0 * std::numbers::pi * f * t[i] + phi) +
                c;
            const double r = model - x[i];
            acc += weight(i) * r * r;
        }
        return acc;
    };

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());

    // The phase is the one parameter with real local-minimum risk; seed the
    // simplex from the best of four quadrature phases.
    std::vector<double> best_th;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        const std::vector<double> th = {0.5 * (hi - lo), 1.0 / span, peak.f_peak,
                                        0.5 * std::numbers::pi * k, mean};
        const double v = sse_of(th);
        if (v < best_sse) {
            best_sse = v;
            best_th = th;
        }
    }
    const MinimizeResult mr =
        nelder_mead(sse_of, best_th, {.max_iterations = 800, .rel_tol = 1e-12});

    RamseyFitResult res;
    res.amplitude = mr.x[0];
    const double rate = mr.x[1];
    const double rate_floor = 1.0 / (100.0 * span);
    if (rate < rate_floor) {
        res.t2_unbounded = true;
        res.t2_star_us = std::numeric_limits<double>::infinity();
    } else {
        res.t2_star_us = 1.0 / rate;
    }
    res.delta_f_khz = mr.x[2] * 1e3;
    res.phase = mr.x[3];
    res.offset = mr.x[4];
    res.f_peak_khz = peak.f_peak * 1e3;
    res.fft_bin_khz = peak.bin_width * 1e3;
    res.sse = mr.value;
    res.iterations = mr.iterations;
    res.converged = mr.converged;
    return res;
}

}  // namespace seaqtsim
