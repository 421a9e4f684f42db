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
#include <map>
#include <string>
#include <vector>

#include "seaqtsim/experiments.hpp"
#include "seaqtsim/optim.hpp"

// Engine-parameter estimation by weighted least squares between simulated
// curves and data: a coarse log-spaced grid over the bounds seeds a
// derivative-free simplex refinement (no gradients flow through the
// integrator, and the floored relaxation time puts a kink in the objective).

namespace seaqtsim {

/// Fittable engine parameters, by name:
///   "gamma1", "gamma2"  Lindblad rates (1/us)
///   "x0", "tau_dj"      SEAQT constants (us)
struct FitParamSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

struct FitDataPoint {
    double t = 0.0;
    double y = 0.0;
    double std = 0.0;  // <= 0 means absent -> unit weight
};

struct FitProblem {
    EngineKind engine = EngineKind::seaqt;
    ExperimentKind experiment = ExperimentKind::t1;
    std::vector<FitParamSpec> free_params;
    std::vector<FitDataPoint> data;
    QubitParams qubit;        // base values; free parameters override
    QubitParams qubit_b;      // second qubit (entangle only)
    int scenario = 1;         // entangle only
    EngineSettings settings;

    void validate() const {
        if (free_params.empty()) throw std::invalid_argument("FitProblem: no free parameters");
        for (const auto& p : free_params) {
            if (!(p.lo > 0.0) || !(p.hi > p.lo) || !std::isfinite(p.hi)) {
                throw std::invalid_argument("FitProblem: parameter '" + p.name +
                                            "' needs finite bounds with 0 < lo < hi");
            }
        }
        if (data.empty()) throw std::invalid_argument("FitProblem: data must be nonempty");
        for (std::size_t i = 1; i < data.size(); ++i) {
            if (data[i].t <= data[i - 1].t) {
                throw std::invalid_argument("FitProblem: data times must be strictly increasing");
            }
        }
        if (engine == EngineKind::both) {
            throw std::invalid_argument("FitProblem: pick one engine to fit");
        }
    }
};

struct FitResult {
    std::vector<std::pair<std::string, double>> params;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> sse_trace;  // best value after each objective evaluation
};

namespace detail {

inline void apply_fit_param(QubitParams& q, const std::string& name, double value) {
    if (name == "gamma1") {
        q.inv_gamma1_us = 1.0 / value;
    } else if (name == "gamma2") {
        q.inv_gamma2_us = 1.0 / value;
    } else if (name == "x0") {
        q.x0_us = value;
    } else if (name == "tau_dj") {
        q.tau_dj_us = value;
        if (q.tau_dj_2q_us) q.tau_dj_2q_us = value;
    } else {
        throw std::invalid_argument("fit: unknown parameter '" + name + "'");
    }
}

/// Noiseless simulated curve through the data's time grid.
inline std::vector<double> fit_model_curve(const FitProblem& prob,
                                           const std::vector<double>& values) {
    QubitParams q = prob.qubit;
    QubitParams qb = prob.qubit_b;
    for (std::size_t i = 0; i < prob.free_params.size(); ++i) {
        apply_fit_param(q, prob.free_params[i].name, values[i]);
        apply_fit_param(qb, prob.free_params[i].name, values[i]);
    }
    ExperimentPlan plan;
    plan.kind = prob.experiment;
    plan.engine = prob.engine;
    plan.apply_shot_noise = false;
    for (const auto& d : prob.data) plan.delays.push_back(d.t);

    const std::string tag = to_string(prob.engine);
    ExperimentCurves curves;
    std::string column;
    switch (prob.experiment) {
        case ExperimentKind::t1:
            curves = inversion_recovery(q, plan, prob.settings);
            column = "p1_" + tag;
            break;
        case ExperimentKind::ramsey:
            curves = ramsey(q, plan, prob.settings);
            column = "x_" + tag;
            break;
        case ExperimentKind::entangle:
            curves = entangle_disentangle(q, qb, plan, prob.settings, prob.scenario);
            column = "concurrence_" + tag;
            break;
    }
    return curves.column(column).value;
}

}  // namespace detail

inline FitResult fit(const FitProblem& prob) {
    prob.validate();
    const std::size_t dim = prob.free_params.size();

    // Flat data cannot identify anything.
    double ylo = prob.data.front().y, yhi = ylo, med_std = 0.0;
    {
        std::vector<double> stds;
        for (const auto& d : prob.data) {
            ylo = std::min(ylo, d.y);
            yhi = std::max(yhi, d.y);
            if (d.std > 0.0) stds.push_back(d.std);
        }
        if (!stds.empty()) {
            std::nth_element(stds.begin(), stds.begin() + stds.size() / 2, stds.end());
            med_std = stds[stds.size() / 2];
        }
    }
    if (yhi - ylo <= std::max(3.0 * med_std, 1e-12)) {
        throw NonIdentifiableError("fit: data is flat within the noise floor");
    }

    FitResult res;
    auto objective_raw = [&](const std::vector<double>& values) {
        const std::vector<double> model = detail::fit_model_curve(prob, values);
        double acc = 0.0;
        for (std::size_t i = 0; i < prob.data.size(); ++i) {
            const double w =
                (prob.data[i].std > 0.0) ? 1.0 / (prob.data[i].std * prob.data[i].std) : 1.0;
            const double r = model[i] - prob.data[i].y;
            acc += w * r * r;
        }
        if (res.sse_trace.empty()) {
            res.sse_trace.push_back(acc);
        } else {
            res.sse_trace.push_back(std::min(acc, res.sse_trace.back()));
        }
        return acc;
    };

    // Coarse log-spaced grid over the bounds.
    const int per_dim = (dim == 1) ? 10 : (dim == 2 ? 5 : 3);
    std::vector<std::vector<double>> axes;
    for (const auto& p : prob.free_params) axes.push_back(log_grid(p.lo, p.hi, per_dim));
    std::vector<double> best(dim);
    double best_sse = std::numeric_limits<double>::infinity();
    double worst_sse = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(dim, 0);
    while (true) {
        std::vector<double> point(dim);
        for (std::size_t d = 0; d < dim; ++d) point[d] = axes[d][idx[d]];
        const double v = objective_raw(point);
        if (v < best_sse) {
            best_sse = v;
            best = point;
        }
        worst_sse = std::max(worst_sse, v);
        std::size_t d = 0;
        while (d < dim && ++idx[d] == per_dim) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    if (worst_sse - best_sse <= 1e-9 * std::max(1.0, best_sse)) {
        throw NonIdentifiableError("fit: objective is flat across the parameter grid");
    }

    // Simplex refinement in log-parameter space, clamped to the bounds.
    auto objective_log = [&](const std::vector<double>& u) {
        std::vector<double> values(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const double v = std::exp(u[d]);
            values[d] = std::clamp(v, prob.free_params[d].lo, prob.free_params[d].hi);
        }
        return objective_raw(values);
    };
    std::vector<double> u0(dim);
    for (std::size_t d = 0; d < dim; ++d) u0[d] = std::log(best[d]);
    MinimizeOptions opts;
    opts.max_iterations = 500;
    opts.rel_tol = 1e-6;
    opts.stall_window = 20;
    opts.initial_step = 0.2;
    const MinimizeResult mr = nelder_mead(objective_log, u0, opts);

    for (std::size_t d = 0; d < dim; ++d) {
        const double v =
            std::clamp(std::exp(mr.x[d]), prob.free_params[d].lo, prob.free_params[d].hi);
        res.params.emplace_back(prob.free_params[d].name, v);
    }
    res.sse = mr.value;
    res.iterations = mr.iterations;
    res.converged = mr.converged;
    return res;
}

}  // namespace seaqtsim
