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
#include <functional>
#include <stdexcept>
#include <vector>

namespace seaqtsim {

struct MinimizeOptions {
    int max_iterations = 500;
    // Converged when the relative improvement of the best value over a
    // window of `stall_window` iterations drops below `rel_tol`.
    double rel_tol = 1e-6;
    int stall_window = 20;
    double initial_step = 0.25;  // relative simplex extent
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead simplex search (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Deterministic for a deterministic
/// objective.
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  const std::vector<double>& x0,
                                  const MinimizeOptions& opts = {}) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        double step = opts.initial_step * std::abs(x0[i]);
        if (step == 0.0) step = opts.initial_step;
        simplex[i + 1][i] += step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return fv[a] < fv[b];
        });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    order();

    MinimizeResult res;
    double window_best = fv[0];
    int since_check = 0;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;

        auto affine = [&](double coeff) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + coeff * (simplex[n][d] - centroid[d]);
            return p;
        };

        const std::vector<double> xr = affine(-1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const std::vector<double> xe = affine(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const std::vector<double> xc = affine(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
        order();

        if (++since_check >= opts.stall_window) {
            const double denom = std::max(std::abs(window_best), 1e-300);
            if ((window_best - fv[0]) / denom < opts.rel_tol) {
                res.converged = true;
                ++iter;
                break;
            }
            window_best = fv[0];
            since_check = 0;
        }
    }
    res.x = simplex[0];
    res.value = fv[0];
    res.iterations = iter;
    return res;
}

/// n log-spaced points covering [lo, hi] (inclusive); lo must be positive.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (lo <= 0.0 || hi <= lo || n < 2) throw std::invalid_argument("log_grid: bad range");
    std::vector<double> g(n);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + i * step);
    return g;
}

}  // namespace seaqtsim
