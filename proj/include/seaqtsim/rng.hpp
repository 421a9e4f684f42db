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

#include <cstdint>
#include <random>

namespace seaqtsim {

/// splitmix64 mix; used to derive independent per-point seeds from a master
/// seed so results are reproducible regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

/// Binomial draw with an explicit inversion sampler. The standard library's
/// binomial_distribution is implementation-defined, which would break the
/// byte-identical-output contract across toolchains.
inline std::uint64_t binomial_draw(std::mt19937_64& rng, std::uint64_t n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    // BTPE is overkill here: n is at most a few tens of thousands of shots,
    // so a single uniform plus CDF inversion with running term updates is
    // exact, fast enough, and fully deterministic.
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u = uni(rng);
    // Start from the mode region by walking the CDF from k = 0 with
    // logarithmic bookkeeping to avoid underflow for large n.
    const double q = 1.0 - p;
    double log_term = static_cast<double>(n) * std::log(q);  // P(X = 0)
    double cdf = std::exp(log_term);
    std::uint64_t k = 0;
    while (cdf < u && k < n) {
        // P(k+1) = P(k) * (n-k)/(k+1) * p/q
        log_term += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1)) +
                    std::log(p) - std::log(q);
        ++k;
        cdf += std::exp(log_term);
    }
    return k;
}

}  // namespace seaqtsim
