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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seaqtsim/density.hpp"
#include "seaqtsim/matrix.hpp"
#include "seaqtsim/rng.hpp"

// Two-qubit state reconstruction from the 9 two-local Pauli measurement
// settings: linear inversion of the 15 Pauli expectation values followed by
// projection onto the positive unit-trace cone.

namespace seaqtsim {

enum class PauliAxis { X, Y, Z };

inline Matrix pauli_of(PauliAxis p) {
    switch (p) {
        case PauliAxis::X: return pauli_x();
        case PauliAxis::Y: return pauli_y();
        default: return pauli_z();
    }
}

struct MeasurementSetting {
    PauliAxis a = PauliAxis::Z;
    PauliAxis b = PauliAxis::Z;
};

/// Outcome counts for one setting, ordered (++, +-, -+, --).
struct MeasurementRecord {
    MeasurementSetting setting;
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t shots = 0;
};

inline const std::array<MeasurementSetting, 9>& tomography_settings() {
    static const std::array<MeasurementSetting, 9> s = {{
        {PauliAxis::X, PauliAxis::X}, {PauliAxis::X, PauliAxis::Y}, {PauliAxis::X, PauliAxis::Z},
        {PauliAxis::Y, PauliAxis::X}, {PauliAxis::Y, PauliAxis::Y}, {PauliAxis::Y, PauliAxis::Z},
        {PauliAxis::Z, PauliAxis::X}, {PauliAxis::Z, PauliAxis::Y}, {PauliAxis::Z, PauliAxis::Z},
    }};
    return s;
}

/// Eigenprojectors onto the +1/-1 eigenspaces of a single-qubit Pauli.
inline std::array<Matrix, 2> pauli_projectors(PauliAxis p) {
    const Matrix op = pauli_of(p);
    const Matrix i2 = identity(2);
    return {0.5 * (i2 + op), 0.5 * (i2 - op)};
}

/// Exact outcome probabilities of the projective (P_a x P_b) measurement,
/// ordered (++, +-, -+, --).
inline std::array<double, 4> outcome_probabilities(const Matrix& rho,
                                                   const MeasurementSetting& setting) {
    if (rho.rows() != 4) throw std::invalid_argument("outcome_probabilities: expected 4x4 state");
    const auto pa = pauli_projectors(setting.a);
    const auto pb = pauli_projectors(setting.b);
    std::array<double, 4> probs{};
    for (int sa = 0; sa < 2; ++sa) {
        for (int sb = 0; sb < 2; ++sb) {
            const Matrix proj = kron(pa[sa], pb[sb]);
            probs[2 * sa + sb] = std::max(0.0, (rho * proj).trace().real());
        }
    }
    // Normalize away the clamping residue.
    const double total = probs[0] + probs[1] + probs[2] + probs[3];
    for (double& p : probs) p /= total;
    return probs;
}

/// Multinomial draw over the 4 outcomes via sequential binomials.
inline MeasurementRecord simulate_counts(const Matrix& rho, const MeasurementSetting& setting,
                                         std::uint64_t shots, std::uint64_t seed) {
    MeasurementRecord rec;
    rec.setting = setting;
    rec.shots = shots;
    const auto probs = outcome_probabilities(rho, setting);
    auto rng = make_rng(seed);
    std::uint64_t remaining = shots;
    double prob_left = 1.0;
    for (int k = 0; k < 3; ++k) {
        const double p = (prob_left > 0.0) ? std::min(1.0, probs[k] / prob_left) : 0.0;
        const std::uint64_t c = binomial_draw(rng, remaining, p);
        rec.counts[k] = c;
        remaining -= c;
        prob_left -= probs[k];
    }
    rec.counts[3] = remaining;
    return rec;
}

inline MeasurementRecord simulate_counts(const DensityOperator& rho,
                                         const MeasurementSetting& setting, std::uint64_t shots,
                                         std::uint64_t seed) {
    return simulate_counts(rho.matrix(), setting, shots, seed);
}

/// Linear inversion over the 9 settings. One-qubit expectation values are
/// read from the marginals of every setting that measures the relevant
/// axis (averaged), two-qubit correlators from their own setting.
inline Matrix reconstruct(const std::vector<MeasurementRecord>& records) {
    if (records.size() != 9) {
        throw std::invalid_argument("reconstruct: expected 9 measurement records");
    }
    bool seen[3][3] = {};
    std::uint64_t shots = records.front().shots;
    for (const auto& r : records) {
        if (r.shots == 0) throw std::invalid_argument("reconstruct: record with zero shots");
        if (r.counts[0] + r.counts[1] + r.counts[2] + r.counts[3] != r.shots) {
            throw std::invalid_argument("reconstruct: counts do not sum to shots");
        }
        if (r.shots != shots) {
            throw std::invalid_argument("reconstruct: inconsistent shot counts across settings");
        }
        seen[static_cast<int>(r.setting.a)][static_cast<int>(r.setting.b)] = true;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!seen[i][j]) throw std::invalid_argument("reconstruct: missing setting");

    double corr[3][3] = {};    // <P_a x P_b>
    double single_a[3] = {};   // <P_a x I>, averaged over the 3 settings carrying P_a
    double single_b[3] = {};
    int count_a[3] = {}, count_b[3] = {};
    for (const auto& r : records) {
        const double n = static_cast<double>(r.shots);
        const double f_pp = r.counts[0] / n, f_pm = r.counts[1] / n;
        const double f_mp = r.counts[2] / n, f_mm = r.counts[3] / n;
        const int ia = static_cast<int>(r.setting.a), ib = static_cast<int>(r.setting.b);
        corr[ia][ib] = f_pp - f_pm - f_mp + f_mm;
        single_a[ia] += f_pp + f_pm - f_mp - f_mm;
        single_b[ib] += f_pp - f_pm + f_mp - f_mm;
        ++count_a[ia];
        ++count_b[ib];
    }
    for (int i = 0; i < 3; ++i) {
        single_a[i] /= count_a[i];
        single_b[i] /= count_b[i];
    }

    const std::array<Matrix, 3> paulis = {pauli_x(), pauli_y(), pauli_z()};
    const Matrix i2 = identity(2);
    Matrix rho = 0.25 * identity(4);
    for (int i = 0; i < 3; ++i) {
        rho += 0.25 * single_a[i] * kron(paulis[i], i2);
        rho += 0.25 * single_b[i] * kron(i2, paulis[i]);
        for (int j = 0; j < 3; ++j) rho += 0.25 * corr[i][j] * kron(paulis[i], paulis[j]);
    }
    return psd_project(rho);
}

}  // namespace seaqtsim
