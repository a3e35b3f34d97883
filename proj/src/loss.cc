// Copyright 2026 The qpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpg/loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpg/error.h"

namespace qpg {

namespace {

bool is_probability(double p) {
    return std::isfinite(p) && p >= 0.0 && p <= 1.0;
}

double uniform01(Rng &rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

void LossModel::validate() const {
    if (!is_probability(survive_h) || !is_probability(survive_v)) {
        throw Error(ErrorCode::InvalidParams, "survival probabilities must lie in [0, 1]");
    }
    if (!is_probability(detector_efficiency)) {
        throw Error(ErrorCode::InvalidParams, "detector efficiency must lie in [0, 1]");
    }
    if (!std::isfinite(jitter_sigma) || jitter_sigma < 0) {
        throw Error(ErrorCode::InvalidParams, "jitter sigma must be finite and >= 0");
    }
}

bool LossResult::any_lost() const {
    for (bool b : lost_rails) {
        if (b) {
            return true;
        }
    }
    return false;
}

LossResult apply_rail_loss(const DualRailState &state, std::span<const double> survive, Rng &rng) {
    std::size_t rails = state.num_rails();
    if (survive.size() != rails) {
        throw Error(ErrorCode::DimensionMismatch, "need one survival probability per rail");
    }
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<bool> lost(rails, false);
    for (std::size_t r = 0; r < rails; r++) {
        double s = survive[r];
        if (s >= 1.0) {
            continue;
        }
        std::size_t bit = std::size_t{1} << (rails - 1 - r);
        double occupied = 0;
        double total = 0;
        for (std::size_t k = 0; k < amps.size(); k++) {
            double w = std::norm(amps[k]);
            total += w;
            if (k & bit) {
                occupied += w;
            }
        }
        if (occupied == 0) {
            continue;
        }
        double p_jump = (1.0 - s) * occupied / total;
        if (uniform01(rng) < p_jump) {
            // Annihilate: components holding a photon on r drop it, the rest vanish.
            std::vector<Complex> jumped(amps.size());
            for (std::size_t k = 0; k < amps.size(); k++) {
                if (k & bit) {
                    jumped[k ^ bit] = amps[k];
                }
            }
            amps = std::move(jumped);
            lost[r] = true;
        } else {
            double damp = std::sqrt(s);
            for (std::size_t k = 0; k < amps.size(); k++) {
                if (k & bit) {
                    amps[k] *= damp;
                }
            }
        }
        DualRailState renormalized = normalize(DualRailState(state.num_qubits(), amps));
        amps.assign(renormalized.amplitudes().begin(), renormalized.amplitudes().end());
    }
    return {DualRailState(state.num_qubits(), std::move(amps)), std::move(lost)};
}

LossResult apply_loss(const DualRailState &state, const LossModel &lm, Rng &rng) {
    std::vector<double> survive(state.num_rails());
    for (std::size_t q = 0; q < state.num_qubits(); q++) {
        survive[rail_index(q, false)] = lm.survive_h;
        survive[rail_index(q, true)] = lm.survive_v;
    }
    return apply_rail_loss(state, survive, rng);
}

Detection detect_post_select(const DualRailState &state, Rng &rng) {
    double total = state.norm_squared();
    if (total <= 0) {
        throw Error(ErrorCode::ZeroNorm, "cannot detect from a zero state");
    }
    double u = uniform01(rng) * total;
    std::size_t pattern = state.size();
    std::size_t last_supported = 0;
    double acc = 0;
    for (std::size_t k = 0; k < state.size(); k++) {
        double w = std::norm(state[k]);
        if (w == 0) {
            continue;
        }
        last_supported = k;
        acc += w;
        if (u < acc) {
            pattern = k;
            break;
        }
    }
    if (pattern == state.size()) {
        // u landed past the rounded cumulative sum.
        pattern = last_supported;
    }

    std::size_t n = state.num_qubits();
    std::size_t rails = state.num_rails();
    Detection out;
    out.outcomes.reserve(n);
    bool valid = true;
    std::size_t index = 0;
    for (std::size_t q = 0; q < n; q++) {
        unsigned h = rail_occupation(pattern, rail_index(q, false), rails);
        unsigned v = rail_occupation(pattern, rail_index(q, true), rails);
        index <<= 1;
        if (h + v != 1) {
            out.outcomes.push_back({QubitOutcome::Kind::Invalid, h + v});
            valid = false;
        } else if (h) {
            out.outcomes.push_back({QubitOutcome::Kind::H, 1});
        } else {
            out.outcomes.push_back({QubitOutcome::Kind::V, 1});
            index |= 1;
        }
    }
    if (valid) {
        out.collapsed = QubitRegister::basis(n, index);
        out.basis_index = index;
    }
    return out;
}

double survival_probability(double p_single, std::size_t n_qubits) {
    if (!is_probability(p_single)) {
        throw Error(ErrorCode::InvalidParams, "survival probability must lie in [0, 1]");
    }
    if (n_qubits == 0) {
        throw Error(ErrorCode::InvalidParams, "need at least one qubit");
    }
    return std::pow(p_single, static_cast<double>(n_qubits));
}

double sample_jitter(double sigma, Rng &rng) {
    if (sigma == 0) {
        return 0;
    }
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

QubitRegister jittered_qpg(const QubitRegister &reg, const KerrParams &p, double sigma, Rng &rng) {
    if (!(sigma >= 0)) {
        throw Error(ErrorCode::InvalidParams, "jitter sigma must be >= 0");
    }
    if (reg.num_qubits() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "the phase gate acts on two qubits");
    }
    double delta = sample_jitter(sigma, rng);
    QubitRegister out = apply_qpg(reg, p);
    if (delta == 0) {
        return out;
    }
    std::vector<Complex> amps(out.amplitudes().begin(), out.amplitudes().end());
    amps[3] *= std::exp(Complex(0, -delta));
    return QubitRegister(std::move(amps));
}

JitterFidelity jitter_fidelity(const KerrParams &p, double sigma, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw Error(ErrorCode::InvalidParams, "need at least one trial");
    }
    const PolarizationQubit plus = PolarizationQubit::plus();
    const QubitRegister input = tensor(plus, plus);
    const QubitRegister ideal = apply_qpg(input, p);
    double sum = 0;
    double sum_sq = 0;
    for (std::uint64_t k = 0; k < trials; k++) {
        Rng rng = trial_rng(seed, k);
        double f = fidelity(ideal, jittered_qpg(input, p, sigma, rng));
        sum += f;
        sum_sq += f * f;
    }
    double n = static_cast<double>(trials);
    double mean = sum / n;
    double var = trials > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {sigma, trials, mean, std::sqrt(var / n)};
}

double expected_jitter_fidelity(double sigma) {
    return (10.0 + 6.0 * std::exp(-0.5 * sigma * sigma)) / 16.0;
}

DualRailState apply_single_rails(const DualRailState &state, std::size_t qubit, const JonesElement &e) {
    std::size_t n = state.num_qubits();
    if (qubit >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "qubit index " + std::to_string(qubit) + " out of range");
    }
    std::size_t rails = state.num_rails();
    std::size_t h_bit = std::size_t{1} << (rails - 1 - rail_index(qubit, false));
    std::size_t v_bit = std::size_t{1} << (rails - 1 - rail_index(qubit, true));
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t k = 0; k < amps.size(); k++) {
        bool h = k & h_bit;
        bool v = k & v_bit;
        if (h && v) {
            if (amps[k] != Complex(0)) {
                throw Error(ErrorCode::InvalidOccupation, "polarization element on a doubly occupied qubit");
            }
            continue;
        }
        if (!h) {
            continue;  // vacuum on this qubit, or the V partner handled below
        }
        std::size_t kv = (k & ~h_bit) | v_bit;
        Complex a = amps[k];
        Complex b = amps[kv];
        amps[k] = e.u(0, 0) * a + e.u(0, 1) * b;
        amps[kv] = e.u(1, 0) * a + e.u(1, 1) * b;
    }
    return DualRailState(n, std::move(amps));
}

}  // namespace qpg
