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

// Photon loss, Kerr-phase jitter, detection with post-selection and the
// Monte Carlo harness.
//
// Loss is simulated as quantum-jump trajectories. For each rail in turn, a
// photon is lost with probability (1 - survive) * P(rail occupied); on a jump
// the rail is emptied, otherwise the occupied components are damped by
// sqrt(survive). Either way the state is renormalized. A qubit whose photon
// is lost can no longer be detected and the trial is rejected at
// post-selection.
//
// Loss is applied to every rail of every qubit after each QPG step, so all N
// photons traverse the same G passes and the per-photon survival is
// s^G * detector_efficiency.

#ifndef QPG_LOSS_H
#define QPG_LOSS_H

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qpg/kerr_gate.h"
#include "qpg/optics.h"
#include "qpg/state.h"

namespace qpg {

using Rng = std::mt19937_64;

struct LossModel {
    double survive_h = 1.0;
    double survive_v = 1.0;
    double jitter_sigma = 0.0;  // rad
    double detector_efficiency = 1.0;

    void validate() const;
    bool lossless() const {
        return survive_h == 1.0 && survive_v == 1.0 && detector_efficiency == 1.0;
    }
};

struct LossResult {
    DualRailState state;
    /// One flag per rail; true where a photon was removed on this pass.
    std::vector<bool> lost_rails;

    bool any_lost() const;
};

LossResult apply_loss(const DualRailState &state, const LossModel &lm, Rng &rng);

/// Same trajectory step with explicit per-rail survival probabilities.
LossResult apply_rail_loss(const DualRailState &state, std::span<const double> survive, Rng &rng);

struct QubitOutcome {
    enum class Kind { H, V, Invalid };
    Kind kind;
    /// Photons registered by the qubit's two detectors (0 or 2 when Invalid).
    unsigned photons;

    bool operator==(const QubitOutcome &) const = default;
};

struct Detection {
    std::vector<QubitOutcome> outcomes;
    /// Collapsed computational-basis register, present only when every qubit
    /// registered exactly one photon.
    std::optional<QubitRegister> collapsed;
    /// Basis index of `collapsed`.
    std::size_t basis_index = 0;

    bool accepted() const {
        return collapsed.has_value();
    }
};

Detection detect_post_select(const DualRailState &state, Rng &rng);

/// p_single^n_qubits: probability that all photons survive and are detected.
double survival_probability(double p_single, std::size_t n_qubits);

/// Zero-mean Gaussian offset of the conditional phase; 0 without touching
/// the stream when sigma == 0.
double sample_jitter(double sigma, Rng &rng);

QubitRegister jittered_qpg(const QubitRegister &reg, const KerrParams &p, double sigma, Rng &rng);

/// Jones element applied to one qubit's rails. Patterns where that qubit holds
/// no photon pass through; a doubly occupied qubit is InvalidOccupation.
DualRailState apply_single_rails(const DualRailState &state, std::size_t qubit, const JonesElement &e);

struct JitterFidelity {
    double sigma = 0;
    std::uint64_t trials = 0;
    double mean = 0;
    double std_error = 0;
};

/// Mean fidelity of jittered_qpg against the ideal gate on (|H>+|V>)(|H>+|V>)/2,
/// trial k drawing its offset from trial_rng(seed, k).
JitterFidelity jitter_fidelity(const KerrParams &p, double sigma, std::uint64_t trials, std::uint64_t seed);

/// Gaussian average of the same fidelity: (10 + 6 E[cos delta]) / 16 with
/// E[cos delta] = exp(-sigma^2 / 2).
double expected_jitter_fidelity(double sigma);

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    double acceptance_rate = 0;
    std::size_t num_qubits = 0;
    /// Indexed by computational-basis outcome; totals `accepted`.
    std::vector<std::uint64_t> histogram;
    std::uint64_t rng_seed = 0;

    bool operator==(const TrialStats &) const = default;
};

/// Stream for trial `trial` under root `seed`. Independent of scheduling.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

/// One trajectory: split, run the circuit with jitter and per-pass loss,
/// detector efficiency, detect.
Detection run_trajectory(const Circuit &c, const QubitRegister &input, const LossModel &lm, Rng &rng);

struct MonteCarloOptions {
    /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned threads = 1;
};

TrialStats monte_carlo(
    const Circuit &c,
    const QubitRegister &input,
    const LossModel &lm,
    std::uint64_t trials,
    std::uint64_t seed,
    MonteCarloOptions options = {});

}  // namespace qpg

#endif  // QPG_LOSS_H
