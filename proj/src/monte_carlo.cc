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

#include <algorithm>
#include <exception>
#include <thread>

#include "overloaded.h"
#include "qpg/error.h"
#include "qpg/loss.h"

namespace qpg {

using detail::overloaded;

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(trial),
        static_cast<std::uint32_t>(trial >> 32),
    };
    return Rng(seq);
}

Detection run_trajectory(const Circuit &c, const QubitRegister &input, const LossModel &lm, Rng &rng) {
    DualRailState state = split_dual_rail(input);
    for (const auto &step : c.steps) {
        std::visit(
            overloaded{
                [&](const SingleStep &s) { state = apply_single_rails(state, s.target, s.element); },
                [&](const QpgStep &s) {
                    KerrParams p = s.params;
                    double jitter = sample_jitter(lm.jitter_sigma, rng);
                    if (s.adjoint) {
                        // Every phase is linear in t.
                        p.t = -p.t;
                        jitter = -jitter;
                    }
                    state = apply_kerr_rails(state, p, s.q1, s.q2, jitter);
                    state = apply_loss(state, lm, rng).state;
                },
            },
            step);
    }
    if (lm.detector_efficiency < 1.0) {
        std::vector<double> eta(state.num_rails(), lm.detector_efficiency);
        state = apply_rail_loss(state, eta, rng).state;
    }
    return detect_post_select(state, rng);
}

TrialStats monte_carlo(
    const Circuit &c,
    const QubitRegister &input,
    const LossModel &lm,
    std::uint64_t trials,
    std::uint64_t seed,
    MonteCarloOptions options) {
    if (trials == 0) {
        throw Error(ErrorCode::InvalidParams, "need at least one trial");
    }
    if (input.num_qubits() != c.num_qubits) {
        throw Error(ErrorCode::DimensionMismatch, "input register does not match the circuit");
    }
    if (!input.is_normalized()) {
        throw Error(ErrorCode::NotNormalized, "input register must have unit norm");
    }
    c.validate();
    lm.validate();

    std::size_t dim = std::size_t{1} << c.num_qubits;
    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

    struct Partial {
        std::uint64_t accepted = 0;
        std::vector<std::uint64_t> histogram;
    };
    std::vector<Partial> partials(threads, Partial{0, std::vector<std::uint64_t>(dim, 0)});

    auto run_chunk = [&](unsigned worker) {
        std::uint64_t begin = trials * worker / threads;
        std::uint64_t end = trials * (worker + 1) / threads;
        Partial &mine = partials[worker];
        for (std::uint64_t k = begin; k < end; k++) {
            Rng rng = trial_rng(seed, k);
            Detection d = run_trajectory(c, input, lm, rng);
            if (d.accepted()) {
                mine.accepted++;
                mine.histogram[d.basis_index]++;
            }
        }
    };

    if (threads == 1) {
        run_chunk(0);
    } else {
        std::vector<std::exception_ptr> failures(threads);
        {
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned w = 0; w < threads; w++) {
                pool.emplace_back([&, w] {
                    try {
                        run_chunk(w);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto &f : failures) {
            if (f) {
                std::rethrow_exception(f);
            }
        }
    }

    TrialStats stats;
    stats.trials = trials;
    stats.num_qubits = c.num_qubits;
    stats.rng_seed = seed;
    stats.histogram.assign(dim, 0);
    for (const auto &p : partials) {
        stats.accepted += p.accepted;
        for (std::size_t k = 0; k < dim; k++) {
            stats.histogram[k] += p.histogram[k];
        }
    }
    stats.acceptance_rate = static_cast<double>(stats.accepted) / static_cast<double>(trials);
    return stats;
}

}  // namespace qpg
