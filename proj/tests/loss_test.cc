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

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "qpg/error.h"
#include "test_util.h"

using namespace qpg;
using qpg::testing::max_abs_diff;
using qpg::testing::random_params;
using qpg::testing::random_register;
using qpg::testing::three_sigma;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

ErrorCode code_of(auto &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no qpg::Error thrown";
    return ErrorCode::InvariantFailure;
}

std::size_t pattern(unsigned h1, unsigned v1, unsigned h2, unsigned v2) {
    return (h1 << 3) | (v1 << 2) | (h2 << 1) | v2;
}

DualRailState single_pattern(std::size_t p) {
    std::vector<Complex> amps(16);
    amps[p] = 1.0;
    return DualRailState(2, amps);
}

/// Mean of |3/4 + e^{-i d}/4|^2 over d ~ N(0, sigma^2) by composite Simpson
/// on [-12 sigma, 12 sigma].
double jitter_fidelity_quadrature(double sigma) {
    if (sigma == 0) {
        return 1.0;
    }
    const int n = 20000;
    double lo = -12 * sigma;
    double h = 24 * sigma / n;
    double sum = 0;
    for (int k = 0; k <= n; k++) {
        double d = lo + k * h;
        std::complex<double> overlap = 0.75 + 0.25 * std::exp(std::complex<double>(0, -d));
        double f = std::norm(overlap) * std::exp(-d * d / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * kPi));
        sum += f * (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2));
    }
    return sum * h / 3;
}

/// N qubits in |+>, G phase-gate passes on neighbouring pairs.
Circuit chain(std::size_t n, std::size_t passes, const KerrParams &p) {
    Circuit c{n, {}};
    for (std::size_t g = 0; g < passes; g++) {
        c.steps.push_back(QpgStep{g % (n - 1), g % (n - 1) + 1, p, false});
    }
    return c;
}

QubitRegister plus_state(std::size_t n) {
    std::vector<PolarizationQubit> qs(n, PolarizationQubit::plus());
    return QubitRegister::product(qs);
}

}  // namespace

TEST(loss_model, validation) {
    LossModel lm;
    EXPECT_NO_THROW(lm.validate());
    EXPECT_TRUE(lm.lossless());
    lm.survive_h = 1.1;
    EXPECT_EQ(code_of([&] { lm.validate(); }), ErrorCode::InvalidParams);
    lm = {};
    lm.survive_v = -0.1;
    EXPECT_EQ(code_of([&] { lm.validate(); }), ErrorCode::InvalidParams);
    lm = {};
    lm.jitter_sigma = -1;
    EXPECT_EQ(code_of([&] { lm.validate(); }), ErrorCode::InvalidParams);
    lm = {};
    lm.detector_efficiency = 2;
    EXPECT_EQ(code_of([&] { lm.validate(); }), ErrorCode::InvalidParams);
}

TEST(apply_loss, lossless_is_identity) {
    Rng rng(1);
    auto dr = split_dual_rail(random_register(2));
    auto r = apply_loss(dr, LossModel{}, rng);
    EXPECT_EQ(r.state, dr);
    EXPECT_FALSE(r.any_lost());
}

TEST(apply_loss, certain_loss_moves_the_pattern) {
    Rng rng(2);
    LossModel lm{1.0, 0.0, 0.0, 1.0};
    auto r = apply_loss(single_pattern(pattern(0, 1, 1, 0)), lm, rng);
    EXPECT_EQ(r.state.support(), std::vector<std::size_t>{pattern(0, 0, 1, 0)});
    EXPECT_TRUE(r.lost_rails[1]);
    EXPECT_FALSE(r.lost_rails[0]);
    EXPECT_FALSE(r.lost_rails[2]);
}

TEST(apply_loss, binomial_survival) {
    const int trials = 100000;
    LossModel lm{1.0, 0.9, 0.0, 1.0};
    auto dr = single_pattern(pattern(0, 1, 1, 0));
    int survived = 0;
    for (int k = 0; k < trials; k++) {
        Rng rng = trial_rng(77, k);
        survived += apply_loss(dr, lm, rng).any_lost() ? 0 : 1;
    }
    EXPECT_NEAR(survived / double(trials), 0.9, three_sigma(0.9, trials));
}

TEST(apply_loss, keeps_unit_norm_and_collapses_superpositions) {
    LossModel lm{0.7, 0.4, 0.0, 1.0};
    for (int k = 0; k < 500; k++) {
        Rng rng = trial_rng(3, k);
        auto r = apply_loss(split_dual_rail(random_register(2)), lm, rng);
        EXPECT_NEAR(r.state.norm_squared(), 1.0, 1e-12);
        for (std::size_t rail = 0; rail < 4; rail++) {
            if (!r.lost_rails[rail]) {
                continue;
            }
            // After a jump on a rail the qubit it belongs to is empty in every
            // surviving component.
            for (auto p : r.state.support()) {
                EXPECT_EQ(qubit_photons(p, rail / 2, 2), 0u);
            }
        }
    }
}

TEST(apply_loss, no_jump_reweights_toward_the_surviving_rail) {
    // (|H> + |V>)/sqrt(2) on qubit 0 with only V lossy: conditioned on no
    // loss, the V weight becomes s / (1 + s).
    std::vector<Complex> amps(16);
    amps[pattern(1, 0, 1, 0)] = kR;
    amps[pattern(0, 1, 1, 0)] = kR;
    DualRailState dr(2, amps);
    LossModel lm{1.0, 0.5, 0.0, 1.0};
    for (int k = 0; k < 200; k++) {
        Rng rng = trial_rng(4, k);
        auto r = apply_loss(dr, lm, rng);
        if (!r.any_lost()) {
            EXPECT_NEAR(std::norm(r.state[pattern(0, 1, 1, 0)]), 0.5 / 1.5, 1e-12);
            return;
        }
    }
    FAIL() << "never sampled a no-loss trajectory";
}

TEST(apply_rail_loss, checks_rail_count) {
    Rng rng(0);
    std::vector<double> s(3, 1.0);
    EXPECT_EQ(code_of([&] { apply_rail_loss(DualRailState::vacuum(2), s, rng); }), ErrorCode::DimensionMismatch);
}

TEST(detect_post_select, deterministic_vv) {
    Rng rng(5);
    auto d = detect_post_select(split_dual_rail(QubitRegister::basis(2, 3)), rng);
    ASSERT_TRUE(d.accepted());
    EXPECT_EQ(d.outcomes[0].kind, QubitOutcome::Kind::V);
    EXPECT_EQ(d.outcomes[1].kind, QubitOutcome::Kind::V);
    EXPECT_EQ(*d.collapsed, QubitRegister::basis(2, 3));
    EXPECT_EQ(d.basis_index, 3u);
}

TEST(detect_post_select, invalid_outcomes) {
    Rng rng(6);
    auto vacuum = detect_post_select(DualRailState::vacuum(2), rng);
    EXPECT_EQ(vacuum.outcomes[0], (QubitOutcome{QubitOutcome::Kind::Invalid, 0}));
    EXPECT_EQ(vacuum.outcomes[1], (QubitOutcome{QubitOutcome::Kind::Invalid, 0}));

    auto empty = detect_post_select(single_pattern(pattern(0, 0, 1, 0)), rng);
    EXPECT_FALSE(empty.accepted());
    EXPECT_EQ(empty.outcomes[0], (QubitOutcome{QubitOutcome::Kind::Invalid, 0}));
    EXPECT_EQ(empty.outcomes[1].kind, QubitOutcome::Kind::H);

    auto doubled = detect_post_select(single_pattern(pattern(1, 0, 1, 1)), rng);
    EXPECT_FALSE(doubled.accepted());
    EXPECT_EQ(doubled.outcomes[1], (QubitOutcome{QubitOutcome::Kind::Invalid, 2}));

    EXPECT_EQ(code_of([&] { detect_post_select(DualRailState(2, std::vector<Complex>(16)), rng); }), ErrorCode::ZeroNorm);
}

TEST(detect_post_select, born_rule_frequencies) {
    const int trials = 100000;
    auto dr = split_dual_rail(QubitRegister({kR, 0.0, 0.0, kR}));
    int hh = 0;
    int vv = 0;
    for (int k = 0; k < trials; k++) {
        Rng rng = trial_rng(8, k);
        auto d = detect_post_select(dr, rng);
        ASSERT_TRUE(d.accepted());
        hh += d.basis_index == 0;
        vv += d.basis_index == 3;
    }
    EXPECT_EQ(hh + vv, trials);
    EXPECT_NEAR(hh / double(trials), 0.5, three_sigma(0.5, trials));
    EXPECT_NEAR(vv / double(trials), 0.5, three_sigma(0.5, trials));
}

TEST(survival_probability, examples) {
    for (std::size_t n : {1u, 2u, 7u, 40u}) {
        EXPECT_EQ(survival_probability(1.0, n), 1.0);
    }
    EXPECT_NEAR(survival_probability(0.9, 10), 0.3486784401, 1e-15);
    EXPECT_EQ(code_of([] { survival_probability(1.5, 2); }), ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([] { survival_probability(0.5, 0); }), ErrorCode::InvalidParams);
}

TEST(jittered_qpg, zero_sigma_is_exact) {
    Rng rng(10);
    for (int k = 0; k < 100; k++) {
        KerrParams p = random_params();
        auto reg = random_register(2);
        Rng before = rng;
        EXPECT_EQ(jittered_qpg(reg, p, 0.0, rng), apply_qpg(reg, p));
        EXPECT_EQ(before, rng);
    }
}

TEST(jittered_qpg, conditional_phase_statistics) {
    const int trials = 100000;
    const double sigma = 0.2;
    std::mt19937_64 rng(44);
    KerrParams p = random_params(rng);
    auto input = QubitRegister({0.5, 0.5, 0.5, 0.5});
    auto ideal = apply_qpg(input, p);
    double sum = 0;
    double sum_sq = 0;
    for (int k = 0; k < trials; k++) {
        Rng rng = trial_rng(12, k);
        auto out = jittered_qpg(input, p, sigma, rng);
        EXPECT_NEAR(std::abs(out[0] - ideal[0]) + std::abs(out[1] - ideal[1]) + std::abs(out[2] - ideal[2]), 0,
                    1e-15);
        double d = -std::arg(out[3] / ideal[3]);
        sum += d;
        sum_sq += d * d;
    }
    double mean = sum / trials;
    double var = sum_sq / trials - mean * mean;
    EXPECT_NEAR(mean, 0.0, 3 * sigma / std::sqrt(double(trials)));
    EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
}

TEST(jitter_fidelity, quadrature_oracle_and_golden_values) {
    // Gaussian average of 5/8 + 3/8 cos(d), evaluated at 30 digits.
    EXPECT_NEAR(jitter_fidelity_quadrature(0.1), 0.998129679697255867507211592337, 1e-13);
    EXPECT_NEAR(jitter_fidelity_quadrature(0.5), 0.955936338469223276074334553711, 1e-13);
    EXPECT_NEAR(expected_jitter_fidelity(0.1), 0.998129679697255867507211592337, 1e-15);
    EXPECT_NEAR(expected_jitter_fidelity(0.5), 0.955936338469223276074334553711, 1e-15);
    EXPECT_EQ(expected_jitter_fidelity(0.0), 1.0);
}

TEST(jitter_fidelity, monte_carlo_matches_golden) {
    std::mt19937_64 rng(43);
    KerrParams p = random_params(rng);
    auto at_zero = jitter_fidelity(p, 0.0, 1000, 1);
    EXPECT_EQ(at_zero.mean, 1.0);
    double previous = 1.0;
    for (double sigma : {0.1, 0.3, 0.5}) {
        auto jf = jitter_fidelity(p, sigma, 100000, 99);
        EXPECT_NEAR(jf.mean, jitter_fidelity_quadrature(sigma), 3 * jf.std_error);
        EXPECT_LT(jf.mean, previous);
        previous = jf.mean;
    }
}

TEST(apply_single_rails, matches_register_path) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 200; k++) {
        auto reg = random_register(3, rng);
        auto e = faraday_rotator(qpg::testing::uniform(-3, 3, rng)).u * hadamard_plate().u;
        JonesElement el{e, ElementKind::Adjoint, 0};
        std::size_t q = rng() % 3;
        auto via_rails = recombine_dual_rail(apply_single_rails(split_dual_rail(reg), q, el));
        EXPECT_LT(max_abs_diff(via_rails.amplitudes(), apply_single(reg, q, el).amplitudes()), 1e-12);
    }
    EXPECT_EQ(code_of([] { apply_single_rails(single_pattern(pattern(1, 1, 1, 0)), 0, hadamard_plate()); }),
              ErrorCode::InvalidOccupation);
    EXPECT_EQ(code_of([] { apply_single_rails(single_pattern(pattern(1, 0, 1, 0)), 2, hadamard_plate()); }),
              ErrorCode::IndexOutOfRange);
}

TEST(monte_carlo, lossless_matches_born_distribution) {
    const std::uint64_t trials = 100000;
    std::mt19937_64 rng(41);
    KerrParams p = random_params(rng);
    Circuit c{3,
              {SingleStep{hadamard_plate(), 0}, QpgStep{0, 2, p, false},
               SingleStep{waveplate(WaveplateKind::Quarter, 0.3), 2}, QpgStep{1, 2, random_params(rng), false},
               SingleStep{hadamard_plate(), 1}}};
    auto input = random_register(3, rng);
    auto ideal = run_circuit(input, c);
    auto stats = monte_carlo(c, input, LossModel{}, trials, 2024);
    EXPECT_EQ(stats.accepted, trials);
    EXPECT_EQ(stats.acceptance_rate, 1.0);
    EXPECT_EQ(std::accumulate(stats.histogram.begin(), stats.histogram.end(), std::uint64_t{0}), stats.accepted);
    for (std::size_t k = 0; k < ideal.size(); k++) {
        double born = std::norm(ideal[k]);
        EXPECT_NEAR(stats.histogram[k] / double(trials), born, three_sigma(born, trials) + 1e-12) << k;
    }
}

TEST(monte_carlo, survival_law) {
    const std::uint64_t trials = 100000;
    std::mt19937_64 rng(42);
    KerrParams p = random_params(rng);
    std::uint64_t seed = 500;
    for (double s : {1.0, 0.99, 0.9}) {
        for (std::size_t g : {1u, 3u}) {
            auto stats = monte_carlo(chain(2, g, p), plus_state(2), LossModel{s, s, 0.0, 1.0}, trials, seed++);
            double want = survival_probability(std::pow(s, double(g)), 2);
            EXPECT_NEAR(stats.acceptance_rate, want, three_sigma(want, trials)) << s << " " << g;
        }
    }
}

TEST(monte_carlo, detector_efficiency_is_one_more_factor) {
    const std::uint64_t trials = 100000;
    std::mt19937_64 rng(45);
    auto stats = monte_carlo(chain(3, 2, random_params(rng)), plus_state(3), LossModel{0.95, 0.95, 0.0, 0.9}, trials, 6);
    double want = survival_probability(0.95 * 0.95 * 0.9, 3);
    EXPECT_NEAR(stats.acceptance_rate, want, three_sigma(want, trials));
}

TEST(monte_carlo, polarization_dependent_loss_biases_toward_h) {
    const std::uint64_t trials = 100000;
    const double sv = 0.6;
    const std::size_t g = 2;
    PolarizationQubit q1 = normalize(PolarizationQubit{0.8, Complex(0.0, 0.6)});
    PolarizationQubit q2 = PolarizationQubit::plus();
    auto input = tensor(q1, q2);
    std::mt19937_64 rng(46);
    auto stats = monte_carlo(chain(2, g, random_params(rng)), input, LossModel{1.0, sv, 0.0, 1.0}, trials, 31);

    double w = std::pow(sv, double(g));
    double z1 = std::norm(q1.a) + std::norm(q1.b) * w;
    double z2 = std::norm(q2.a) + std::norm(q2.b) * w;
    EXPECT_NEAR(stats.acceptance_rate, z1 * z2, three_sigma(z1 * z2, trials));
    double accepted = static_cast<double>(stats.accepted);
    double want_hh = std::norm(q1.a) * std::norm(q2.a) / (z1 * z2);
    EXPECT_NEAR(stats.histogram[0] / accepted, want_hh, three_sigma(want_hh, accepted));
    // Born probability without the bias would be 0.32.
    EXPECT_GT(want_hh, std::norm(q1.a) * std::norm(q2.a) + 10 * three_sigma(want_hh, accepted));
}

TEST(monte_carlo, deterministic_and_thread_independent) {
    KerrParams p = random_params();
    LossModel lm{0.93, 0.88, 0.1, 0.97};
    Circuit c = chain(3, 4, p);
    c.steps.insert(c.steps.begin() + 1, SingleStep{hadamard_plate(), 2});
    auto input = plus_state(3);
    auto a = monte_carlo(c, input, lm, 20000, 42);
    auto b = monte_carlo(c, input, lm, 20000, 42);
    auto threaded = monte_carlo(c, input, lm, 20000, 42, {4});
    auto all = monte_carlo(c, input, lm, 20000, 42, {0});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, threaded);
    EXPECT_EQ(a, all);
    EXPECT_EQ(a.rng_seed, 42u);
    auto other = monte_carlo(c, input, lm, 20000, 43);
    EXPECT_NE(a.histogram, other.histogram);
}

TEST(monte_carlo, adjoint_steps_undo_jitter_free_gates) {
    KerrParams p = random_params();
    Circuit c{2, {SingleStep{hadamard_plate(), 0}, QpgStep{0, 1, p, false}, SingleStep{hadamard_plate(), 1}}};
    Circuit round{2, c.steps};
    for (const auto &s : inverse(c).steps) {
        round.steps.push_back(s);
    }
    auto stats = monte_carlo(round, QubitRegister::basis(2, 1), LossModel{}, 1000, 3);
    EXPECT_EQ(stats.histogram[1], 1000u);
}

TEST(monte_carlo, input_checks) {
    Circuit c{2, {}};
    EXPECT_EQ(code_of([&] { monte_carlo(c, QubitRegister::basis(2, 0), LossModel{}, 0, 1); }), ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([&] { monte_carlo(c, QubitRegister::basis(3, 0), LossModel{}, 1, 1); }),
              ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([&] { monte_carlo(c, QubitRegister({1.0, 1.0, 0.0, 0.0}), LossModel{}, 1, 1); }),
              ErrorCode::NotNormalized);
}
