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

#include "qpg/kerr_gate.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpg/error.h"

namespace qpg {

void KerrParams::validate() const {
    for (double v : {omega1, omega2, t, eps_ratio, chi_eff}) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidParams, "Kerr parameters must be finite");
        }
    }
    if (omega1 <= 0 || omega2 <= 0) {
        throw Error(ErrorCode::InvalidParams, "angular frequencies must be positive");
    }
    if (omega1 == omega2) {
        throw Error(ErrorCode::InvalidParams, "qubits are told apart only by frequency; omega1 must differ from omega2");
    }
    if (t < 0) {
        throw Error(ErrorCode::InvalidParams, "interaction time must be non-negative");
    }
    if (eps_ratio < 1) {
        throw Error(ErrorCode::InvalidParams, "eps_ratio must be >= 1");
    }
}

double reduce_phase(double phase) {
    double r = std::fmod(phase, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2pi.
    if (r >= kTwoPi) {
        r = 0;
    }
    return r + 0.0;  // -0 -> +0
}

double circular_distance(double a, double b) {
    double d = reduce_phase(a - b);
    return std::min(d, kTwoPi - d);
}

double chi_eff_from_medium(const MediumSpec &medium) {
    if (!(medium.volume > 0)) {
        throw Error(ErrorCode::NonPositiveVolume, "normalization volume must be positive");
    }
    return 3.0 * kHbar * kHbar * medium.chi3 / (16.0 * medium.volume * kEpsilon0);
}

double mode_phase(const KerrParams &p, int mode, int n_other) {
    if (n_other < 0) {
        throw Error(ErrorCode::OutOfRange, "photon count must be non-negative");
    }
    if (mode != 1 && mode != 2) {
        throw Error(ErrorCode::OutOfRange, "mode must be 1 or 2");
    }
    double omega_self = mode == 1 ? p.omega1 : p.omega2;
    double omega_other = mode == 1 ? p.omega2 : p.omega1;
    return omega_self * p.t * (p.eps_ratio + p.chi_eff * omega_other * n_other);
}

DiagonalGate gate_matrix(const KerrParams &p) {
    const Complex i(0, 1);
    double phi1 = mode_phase(p, 1, 0);
    double phi2 = mode_phase(p, 2, 0);
    double both = mode_phase(p, 1, 1) + mode_phase(p, 2, 1);
    return {1.0, std::exp(-i * phi2), std::exp(-i * phi1), std::exp(-i * both)};
}

QubitRegister apply_qpg(const QubitRegister &reg, const KerrParams &p) {
    if (reg.num_qubits() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "the phase gate acts on two qubits");
    }
    auto g = gate_matrix(p);
    return QubitRegister({reg[0] * g[0], reg[1] * g[1], reg[2] * g[2], reg[3] * g[3]});
}

QubitRegister apply_qpg(const QubitRegister &reg, const KerrParams &p, std::size_t q1, std::size_t q2) {
    std::size_t n = reg.num_qubits();
    if (q1 >= n || q2 >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "gate qubit index out of range");
    }
    if (q1 == q2) {
        throw Error(ErrorCode::IndexOutOfRange, "gate qubits must be distinct");
    }
    auto g = gate_matrix(p);
    std::vector<Complex> out(reg.amplitudes().begin(), reg.amplitudes().end());
    for (std::size_t k = 0; k < out.size(); k++) {
        std::size_t b1 = (k >> (n - 1 - q1)) & 1;
        std::size_t b2 = (k >> (n - 1 - q2)) & 1;
        out[k] *= g[(b1 << 1) | b2];
    }
    return QubitRegister(std::move(out));
}

DualRailState apply_kerr_rails(
    const DualRailState &state, const KerrParams &p, std::size_t q1, std::size_t q2, double jitter) {
    std::size_t n = state.num_qubits();
    if (q1 >= n || q2 >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "gate qubit index out of range");
    }
    if (q1 == q2) {
        throw Error(ErrorCode::IndexOutOfRange, "gate qubits must be distinct");
    }
    const Complex i(0, 1);
    std::size_t rails = state.num_rails();
    std::size_t v1 = rail_index(q1, true);
    std::size_t v2 = rail_index(q2, true);
    std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t pattern = 0; pattern < out.size(); pattern++) {
        if (out[pattern] == Complex(0)) {
            continue;
        }
        int n1 = static_cast<int>(rail_occupation(pattern, v1, rails));
        int n2 = static_cast<int>(rail_occupation(pattern, v2, rails));
        // H rails bypass the medium with zero phase.
        double phase = 0;
        if (n1) {
            phase += mode_phase(p, 1, n2);
        }
        if (n2) {
            phase += mode_phase(p, 2, n1);
        }
        if (n1 && n2) {
            phase += jitter;
        }
        out[pattern] *= std::exp(-i * phase);
    }
    return DualRailState(n, std::move(out));
}

QubitRegister apply_qpg_dual_rail(const QubitRegister &reg, const KerrParams &p) {
    if (reg.num_qubits() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "the phase gate acts on two qubits");
    }
    return recombine_dual_rail(apply_kerr_rails(split_dual_rail(reg), p, 0, 1));
}

GatePhases gate_phases(const KerrParams &p) {
    double phi1 = mode_phase(p, 1, 0);
    double phi2 = mode_phase(p, 2, 0);
    double both = mode_phase(p, 1, 1) + mode_phase(p, 2, 1);
    return {reduce_phase(-phi2), reduce_phase(-phi1), reduce_phase(-both)};
}

bool is_universal(const GatePhases &g, double tol) {
    return circular_distance(g.alpha + g.beta, g.gamma) > tol;
}

InteractionSolution solve_interaction_time(const KerrParams &p, double target_conditional) {
    if (!(target_conditional > 0 && target_conditional < kTwoPi)) {
        throw Error(ErrorCode::OutOfRange, "target conditional phase must lie in (0, 2pi)");
    }
    double rate = 2.0 * p.omega1 * p.omega2 * p.chi_eff;
    if (rate == 0 || !std::isfinite(rate)) {
        throw Error(ErrorCode::ZeroCoupling, "no interaction time exists without cross-Kerr coupling");
    }
    // rate * t must land on target (rate > 0) or target - 2pi (rate < 0).
    double t = rate > 0 ? target_conditional / rate : (target_conditional - kTwoPi) / rate;
    KerrParams at = p;
    at.t = t;
    return {t, reduce_phase(mode_phase(at, 1, 0)), reduce_phase(mode_phase(at, 2, 0))};
}

}  // namespace qpg
