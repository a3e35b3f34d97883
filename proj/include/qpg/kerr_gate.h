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

// Cross-Kerr quantum phase gate.
//
// Two photons of angular frequencies omega1 and omega2 are split at
// polarizing beam splitters; the V rails cross a Kerr medium and the H rails
// bypass it with zero phase. The V rail of mode j picks up
//
//     phi_j(n_other) = omega_j * t * (eps_ratio + chi_eff * omega_other * n_other)
//
// and amplitudes are multiplied by exp(-i phi). With both V rails occupied the
// two mode operators contribute one omega1*omega2*chi_eff*t each, so the
// conditional phase of the assembled gate is 2*omega1*omega2*chi_eff*t.
//
// chi_eff is stored in the units that make omega1*omega2*chi_eff*t
// dimensionless. chi_eff_from_medium() is the only SI conversion.

#ifndef QPG_KERR_GATE_H
#define QPG_KERR_GATE_H

#include <array>
#include <optional>

#include "qpg/state.h"

namespace qpg {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;
inline constexpr double kUniversalityTol = 1e-9;
inline constexpr int kOracleMaxPhotons = 3;

/// CODATA 2018.
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kEpsilon0 = 8.8541878128e-12;

struct KerrParams {
    double omega1 = 1.0;
    double omega2 = 2.0;
    double t = 0.0;
    double eps_ratio = 1.0;
    double chi_eff = 0.0;

    /// Throws InvalidParams on omega <= 0, omega1 == omega2, t < 0,
    /// eps_ratio < 1 or any non-finite field.
    void validate() const;

    /// omega1 * omega2 * chi_eff * t, contributed once by each mode.
    double cross_phase() const {
        return omega1 * omega2 * chi_eff * t;
    }
    /// Excess phase of |VV> over the product of the single-rail phases.
    double conditional_phase() const {
        return 2.0 * cross_phase();
    }
};

struct MediumSpec {
    double chi3 = 0.0;    // m^2 / V^2
    double volume = 1.0;  // m^3
};

struct GatePhases {
    double alpha = 0;  // |HV>
    double beta = 0;   // |VH>
    double gamma = 0;  // |VV>
};

using DiagonalGate = std::array<Complex, 4>;

/// Phase reduced to [0, 2pi).
double reduce_phase(double phase);
/// Shortest distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

/// 3 hbar^2 chi3 / (16 v eps0).
double chi_eff_from_medium(const MediumSpec &medium);

/// Phase accumulated by the one-photon V rail of `mode` (1 or 2) when the
/// other mode's V rail holds `n_other` photons.
double mode_phase(const KerrParams &p, int mode, int n_other);

/// diag(1, e^{-i phi2}, e^{-i phi1}, e^{-i(phi1 + phi2 + 2 omega1 omega2 chi t)})
/// over (HH, HV, VH, VV), phi_j = omega_j t eps_ratio. HV has qubit 2 in V, so
/// it carries mode 2's phase.
DiagonalGate gate_matrix(const KerrParams &p);

/// Gate applied by elementwise multiplication with gate_matrix().
QubitRegister apply_qpg(const QubitRegister &reg, const KerrParams &p);

/// Gate applied on qubits (q1, q2) of an n-qubit register, q1 playing mode 1.
QubitRegister apply_qpg(const QubitRegister &reg, const KerrParams &p, std::size_t q1, std::size_t q2);

/// Physical path: split at the beam splitters, phase the V rails through the
/// medium with per-pattern photon numbers, recombine. Extra phase `jitter`
/// is added to the |VV> conditional phase.
DualRailState apply_kerr_rails(
    const DualRailState &state, const KerrParams &p, std::size_t q1, std::size_t q2, double jitter = 0.0);
QubitRegister apply_qpg_dual_rail(const QubitRegister &reg, const KerrParams &p);

/// Phases (alpha, beta, gamma) with diag(1, e^{i alpha}, e^{i beta}, e^{i gamma})
/// equal to gate_matrix(p), each reduced to [0, 2pi).
GatePhases gate_phases(const KerrParams &p);

/// True iff (alpha + beta) mod 2pi and gamma are more than tol apart on the circle.
bool is_universal(const GatePhases &g, double tol = kUniversalityTol);

struct InteractionSolution {
    double t;
    double phi1;  // omega1 t eps_ratio, reduced
    double phi2;
};

/// Smallest t > 0 with 2 omega1 omega2 chi t == target (mod 2pi). The t field
/// of `p` is ignored.
InteractionSolution solve_interaction_time(const KerrParams &p, double target_conditional);

/// Phase E(n1, n2) t / hbar of the two-mode number state under the diagonal
/// effective Hamiltonian, evaluated from explicitly built truncated ladder
/// operators. When `medium` is given the coupling is chi_eff_from_medium(*medium)
/// instead of p.chi_eff. Photon numbers above kOracleMaxPhotons are OutOfRange.
double fock_oracle_evolve(int n1, int n2, const KerrParams &p, const std::optional<MediumSpec> &medium = std::nullopt);

struct OracleDeviation {
    double mode1 = 0;  // max relative error of phase(n1, n2) - phase(n1 - 1, n2) vs mode_phase(p, 1, n2)
    double mode2 = 0;  // same for mode 2
    double cross = 0;  // max relative error of the mixed second difference vs omega1 omega2 chi t
};

/// Compares the oracle against the closed-form phases over every photon
/// pair up to kOracleMaxPhotons. Errors are relative to the largest
/// magnitude among the oracle phases entering each difference.
OracleDeviation oracle_deviation(const KerrParams &p);

}  // namespace qpg

#endif  // QPG_KERR_GATE_H
