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

// Polarization optics (Jones calculus) and circuits of optical elements plus
// Kerr phase gates.
//
// Retarders use the symmetric phase convention: a plate of retardance delta
// with its fast axis at angle theta is
//
//     R(theta) diag(e^{-i delta/2}, e^{+i delta/2}) R(-theta),
//
// R being the real rotation [[cos, -sin], [sin, cos]]. With this convention a
// half-wave plate at 0 is -i diag(1, -1), a quarter-wave plate at 0 is
// e^{-i pi/4} diag(1, i), and a half-wave plate at pi/8 is -i times the
// Hadamard matrix.

#ifndef QPG_OPTICS_H
#define QPG_OPTICS_H

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "qpg/kerr_gate.h"
#include "qpg/state.h"

namespace qpg {

/// Row-major 2x2 complex matrix acting on (H, V) amplitudes.
struct Matrix2 {
    std::array<Complex, 4> m{};

    static Matrix2 identity() {
        return {{1.0, 0.0, 0.0, 1.0}};
    }
    Complex operator()(int r, int c) const {
        return m[2 * r + c];
    }
    Matrix2 operator*(const Matrix2 &rhs) const;
    Matrix2 adjoint() const;
    /// max |(U^dagger U - I)_rc|.
    double unitarity_error() const;
};

enum class ElementKind { HalfWave, QuarterWave, FaradayRotator, PhasePlate, Adjoint };

struct JonesElement {
    Matrix2 u;
    ElementKind kind;
    double angle;  // fast-axis angle, rotation angle or phase, by kind

    std::string label() const;
};

enum class WaveplateKind { Half, Quarter };

JonesElement waveplate(WaveplateKind kind, double fast_axis_angle);
JonesElement faraday_rotator(double theta);
/// diag(1, e^{i phi}): the single-bit phase shift.
JonesElement phase_plate(double phi);
/// Half-wave plate at pi/8; equals -i H.
JonesElement hadamard_plate();
JonesElement adjoint(const JonesElement &e);

QubitRegister apply_single(const QubitRegister &reg, std::size_t idx, const JonesElement &e);

struct SingleStep {
    JonesElement element;
    std::size_t target;
};

struct QpgStep {
    std::size_t q1;
    std::size_t q2;
    KerrParams params;
    /// Applies the conjugate gate; produced by inverse().
    bool adjoint = false;
};

using Step = std::variant<SingleStep, QpgStep>;

struct Circuit {
    std::size_t num_qubits = 2;
    std::vector<Step> steps;

    /// IndexOutOfRange on bad targets or a QPG acting twice on one qubit.
    void validate() const;
    std::size_t qpg_count() const;
};

QubitRegister apply_step(const QubitRegister &reg, const Step &step);
QubitRegister run_circuit(const QubitRegister &reg, const Circuit &c);

/// Reversed steps, each replaced by its adjoint.
Circuit inverse(const Circuit &c);

/// Full 2^n x 2^n matrix of the circuit, returned as columns:
/// result[k] is the circuit applied to basis state k.
std::vector<QubitRegister> circuit_columns(const Circuit &c);

/// Canonical CNOT with qubit 0 as control, as columns.
std::vector<QubitRegister> cnot_columns();

/// Max componentwise deviation between two matrices (given as columns) after
/// multiplying `actual` by the global phase that best aligns it with `expected`.
double aligned_deviation(const std::vector<QubitRegister> &actual, const std::vector<QubitRegister> &expected);

/// CNOT (control qubit 0, target qubit 1) from one Kerr phase gate:
///
///     H_2 . corrections . QPG(p) . H_2
///
/// where the phase-plate corrections on each qubit cancel the local phases
/// alpha, beta of gate_phases(p). Requires gamma - alpha - beta == pi within
/// kUniversalityTol, otherwise NotCZ.
Circuit build_cnot(const KerrParams &p);

}  // namespace qpg

#endif  // QPG_OPTICS_H
