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

#include "qpg/optics.h"

#include <algorithm>
#include <cmath>

#include "overloaded.h"
#include "qpg/error.h"

namespace qpg {

namespace {

Matrix2 rotation(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    return {{c, -s, s, c}};
}

Matrix2 retarder(double delta) {
    const Complex i(0, 1);
    return {{std::exp(-i * delta / 2.0), 0.0, 0.0, std::exp(i * delta / 2.0)}};
}

}  // namespace

using detail::overloaded;

Matrix2 Matrix2::operator*(const Matrix2 &rhs) const {
    Matrix2 out;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            out.m[2 * r + c] = (*this)(r, 0) * rhs(0, c) + (*this)(r, 1) * rhs(1, c);
        }
    }
    return out;
}

Matrix2 Matrix2::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

double Matrix2::unitarity_error() const {
    Matrix2 p = adjoint() * (*this);
    Matrix2 id = identity();
    double worst = 0;
    for (int k = 0; k < 4; k++) {
        worst = std::max(worst, std::abs(p.m[k] - id.m[k]));
    }
    return worst;
}

std::string JonesElement::label() const {
    std::string name;
    switch (kind) {
        case ElementKind::HalfWave:
            name = "half_wave";
            break;
        case ElementKind::QuarterWave:
            name = "quarter_wave";
            break;
        case ElementKind::FaradayRotator:
            name = "faraday";
            break;
        case ElementKind::PhasePlate:
            name = "phase_plate";
            break;
        case ElementKind::Adjoint:
            name = "adjoint";
            break;
    }
    return name + "(" + std::to_string(angle) + ")";
}

JonesElement waveplate(WaveplateKind kind, double fast_axis_angle) {
    double delta = kind == WaveplateKind::Half ? kPi : kPi / 2.0;
    Matrix2 u = rotation(fast_axis_angle) * retarder(delta) * rotation(-fast_axis_angle);
    return {u, kind == WaveplateKind::Half ? ElementKind::HalfWave : ElementKind::QuarterWave, fast_axis_angle};
}

JonesElement faraday_rotator(double theta) {
    return {rotation(theta), ElementKind::FaradayRotator, theta};
}

JonesElement phase_plate(double phi) {
    const Complex i(0, 1);
    return {{{1.0, 0.0, 0.0, std::exp(i * phi)}}, ElementKind::PhasePlate, phi};
}

JonesElement hadamard_plate() {
    return waveplate(WaveplateKind::Half, kPi / 8.0);
}

JonesElement adjoint(const JonesElement &e) {
    switch (e.kind) {
        case ElementKind::FaradayRotator:
            return faraday_rotator(-e.angle);
        case ElementKind::PhasePlate:
            return phase_plate(-e.angle);
        default:
            break;
    }
    return {e.u.adjoint(), ElementKind::Adjoint, e.angle};
}

QubitRegister apply_single(const QubitRegister &reg, std::size_t idx, const JonesElement &e) {
    std::size_t n = reg.num_qubits();
    if (idx >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "qubit index " + std::to_string(idx) + " out of range");
    }
    std::size_t bit = std::size_t{1} << (n - 1 - idx);
    std::vector<Complex> out(reg.amplitudes().begin(), reg.amplitudes().end());
    for (std::size_t k = 0; k < out.size(); k++) {
        if (k & bit) {
            continue;
        }
        Complex h = out[k];
        Complex v = out[k | bit];
        out[k] = e.u(0, 0) * h + e.u(0, 1) * v;
        out[k | bit] = e.u(1, 0) * h + e.u(1, 1) * v;
    }
    return QubitRegister(std::move(out));
}

void Circuit::validate() const {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw Error(ErrorCode::DimensionMismatch, "circuit qubit count out of range");
    }
    for (std::size_t k = 0; k < steps.size(); k++) {
        std::visit(
            overloaded{
                [&](const SingleStep &s) {
                    if (s.target >= num_qubits) {
                        throw Error(ErrorCode::IndexOutOfRange, "step " + std::to_string(k) + ": target out of range");
                    }
                },
                [&](const QpgStep &s) {
                    if (s.q1 >= num_qubits || s.q2 >= num_qubits) {
                        throw Error(ErrorCode::IndexOutOfRange, "step " + std::to_string(k) + ": qubit out of range");
                    }
                    if (s.q1 == s.q2) {
                        throw Error(ErrorCode::IndexOutOfRange, "step " + std::to_string(k) + ": QPG qubits must differ");
                    }
                },
            },
            steps[k]);
    }
}

std::size_t Circuit::qpg_count() const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [](const Step &s) { return std::holds_alternative<QpgStep>(s); }));
}

QubitRegister apply_step(const QubitRegister &reg, const Step &step) {
    return std::visit(
        overloaded{
            [&](const SingleStep &s) { return apply_single(reg, s.target, s.element); },
            [&](const QpgStep &s) {
                if (!s.adjoint) {
                    return apply_qpg(reg, s.params, s.q1, s.q2);
                }
                // Conjugate gate: reflect every phase by applying the diagonal
                // entries' conjugates.
                auto g = gate_matrix(s.params);
                std::size_t n = reg.num_qubits();
                if (s.q1 >= n || s.q2 >= n || s.q1 == s.q2) {
                    throw Error(ErrorCode::IndexOutOfRange, "gate qubit index out of range");
                }
                std::vector<Complex> out(reg.amplitudes().begin(), reg.amplitudes().end());
                for (std::size_t k = 0; k < out.size(); k++) {
                    std::size_t b1 = (k >> (n - 1 - s.q1)) & 1;
                    std::size_t b2 = (k >> (n - 1 - s.q2)) & 1;
                    out[k] *= std::conj(g[(b1 << 1) | b2]);
                }
                return QubitRegister(std::move(out));
            },
        },
        step);
}

QubitRegister run_circuit(const QubitRegister &reg, const Circuit &c) {
    if (reg.num_qubits() != c.num_qubits) {
        throw Error(ErrorCode::DimensionMismatch, "register size does not match the circuit");
    }
    c.validate();
    QubitRegister state = reg;
    for (const auto &step : c.steps) {
        state = apply_step(state, step);
    }
    return state;
}

Circuit inverse(const Circuit &c) {
    Circuit out{c.num_qubits, {}};
    out.steps.reserve(c.steps.size());
    for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
        out.steps.push_back(std::visit(
            overloaded{
                [](const SingleStep &s) -> Step { return SingleStep{adjoint(s.element), s.target}; },
                [](const QpgStep &s) -> Step {
                    QpgStep r = s;
                    r.adjoint = !s.adjoint;
                    return r;
                },
            },
            *it));
    }
    return out;
}

std::vector<QubitRegister> circuit_columns(const Circuit &c) {
    std::vector<QubitRegister> cols;
    std::size_t dim = std::size_t{1} << c.num_qubits;
    cols.reserve(dim);
    for (std::size_t k = 0; k < dim; k++) {
        cols.push_back(run_circuit(QubitRegister::basis(c.num_qubits, k), c));
    }
    return cols;
}

std::vector<QubitRegister> cnot_columns() {
    // |HH> -> |HH>, |HV> -> |HV>, |VH> -> |VV>, |VV> -> |VH>
    return {QubitRegister::basis(2, 0), QubitRegister::basis(2, 1), QubitRegister::basis(2, 3),
            QubitRegister::basis(2, 2)};
}

double aligned_deviation(const std::vector<QubitRegister> &actual, const std::vector<QubitRegister> &expected) {
    if (actual.size() != expected.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrices differ in size");
    }
    // Global phase from the Frobenius inner product tr(E^dagger A).
    Complex overlap = 0;
    for (std::size_t k = 0; k < actual.size(); k++) {
        overlap += inner_product(expected[k], actual[k]);
    }
    Complex align = std::abs(overlap) > 0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0);
    double worst = 0;
    for (std::size_t k = 0; k < actual.size(); k++) {
        for (std::size_t r = 0; r < actual[k].size(); r++) {
            worst = std::max(worst, std::abs(actual[k][r] * align - expected[k][r]));
        }
    }
    return worst;
}

Circuit build_cnot(const KerrParams &p) {
    p.validate();
    GatePhases g = gate_phases(p);
    double conditional = g.gamma - g.alpha - g.beta;
    if (circular_distance(conditional, kPi) > kUniversalityTol) {
        throw Error(
            ErrorCode::NotCZ,
            "conditional phase " + std::to_string(reduce_phase(conditional)) + " rad is not pi; cannot form CZ");
    }
    Circuit c{2, {}};
    c.steps.push_back(SingleStep{hadamard_plate(), 1});
    c.steps.push_back(QpgStep{0, 1, p, false});
    // |VH> carries beta and |HV> carries alpha; undo them on each qubit.
    if (g.beta != 0) {
        c.steps.push_back(SingleStep{phase_plate(-g.beta), 0});
    }
    if (g.alpha != 0) {
        c.steps.push_back(SingleStep{phase_plate(-g.alpha), 1});
    }
    c.steps.push_back(SingleStep{hadamard_plate(), 1});
    return c;
}

}  // namespace qpg
