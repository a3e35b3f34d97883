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

#include "qpg/state.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qpg/error.h"

namespace qpg {

namespace {

void require_finite(std::span<const Complex> amplitudes) {
    for (const auto &c : amplitudes) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw Error(ErrorCode::NonFinite, "state amplitude is NaN or infinite");
        }
    }
}

double sum_norm(std::span<const Complex> amplitudes) {
    double total = 0;
    for (const auto &c : amplitudes) {
        total += std::norm(c);
    }
    return total;
}

std::vector<Complex> scaled(std::span<const Complex> amplitudes, double norm_squared) {
    if (std::sqrt(norm_squared) <= kZeroNormTol) {
        throw Error(ErrorCode::ZeroNorm, "cannot normalize a zero vector");
    }
    double inv = 1.0 / std::sqrt(norm_squared);
    std::vector<Complex> out(amplitudes.begin(), amplitudes.end());
    for (auto &c : out) {
        c *= inv;
    }
    return out;
}

}  // namespace

PolarizationQubit PolarizationQubit::plus() {
    double r = 1.0 / std::sqrt(2.0);
    return {r, r};
}

bool PolarizationQubit::is_normalized(double tol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
}

QubitRegister::QubitRegister(std::vector<Complex> amplitudes) : num_qubits_(0), amplitudes_(std::move(amplitudes)) {
    std::size_t n = amplitudes_.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw Error(ErrorCode::DimensionMismatch, "register length must be 2^n with n >= 1");
    }
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(n));
    if (num_qubits_ > kMaxQubits) {
        throw Error(ErrorCode::DimensionMismatch, "register exceeds the supported qubit count");
    }
    require_finite(amplitudes_);
}

QubitRegister QubitRegister::basis(std::size_t num_qubits, std::size_t index) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw Error(ErrorCode::DimensionMismatch, "qubit count out of range");
    }
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    if (index >= amps.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
    }
    amps[index] = 1.0;
    return QubitRegister(std::move(amps));
}

QubitRegister QubitRegister::product(std::span<const PolarizationQubit> qubits) {
    if (qubits.empty() || qubits.size() > kMaxQubits) {
        throw Error(ErrorCode::DimensionMismatch, "qubit count out of range");
    }
    std::vector<Complex> amps{1.0};
    for (const auto &q : qubits) {
        std::vector<Complex> next;
        next.reserve(amps.size() * 2);
        for (const auto &c : amps) {
            next.push_back(c * q.a);
            next.push_back(c * q.b);
        }
        amps = std::move(next);
    }
    return QubitRegister(std::move(amps));
}

double QubitRegister::norm_squared() const {
    return sum_norm(amplitudes_);
}

bool QubitRegister::is_normalized(double tol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
}

DualRailState::DualRailState(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw Error(ErrorCode::DimensionMismatch, "qubit count out of range");
    }
    if (amplitudes_.size() != (std::size_t{1} << (2 * num_qubits))) {
        throw Error(ErrorCode::DimensionMismatch, "dual-rail length must be 4^n");
    }
    require_finite(amplitudes_);
}

DualRailState DualRailState::vacuum(std::size_t num_qubits) {
    std::vector<Complex> amps(std::size_t{1} << (2 * num_qubits));
    amps[0] = 1.0;
    return DualRailState(num_qubits, std::move(amps));
}

double DualRailState::norm_squared() const {
    return sum_norm(amplitudes_);
}

std::vector<std::size_t> DualRailState::support() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < amplitudes_.size(); k++) {
        if (std::abs(amplitudes_[k]) > kZeroNormTol) {
            out.push_back(k);
        }
    }
    return out;
}

std::size_t rail_index(std::size_t qubit, bool vertical) {
    return 2 * qubit + (vertical ? 1 : 0);
}

unsigned rail_occupation(std::size_t pattern, std::size_t rail, std::size_t num_rails) {
    return static_cast<unsigned>((pattern >> (num_rails - 1 - rail)) & 1);
}

unsigned qubit_photons(std::size_t pattern, std::size_t qubit, std::size_t num_qubits) {
    std::size_t rails = 2 * num_qubits;
    return rail_occupation(pattern, rail_index(qubit, false), rails) +
           rail_occupation(pattern, rail_index(qubit, true), rails);
}

bool is_valid_pattern(std::size_t pattern, std::size_t num_qubits) {
    for (std::size_t q = 0; q < num_qubits; q++) {
        if (qubit_photons(pattern, q, num_qubits) != 1) {
            return false;
        }
    }
    return true;
}

std::size_t pattern_of_basis(std::size_t basis_index, std::size_t num_qubits) {
    std::size_t pattern = 0;
    for (std::size_t q = 0; q < num_qubits; q++) {
        bool v = (basis_index >> (num_qubits - 1 - q)) & 1;
        // H -> rails (1, 0), V -> rails (0, 1)
        pattern = (pattern << 2) | (v ? 0b01 : 0b10);
    }
    return pattern;
}

QubitRegister normalize(const QubitRegister &reg) {
    return QubitRegister(scaled(reg.amplitudes(), reg.norm_squared()));
}

DualRailState normalize(const DualRailState &state) {
    return DualRailState(state.num_qubits(), scaled(state.amplitudes(), state.norm_squared()));
}

PolarizationQubit normalize(const PolarizationQubit &q) {
    Complex pair[2] = {q.a, q.b};
    auto out = scaled(pair, q.norm_squared());
    return {out[0], out[1]};
}

Complex inner_product(const QubitRegister &x, const QubitRegister &y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "registers differ in qubit count");
    }
    Complex acc = 0;
    for (std::size_t k = 0; k < x.size(); k++) {
        acc += std::conj(x[k]) * y[k];
    }
    return acc;
}

double fidelity(const QubitRegister &x, const QubitRegister &y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "registers differ in qubit count");
    }
    if (!x.is_normalized() || !y.is_normalized()) {
        throw Error(ErrorCode::NotNormalized, "fidelity needs unit-norm registers");
    }
    // Dividing out the norms keeps f(x, x) == 1 exactly despite rounding.
    double f = std::norm(inner_product(x, y)) / (x.norm_squared() * y.norm_squared());
    return std::min(1.0, f);
}

QubitRegister tensor(const PolarizationQubit &q1, const PolarizationQubit &q2) {
    if (!q1.is_normalized() || !q2.is_normalized()) {
        throw Error(ErrorCode::NotNormalized, "tensor needs unit-norm qubits");
    }
    return QubitRegister({q1.a * q2.a, q1.a * q2.b, q1.b * q2.a, q1.b * q2.b});
}

DualRailState split_dual_rail(const QubitRegister &reg) {
    std::size_t n = reg.num_qubits();
    std::vector<Complex> amps(std::size_t{1} << (2 * n));
    for (std::size_t k = 0; k < reg.size(); k++) {
        amps[pattern_of_basis(k, n)] = reg[k];
    }
    return DualRailState(n, std::move(amps));
}

QubitRegister recombine_dual_rail(const DualRailState &state) {
    std::size_t n = state.num_qubits();
    for (std::size_t p : state.support()) {
        if (!is_valid_pattern(p, n)) {
            throw Error(
                ErrorCode::InvalidOccupation,
                "pattern " + std::to_string(p) + " does not hold exactly one photon per qubit; post-select first");
        }
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    for (std::size_t k = 0; k < amps.size(); k++) {
        amps[k] = state[pattern_of_basis(k, n)];
    }
    return QubitRegister(std::move(amps));
}

Complex amplitude_determinant(const QubitRegister &reg) {
    if (reg.num_qubits() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude determinant is defined for two qubits");
    }
    return reg[0] * reg[3] - reg[1] * reg[2];
}

double max_deviation(const QubitRegister &x, const QubitRegister &y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "registers differ in qubit count");
    }
    double worst = 0;
    for (std::size_t k = 0; k < x.size(); k++) {
        worst = std::max(worst, std::abs(x[k] - y[k]));
    }
    return worst;
}

std::string basis_label(std::size_t index, std::size_t num_qubits) {
    std::string out(num_qubits, 'H');
    for (std::size_t q = 0; q < num_qubits; q++) {
        if ((index >> (num_qubits - 1 - q)) & 1) {
            out[q] = 'V';
        }
    }
    return out;
}

}  // namespace qpg
