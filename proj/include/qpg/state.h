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

// State vectors for polarization qubits.
//
// Basis convention, used everywhere in the project: H is 0 and V is 1, and
// qubit 0 (the "first" qubit) is the most significant bit of a register
// index. For two qubits the order is therefore (HH, HV, VH, VV).
//
// The dual-rail representation gives each qubit two rails (its H beam and
// its V beam after a polarizing beam splitter). Rail 2q is qubit q's H rail
// and rail 2q+1 its V rail; rail 0 is the most significant bit of a pattern
// index, so for two qubits a pattern index reads (n1H, n1V, n2H, n2V).
//
// Global phase is kept. fidelity() is the phase-insensitive comparison.

#ifndef QPG_STATE_H
#define QPG_STATE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qpg {

using Complex = std::complex<double>;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kZeroNormTol = 1e-15;
inline constexpr std::size_t kMaxQubits = 8;

/// Single-photon polarization state a|H> + b|V>.
struct PolarizationQubit {
    Complex a;
    Complex b;

    static PolarizationQubit H() {
        return {1.0, 0.0};
    }
    static PolarizationQubit V() {
        return {0.0, 1.0};
    }
    /// (|H> + |V>)/sqrt(2).
    static PolarizationQubit plus();

    double norm_squared() const {
        return std::norm(a) + std::norm(b);
    }
    bool is_normalized(double tol = kExactTol) const;
};

class QubitRegister {
   public:
    /// Length must be 2^n with 1 <= n <= kMaxQubits and every entry finite.
    /// Unit norm is not required here; operations that need it check it.
    explicit QubitRegister(std::vector<Complex> amplitudes);

    static QubitRegister basis(std::size_t num_qubits, std::size_t index);
    /// Product state of the given qubits, qubit 0 first.
    static QubitRegister product(std::span<const PolarizationQubit> qubits);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t size() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](std::size_t k) const {
        return amplitudes_[k];
    }

    double norm_squared() const;
    bool is_normalized(double tol = kExactTol) const;

    bool operator==(const QubitRegister &other) const = default;

   private:
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

class DualRailState {
   public:
    /// Amplitudes indexed by occupation pattern, length 2^(2 * num_qubits).
    DualRailState(std::size_t num_qubits, std::vector<Complex> amplitudes);

    static DualRailState vacuum(std::size_t num_qubits);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t num_rails() const {
        return 2 * num_qubits_;
    }
    std::size_t size() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](std::size_t pattern) const {
        return amplitudes_[pattern];
    }

    double norm_squared() const;

    /// Patterns carrying amplitude above kZeroNormTol in magnitude.
    std::vector<std::size_t> support() const;

    bool operator==(const DualRailState &other) const = default;

   private:
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Rail helpers. rail = 2 * qubit + (0 for H, 1 for V).
std::size_t rail_index(std::size_t qubit, bool vertical);
unsigned rail_occupation(std::size_t pattern, std::size_t rail, std::size_t num_rails);
/// Photon count on qubit q's two rails (0, 1 or 2).
unsigned qubit_photons(std::size_t pattern, std::size_t qubit, std::size_t num_qubits);
/// True when every qubit holds exactly one photon across its two rails.
bool is_valid_pattern(std::size_t pattern, std::size_t num_qubits);
/// Dual-rail pattern of a computational-basis index.
std::size_t pattern_of_basis(std::size_t basis_index, std::size_t num_qubits);

QubitRegister normalize(const QubitRegister &reg);
DualRailState normalize(const DualRailState &state);
PolarizationQubit normalize(const PolarizationQubit &q);

/// |<x|y>|^2 for unit-norm registers of equal size.
double fidelity(const QubitRegister &x, const QubitRegister &y);

/// <x|y>.
Complex inner_product(const QubitRegister &x, const QubitRegister &y);

QubitRegister tensor(const PolarizationQubit &q1, const PolarizationQubit &q2);

DualRailState split_dual_rail(const QubitRegister &reg);
QubitRegister recombine_dual_rail(const DualRailState &state);

/// Determinant of the 2x2 amplitude matrix [[c_HH, c_HV], [c_VH, c_VV]] of a
/// two-qubit register. Zero exactly when the state is a product state.
Complex amplitude_determinant(const QubitRegister &reg);

/// Largest componentwise |x_k - y_k|.
double max_deviation(const QubitRegister &x, const QubitRegister &y);

/// Basis label such as "HV" for index 1 of a two-qubit register.
std::string basis_label(std::size_t index, std::size_t num_qubits);

}  // namespace qpg

#endif  // QPG_STATE_H
