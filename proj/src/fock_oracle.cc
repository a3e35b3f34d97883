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

// Brute-force two-mode Fock-space oracle. Everything here is built from
// ladder-operator matrices rather than the closed-form phases in
// kerr_gate.cc, so the two can be checked against each other.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qpg/error.h"
#include "qpg/kerr_gate.h"

namespace qpg {

namespace {

struct DenseMatrix {
    std::size_t dim;
    std::vector<double> data;

    explicit DenseMatrix(std::size_t d) : dim(d), data(d * d, 0.0) {
    }

    static DenseMatrix identity(std::size_t d) {
        DenseMatrix m(d);
        for (std::size_t k = 0; k < d; k++) {
            m(k, k) = 1.0;
        }
        return m;
    }

    double &operator()(std::size_t r, std::size_t c) {
        return data[r * dim + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data[r * dim + c];
    }

    DenseMatrix transpose() const {
        DenseMatrix out(dim);
        for (std::size_t r = 0; r < dim; r++) {
            for (std::size_t c = 0; c < dim; c++) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    DenseMatrix operator*(const DenseMatrix &rhs) const {
        DenseMatrix out(dim);
        for (std::size_t r = 0; r < dim; r++) {
            for (std::size_t k = 0; k < dim; k++) {
                double v = (*this)(r, k);
                if (v == 0) {
                    continue;
                }
                for (std::size_t c = 0; c < dim; c++) {
                    out(r, c) += v * rhs(k, c);
                }
            }
        }
        return out;
    }

    DenseMatrix operator+(const DenseMatrix &rhs) const {
        DenseMatrix out = *this;
        for (std::size_t k = 0; k < data.size(); k++) {
            out.data[k] += rhs.data[k];
        }
        return out;
    }

    DenseMatrix scaled(double s) const {
        DenseMatrix out = *this;
        for (auto &v : out.data) {
            v *= s;
        }
        return out;
    }
};

DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out(a.dim * b.dim);
    for (std::size_t r1 = 0; r1 < a.dim; r1++) {
        for (std::size_t c1 = 0; c1 < a.dim; c1++) {
            for (std::size_t r2 = 0; r2 < b.dim; r2++) {
                for (std::size_t c2 = 0; c2 < b.dim; c2++) {
                    out(r1 * b.dim + r2, c1 * b.dim + c2) = a(r1, c1) * b(r2, c2);
                }
            }
        }
    }
    return out;
}

/// Truncated annihilation operator: a|n> = sqrt(n)|n-1>.
DenseMatrix annihilation(std::size_t dim) {
    DenseMatrix a(dim);
    for (std::size_t n = 1; n < dim; n++) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

}  // namespace

double fock_oracle_evolve(int n1, int n2, const KerrParams &p, const std::optional<MediumSpec> &medium) {
    if (n1 < 0 || n2 < 0 || n1 > kOracleMaxPhotons || n2 > kOracleMaxPhotons) {
        throw Error(ErrorCode::OutOfRange, "oracle photon numbers must lie in [0, " + std::to_string(kOracleMaxPhotons) + "]");
    }
    double coupling = medium ? chi_eff_from_medium(*medium) : p.chi_eff;

    // One level above the cap keeps the top number state away from the
    // truncation edge of a a^dagger (a^dagger a itself is exact).
    const std::size_t dim = kOracleMaxPhotons + 2;
    DenseMatrix a = annihilation(dim);
    DenseMatrix number = a.transpose() * a;
    DenseMatrix id = DenseMatrix::identity(dim);
    DenseMatrix n_1 = kron(number, id);
    DenseMatrix n_2 = kron(id, number);
    DenseMatrix half = DenseMatrix::identity(dim * dim).scaled(0.5);

    // H / hbar = w1 (eps/eps0)(n1 + 1/2) + w2 (eps/eps0)(n2 + 1/2) + chi w1 w2 n1 n2
    DenseMatrix h = (n_1 + half).scaled(p.omega1 * p.eps_ratio) + (n_2 + half).scaled(p.omega2 * p.eps_ratio) +
                    (n_1 * n_2).scaled(coupling * p.omega1 * p.omega2);

    std::size_t idx = static_cast<std::size_t>(n1) * dim + static_cast<std::size_t>(n2);
    return h(idx, idx) * p.t;
}

namespace {

double relative_error(double got, double want, double scale) {
    double diff = std::abs(got - want);
    if (diff == 0) {
        return 0;
    }
    return diff / std::max({std::abs(want), scale, std::numeric_limits<double>::min()});
}

}  // namespace

OracleDeviation oracle_deviation(const KerrParams &p) {
    constexpr int kSide = kOracleMaxPhotons + 1;
    double phase[kSide][kSide];
    for (int a = 0; a < kSide; a++) {
        for (int b = 0; b < kSide; b++) {
            phase[a][b] = fock_oracle_evolve(a, b, p);
        }
    }
    OracleDeviation dev;
    for (int a = 0; a < kSide; a++) {
        for (int b = 0; b < kSide; b++) {
            if (a > 0) {
                double scale = std::max(std::abs(phase[a][b]), std::abs(phase[a - 1][b]));
                dev.mode1 = std::max(dev.mode1, relative_error(phase[a][b] - phase[a - 1][b], mode_phase(p, 1, b), scale));
            }
            if (b > 0) {
                double scale = std::max(std::abs(phase[a][b]), std::abs(phase[a][b - 1]));
                dev.mode2 = std::max(dev.mode2, relative_error(phase[a][b] - phase[a][b - 1], mode_phase(p, 2, a), scale));
            }
            if (a > 0 && b > 0) {
                double second = phase[a][b] - phase[a - 1][b] - phase[a][b - 1] + phase[a - 1][b - 1];
                double scale = std::max({std::abs(phase[a][b]), std::abs(phase[a - 1][b]), std::abs(phase[a][b - 1]),
                                         std::abs(phase[a - 1][b - 1])});
                dev.cross = std::max(dev.cross, relative_error(second, p.cross_phase(), scale));
            }
        }
    }
    return dev;
}

}  // namespace qpg
