// Copyright 2026 The Shadow Distill Authors
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

#include "shadow/qcore/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace shadow {

Matrix basis_rotation(Pauli p) {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix u(2, 2);
    switch (p) {
        case Pauli::X:
            u << r, r, r, -r;
            break;
        case Pauli::Y:
            // H * diag(1, -i)
            u << r, Complex(0, -r), r, Complex(0, r);
            break;
        case Pauli::I:
        case Pauli::Z:
            u << 1, 0, 0, 1;
            break;
    }
    return u;
}

std::vector<double> measurement_distribution(const Matrix &rho, const std::vector<Pauli> &letters) {
    const int n = static_cast<int>(letters.size());
    const int64_t dim = int64_t{1} << n;
    if (rho.rows() != dim || rho.cols() != dim) {
        throw std::invalid_argument("measurement_distribution: basis length does not match the state.");
    }
    Matrix m = rho;
    for (int k = 0; k < n; k++) {
        if (letters[k] == Pauli::Z || letters[k] == Pauli::I) {
            continue;
        }
        Matrix u = basis_rotation(letters[k]);
        const int64_t bit = int64_t{1} << (n - 1 - k);
        // rows: m <- u m
        for (int64_t r = 0; r < dim; r++) {
            if (r & bit) {
                continue;
            }
            int64_t r1 = r | bit;
            for (int64_t c = 0; c < dim; c++) {
                Complex a = m(r, c);
                Complex b = m(r1, c);
                m(r, c) = u(0, 0) * a + u(0, 1) * b;
                m(r1, c) = u(1, 0) * a + u(1, 1) * b;
            }
        }
        // columns: m <- m u^dagger
        for (int64_t c = 0; c < dim; c++) {
            if (c & bit) {
                continue;
            }
            int64_t c1 = c | bit;
            for (int64_t r = 0; r < dim; r++) {
                Complex a = m(r, c);
                Complex b = m(r, c1);
                m(r, c) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
                m(r, c1) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
            }
        }
    }
    std::vector<double> probs(dim);
    for (int64_t i = 0; i < dim; i++) {
        probs[i] = std::max(0.0, m(i, i).real());
    }
    return probs;
}

std::vector<double> measurement_distribution(const DensityMatrix &rho, const std::vector<Pauli> &letters) {
    return measurement_distribution(rho.matrix(), letters);
}

}  // namespace shadow
