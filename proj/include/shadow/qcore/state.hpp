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

#pragma once

#include <cstdint>

#include "shadow/common.hpp"

namespace shadow {

/// Normalized state vector on n qubits (qubit 0 is the most significant index bit).
class PureState {
   public:
    /// Validates ||amplitudes|| = 1 within kExactTol.
    PureState(int n_qubits, Vector amplitudes);

    int n_qubits() const { return n_qubits_; }
    int64_t dim() const { return amplitudes_.size(); }
    const Vector &amplitudes() const { return amplitudes_; }
    Complex operator[](int64_t i) const { return amplitudes_[i]; }

    /// |<this|other>|^2.
    double fidelity(const PureState &other) const;

   private:
    int n_qubits_;
    Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite 2^n x 2^n matrix. Immutable.
class DensityMatrix {
   public:
    /// Validates hermiticity, trace and positivity within kExactTol.
    DensityMatrix(int n_qubits, Matrix data);
    /// |psi><psi|.
    explicit DensityMatrix(const PureState &psi);

    int n_qubits() const { return n_qubits_; }
    int64_t dim() const { return data_.rows(); }
    const Matrix &matrix() const { return data_; }

    /// rho (x) rho on 2n qubits, first factor on qubits 0..n-1.
    DensityMatrix tensor_square() const;

   private:
    int n_qubits_;
    Matrix data_;
};

/// Checks the DensityMatrix invariants without constructing one; returns an empty string when
/// valid, otherwise a description of the first violated invariant.
std::string density_matrix_violation(const Matrix &m, double tol = kExactTol);

PureState basis_state(int n_qubits, uint64_t index);
/// (|0...0> + |1...1>)/sqrt(2).
PureState ghz_state(int n_qubits);
DensityMatrix maximally_mixed(int n_qubits);

/// Haar-random unitary on n qubits via QR of a complex Ginibre matrix, with the phases of R's
/// diagonal absorbed so the distribution is exactly Haar. Deterministic in seed.
Matrix haar_random_unitary(int n_qubits, uint64_t seed);

/// First column of haar_random_unitary(n_qubits, seed), i.e. U_R|0>, computed without the
/// full QR (the first Gaussian column normalized is identical).
PureState haar_random_state(int n_qubits, uint64_t seed);

/// (1-eps)|psi><psi| + eps/(2^n-1) (I - |psi><psi|), 0 < eps <= 1.
DensityMatrix depolarized_state(const PureState &psi, double eps);

/// Full-rank random mixed state G G^dagger / tr(G G^dagger) with complex Gaussian G.
DensityMatrix random_mixed_state(int n_qubits, uint64_t seed);

}  // namespace shadow
