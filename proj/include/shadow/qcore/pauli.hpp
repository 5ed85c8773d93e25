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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shadow/common.hpp"

namespace shadow {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
/// Parses one of "IXYZ" (case-insensitive). Throws std::invalid_argument otherwise.
Pauli pauli_from_char(char c);

/// Single-qubit product a*b = i^phase * result.
struct PauliProduct {
    Pauli result;
    int phase;  // exponent of i, in [0, 4)
};
PauliProduct multiply(Pauli a, Pauli b);

/// A real multiple of a tensor product of single-qubit Paulis. Letter k acts on qubit k,
/// and qubit 0 is the most significant bit of a computational-basis index.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> letters, double coefficient = 1.0);

    /// Parses "XZI", optionally prefixed with a sign or "<coef>*", e.g. "-ZZ", "0.5*XY".
    static PauliString parse(std::string_view text);
    static PauliString identity(int n_qubits, double coefficient = 1.0);

    int n_qubits() const { return static_cast<int>(letters_.size()); }
    const std::vector<Pauli> &letters() const { return letters_; }
    Pauli operator[](int k) const { return letters_[k]; }
    double coefficient() const { return coefficient_; }

    int weight() const;
    std::vector<int> support() const;
    bool is_identity() const { return weight() == 0; }

    /// Base-4 index with qubit 0 as the most significant digit.
    uint64_t index() const;
    static PauliString from_index(uint64_t index, int n_qubits, double coefficient = 1.0);

    /// Letters only, e.g. "ZZIII".
    std::string letters_string() const;
    std::string to_string() const;

   private:
    std::vector<Pauli> letters_;
    double coefficient_ = 1.0;
};

/// Real linear combination of Pauli strings with distinct letter sequences.
class Observable {
   public:
    Observable() = default;
    explicit Observable(int n_qubits) : n_qubits_(n_qubits) {}
    Observable(const PauliString &p);  // NOLINT(google-explicit-constructor)
    Observable(int n_qubits, const std::vector<PauliString> &terms);

    /// Parses '+'-separated terms, each in PauliString::parse syntax: "ZZI + 0.5*XXX - YYI".
    static Observable parse(std::string_view text);
    static Observable identity(int n_qubits) { return Observable(PauliString::identity(n_qubits)); }

    /// Adds a term, merging with an existing term with the same letters.
    void add(const PauliString &p);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliString> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    /// Max number of non-identity letters over all terms.
    int weight() const;
    /// Union of the supports of all terms, ascending.
    std::vector<int> support() const;
    std::string to_string() const;

   private:
    int n_qubits_ = 0;
    std::vector<PauliString> terms_;
};

/// Dense matrix coefficient * kron(sigma_letters[0], ..., sigma_letters[n-1]).
Matrix pauli_matrix(const PauliString &p);
Matrix observable_matrix(const Observable &o);

/// tr(P M) for the unit-coefficient Pauli P, in O(2^n) using P's permutation structure.
Complex pauli_trace_product(const std::vector<Pauli> &letters, const Matrix &m);

/// Pauli decomposition M = sum_P (tr(P M)/2^n) P of a Hermitian matrix, dropping coefficients
/// with magnitude below cutoff. Imaginary parts of coefficients are discarded.
Observable pauli_decompose(const Matrix &m, double cutoff = 1e-12);

}  // namespace shadow
