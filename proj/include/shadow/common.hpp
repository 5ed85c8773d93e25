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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace shadow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance used for all exact-path algebra (hermiticity, trace, norms).
inline constexpr double kExactTol = 1e-10;

/// Default cap on qubit count for anything stored as a dense 2^n x 2^n matrix.
inline constexpr int kDefaultDenseQubitCap = 12;

/// Current dense-storage cap. Process-wide; set once at startup (e.g. from a config file).
int dense_qubit_cap();
void set_dense_qubit_cap(int max_qubits);

/// Throws std::length_error if n_qubits exceeds the dense cap.
void require_dense(int n_qubits, const char *what);

/// Malformed or inconsistent input data (record files, CSVs).
class DataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A resource budget admits no valid allocation.
class InfeasibleError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer. Used to derive independent stream seeds from (seed, index) pairs.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

constexpr uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t sub) {
    return derive_seed(derive_seed(seed, stream), sub);
}

}  // namespace shadow
