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

#include <span>
#include <vector>

#include "shadow/qcore/exact.hpp"
#include "shadow/qcore/measure.hpp"

namespace shadow {

/// Error-model parameters for the GHZ preparation studies. Any subset may be zero.
struct NoiseConfig {
    double delta_coh = 0.0;  ///< relative over-rotation of every R_XX angle
    double p_deph = 0.0;     ///< dephasing rate of the end-of-circuit channel, in [0, 1]
    double p_det = 0.0;      ///< symmetric readout flip probability, in [0, 1/2)
    double eps_depol = 0.0;  ///< depolarization toward the orthogonal complement, in [0, 1]

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
};

enum class GateKind { RXX, RX, RY, RZ };

struct GateOp {
    GateKind kind;
    std::vector<int> qubits;
    double angle;  ///< radians; R_P(t) = exp(-i t P / 2), R_XX(t) = exp(-i t XX / 2)
};

/// Throws std::invalid_argument unless indices are distinct, < n_qubits, and the arity matches.
void validate_gate(const GateOp &g, int n_qubits);

/// GHZ preparation: R_Y(pi/2) on qubit 0, then a CNOT chain 0->1->...->n-1 with each CNOT
/// realized as R_Y(pi/2)_c R_XX(pi/2) R_X(-pi/2)_c R_X(-pi/2)_t R_Y(-pi/2)_c. Uses n-1 R_XX gates.
std::vector<GateOp> ghz_circuit(int n_qubits);

/// Pure-state gate application with every R_XX angle scaled by (1 + delta_coh).
PureState run_circuit(int n_qubits, std::span<const GateOp> gates, double delta_coh = 0.0);

/// (1-p) rho + (p/n) sum_i Z_i rho Z_i.
DensityMatrix dephase(const DensityMatrix &rho, double p_deph);

/// Gates with over-rotation, then the dephasing channel once at the end. Detection error and
/// eps_depol are not applied here.
DensityMatrix simulate_circuit(int n_qubits, std::span<const GateOp> gates, const NoiseConfig &noise);

/// Full noisy GHZ state used by the studies: over-rotated circuit, then (if eps_depol > 0) the
/// depolarization relative to the circuit's pure output, then dephasing.
DensityMatrix prepare_noisy_ghz(int n_qubits, const NoiseConfig &noise);

/// M * probs with M = (x)_i [[1-p, p], [p, 1-p]] applied qubit by qubit (never materialized).
std::vector<double> apply_detection_errors(std::span<const double> probs, double p_det);

/// Same with distinct per-qubit (p0, p1): A_i = [[1-p0, p1], [p0, 1-p1]].
std::vector<double> apply_confusion(std::span<const double> probs, std::span<const double> p0,
                                    std::span<const double> p1);

/// Expectation of a non-identity Pauli string measured in its eigenbasis with readout flips.
double noisy_pauli_expectation(const DensityMatrix &rho, const PauliString &o, double p_det);

/// Reconstructs rho_det = 2^-n sum_P c_P P from all 4^n detection-affected Pauli expectations
/// (n <= 6) and returns tr(O rho_det^2) / tr(rho_det^2).
double detection_affected_mitigation(const DensityMatrix &rho, const Observable &o, double p_det);

/// The reconstructed matrix itself.
Matrix detection_affected_state(const DensityMatrix &rho, double p_det);

/// Maximum n for detection_affected_mitigation.
inline constexpr int kMaxPauliSweepQubits = 6;

}  // namespace shadow
