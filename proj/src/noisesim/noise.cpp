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

#include "shadow/noisesim/noise.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shadow {

void NoiseConfig::validate() const {
    if (!std::isfinite(delta_coh)) {
        throw std::invalid_argument("noise.delta_coh must be finite.");
    }
    if (!(p_deph >= 0.0 && p_deph <= 1.0)) {
        throw std::invalid_argument("noise.p_deph must be in [0, 1].");
    }
    if (!(p_det >= 0.0 && p_det < 0.5)) {
        throw std::invalid_argument("noise.p_det must be in [0, 1/2).");
    }
    if (!(eps_depol >= 0.0 && eps_depol <= 1.0)) {
        throw std::invalid_argument("noise.eps_depol must be in [0, 1].");
    }
}

void validate_gate(const GateOp &g, int n_qubits) {
    size_t arity = g.kind == GateKind::RXX ? 2 : 1;
    if (g.qubits.size() != arity) {
        throw std::invalid_argument("Gate has " + std::to_string(g.qubits.size()) + " targets, expected " +
                                    std::to_string(arity) + ".");
    }
    for (int q : g.qubits) {
        if (q < 0 || q >= n_qubits) {
            throw std::invalid_argument("Gate target " + std::to_string(q) + " out of range for " +
                                        std::to_string(n_qubits) + " qubits.");
        }
    }
    if (arity == 2 && g.qubits[0] == g.qubits[1]) {
        throw std::invalid_argument("R_XX targets must be distinct.");
    }
}

std::vector<GateOp> ghz_circuit(int n_qubits) {
    if (n_qubits < 2) {
        throw std::invalid_argument("ghz_circuit: needs at least 2 qubits.");
    }
    constexpr double h = std::numbers::pi / 2;
    std::vector<GateOp> gates;
    gates.push_back({GateKind::RY, {0}, h});
    for (int c = 0; c + 1 < n_qubits; c++) {
        int t = c + 1;
        gates.push_back({GateKind::RY, {c}, h});
        gates.push_back({GateKind::RXX, {c, t}, h});
        gates.push_back({GateKind::RX, {c}, -h});
        gates.push_back({GateKind::RX, {t}, -h});
        gates.push_back({GateKind::RY, {c}, -h});
    }
    return gates;
}

namespace {

void apply_single(Vector &amps, int n, int q, const Complex u[2][2]) {
    const int64_t dim = amps.size();
    const int64_t bit = int64_t{1} << (n - 1 - q);
    for (int64_t i = 0; i < dim; i++) {
        if (i & bit) {
            continue;
        }
        Complex a = amps[i];
        Complex b = amps[i | bit];
        amps[i] = u[0][0] * a + u[0][1] * b;
        amps[i | bit] = u[1][0] * a + u[1][1] * b;
    }
}

void apply_rxx(Vector &amps, int n, int q0, int q1, double theta) {
    const int64_t mask = (int64_t{1} << (n - 1 - q0)) | (int64_t{1} << (n - 1 - q1));
    const double c = std::cos(theta / 2);
    const Complex ms(0, -std::sin(theta / 2));
    Vector out(amps.size());
    for (int64_t i = 0; i < amps.size(); i++) {
        out[i] = c * amps[i] + ms * amps[i ^ mask];
    }
    amps = std::move(out);
}

}  // namespace

PureState run_circuit(int n_qubits, std::span<const GateOp> gates, double delta_coh) {
    require_dense(n_qubits, "run_circuit");
    Vector amps = Vector::Zero(int64_t{1} << n_qubits);
    amps[0] = 1.0;
    for (const auto &g : gates) {
        validate_gate(g, n_qubits);
        const double c = std::cos(g.angle / 2);
        const double s = std::sin(g.angle / 2);
        switch (g.kind) {
            case GateKind::RXX:
                apply_rxx(amps, n_qubits, g.qubits[0], g.qubits[1], g.angle * (1.0 + delta_coh));
                break;
            case GateKind::RX: {
                const Complex u[2][2] = {{c, Complex(0, -s)}, {Complex(0, -s), c}};
                apply_single(amps, n_qubits, g.qubits[0], u);
                break;
            }
            case GateKind::RY: {
                const Complex u[2][2] = {{c, -s}, {s, c}};
                apply_single(amps, n_qubits, g.qubits[0], u);
                break;
            }
            case GateKind::RZ: {
                const Complex u[2][2] = {{Complex(c, -s), 0}, {0, Complex(c, s)}};
                apply_single(amps, n_qubits, g.qubits[0], u);
                break;
            }
        }
    }
    amps /= amps.norm();
    return PureState(n_qubits, std::move(amps));
}

DensityMatrix dephase(const DensityMatrix &rho, double p_deph) {
    if (!(p_deph >= 0.0 && p_deph <= 1.0)) {
        throw std::invalid_argument("dephase: p_deph must be in [0, 1].");
    }
    if (p_deph == 0.0) {
        return rho;
    }
    const int n = rho.n_qubits();
    const int64_t dim = rho.dim();
    // Z_i rho Z_i flips the sign of entry (r, c) when bit i of r and c differ.
    Matrix out = rho.matrix();
    for (int64_t r = 0; r < dim; r++) {
        for (int64_t c = 0; c < dim; c++) {
            int differing = std::popcount(static_cast<uint64_t>(r ^ c));
            double factor = (1.0 - p_deph) + (p_deph / n) * (n - 2 * differing);
            out(r, c) *= factor;
        }
    }
    return DensityMatrix(n, std::move(out));
}

DensityMatrix simulate_circuit(int n_qubits, std::span<const GateOp> gates, const NoiseConfig &noise) {
    noise.validate();
    PureState psi = run_circuit(n_qubits, gates, noise.delta_coh);
    return dephase(DensityMatrix(psi), noise.p_deph);
}

DensityMatrix prepare_noisy_ghz(int n_qubits, const NoiseConfig &noise) {
    noise.validate();
    auto gates = ghz_circuit(n_qubits);
    PureState psi = run_circuit(n_qubits, gates, noise.delta_coh);
    DensityMatrix rho = noise.eps_depol > 0 ? depolarized_state(psi, noise.eps_depol) : DensityMatrix(psi);
    return dephase(rho, noise.p_deph);
}

std::vector<double> apply_confusion(std::span<const double> probs, std::span<const double> p0,
                                    std::span<const double> p1) {
    const int64_t dim = static_cast<int64_t>(probs.size());
    const int n = static_cast<int>(p0.size());
    if ((int64_t{1} << n) != dim || p1.size() != p0.size()) {
        throw std::invalid_argument("apply_confusion: distribution length does not match qubit count.");
    }
    std::vector<double> out(probs.begin(), probs.end());
    for (int k = 0; k < n; k++) {
        const int64_t bit = int64_t{1} << (n - 1 - k);
        for (int64_t i = 0; i < dim; i++) {
            if (i & bit) {
                continue;
            }
            double a = out[i];
            double b = out[i | bit];
            out[i] = (1 - p0[k]) * a + p1[k] * b;
            out[i | bit] = p0[k] * a + (1 - p1[k]) * b;
        }
    }
    return out;
}

std::vector<double> apply_detection_errors(std::span<const double> probs, double p_det) {
    if (!(p_det >= 0.0 && p_det < 0.5)) {
        throw std::invalid_argument("apply_detection_errors: p_det must be in [0, 1/2).");
    }
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    if (std::abs(total - 1.0) > kExactTol) {
        throw std::invalid_argument("apply_detection_errors: probabilities sum to " + std::to_string(total) + ".");
    }
    int n = 0;
    while ((size_t{1} << n) < probs.size()) {
        n++;
    }
    std::vector<double> p(n, p_det);
    return apply_confusion(probs, p, p);
}

double noisy_pauli_expectation(const DensityMatrix &rho, const PauliString &o, double p_det) {
    if (o.n_qubits() != rho.n_qubits()) {
        throw std::invalid_argument("noisy_pauli_expectation: qubit count mismatch.");
    }
    if (o.is_identity()) {
        throw std::invalid_argument("noisy_pauli_expectation: identity observable is not a measurement.");
    }
    auto probs = measurement_distribution(rho, o.letters());
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    for (double &p : probs) {
        p /= total;
    }
    auto noisy = apply_detection_errors(probs, p_det);
    const int n = o.n_qubits();
    uint64_t support_mask = 0;
    for (int k : o.support()) {
        support_mask |= uint64_t{1} << (n - 1 - k);
    }
    double e = 0;
    for (size_t b = 0; b < noisy.size(); b++) {
        e += (std::popcount(b & support_mask) & 1 ? -1.0 : 1.0) * noisy[b];
    }
    return o.coefficient() * e;
}

Matrix detection_affected_state(const DensityMatrix &rho, double p_det) {
    const int n = rho.n_qubits();
    if (n > kMaxPauliSweepQubits) {
        throw std::length_error("detection_affected_mitigation: " + std::to_string(n) +
                                " qubits is too many for the 4^n Pauli sweep (max " +
                                std::to_string(kMaxPauliSweepQubits) + ").");
    }
    const int64_t dim = rho.dim();
    Matrix rec = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    const uint64_t count = uint64_t{1} << (2 * n);
    for (uint64_t idx = 1; idx < count; idx++) {
        PauliString p = PauliString::from_index(idx, n);
        double c = noisy_pauli_expectation(rho, p, p_det);
        rec += (c / static_cast<double>(dim)) * pauli_matrix(p);
    }
    return rec;
}

double detection_affected_mitigation(const DensityMatrix &rho, const Observable &o, double p_det) {
    return mitigated_expval_matrix(detection_affected_state(rho, p_det), o, 2);
}

}  // namespace shadow
