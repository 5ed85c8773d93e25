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

#include "shadow/qcore/state.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace shadow {

namespace {
std::atomic<int> g_dense_cap{kDefaultDenseQubitCap};

int qubits_for_dim(int64_t dim) {
    int n = 0;
    while ((int64_t{1} << n) < dim) {
        n++;
    }
    return n;
}

Matrix gaussian_matrix(int64_t rows, int64_t cols, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(rows, cols);
    // Column-major fill so the first column uses the first 2*rows draws.
    for (int64_t c = 0; c < cols; c++) {
        for (int64_t r = 0; r < rows; r++) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}
}  // namespace

int dense_qubit_cap() {
    return g_dense_cap.load();
}

void set_dense_qubit_cap(int max_qubits) {
    if (max_qubits < 1 || max_qubits > 30) {
        throw std::invalid_argument("dense qubit cap must be in [1, 30].");
    }
    g_dense_cap.store(max_qubits);
}

void require_dense(int n_qubits, const char *what) {
    if (n_qubits < 1) {
        throw std::invalid_argument(std::string(what) + ": n_qubits must be >= 1.");
    }
    if (n_qubits > dense_qubit_cap()) {
        throw std::length_error(std::string(what) + ": " + std::to_string(n_qubits) +
                                " qubits exceeds the dense-storage cap of " + std::to_string(dense_qubit_cap()) + ".");
    }
}

PureState::PureState(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    require_dense(n_qubits, "PureState");
    if (amplitudes_.size() != (int64_t{1} << n_qubits)) {
        throw std::invalid_argument("PureState: amplitude vector has wrong length.");
    }
    double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kExactTol) {
        throw std::invalid_argument("PureState: norm " + std::to_string(norm) + " differs from 1.");
    }
}

double PureState::fidelity(const PureState &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch.");
    }
    return std::norm(amplitudes_.dot(other.amplitudes_));
}

std::string density_matrix_violation(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return "matrix is not square";
    }
    int n = qubits_for_dim(m.rows());
    if ((int64_t{1} << n) != m.rows()) {
        return "dimension is not a power of two";
    }
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) {
        std::ostringstream ss;
        ss << "not Hermitian (max |M - M^dagger| = " << herm << ")";
        return ss.str();
    }
    Complex tr = m.trace();
    if (std::abs(tr - 1.0) > tol) {
        std::ostringstream ss;
        ss << "trace " << tr.real() << " differs from 1";
        return ss.str();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol) {
        std::ostringstream ss;
        ss << "negative eigenvalue " << min_eig;
        return ss.str();
    }
    return {};
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix data) : n_qubits_(n_qubits), data_(std::move(data)) {
    require_dense(n_qubits, "DensityMatrix");
    if (data_.rows() != (int64_t{1} << n_qubits)) {
        throw std::invalid_argument("DensityMatrix: matrix size does not match n_qubits.");
    }
    std::string why = density_matrix_violation(data_);
    if (!why.empty()) {
        throw std::invalid_argument("DensityMatrix: " + why + ".");
    }
}

DensityMatrix::DensityMatrix(const PureState &psi)
    : DensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint()) {
}

DensityMatrix DensityMatrix::tensor_square() const {
    Matrix sq = Eigen::kroneckerProduct(data_, data_).eval();
    return DensityMatrix(2 * n_qubits_, std::move(sq));
}

PureState basis_state(int n_qubits, uint64_t index) {
    require_dense(n_qubits, "basis_state");
    Vector v = Vector::Zero(int64_t{1} << n_qubits);
    v[static_cast<int64_t>(index)] = 1.0;
    return PureState(n_qubits, std::move(v));
}

PureState ghz_state(int n_qubits) {
    require_dense(n_qubits, "ghz_state");
    Vector v = Vector::Zero(int64_t{1} << n_qubits);
    v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
    return PureState(n_qubits, std::move(v));
}

DensityMatrix maximally_mixed(int n_qubits) {
    require_dense(n_qubits, "maximally_mixed");
    int64_t dim = int64_t{1} << n_qubits;
    return DensityMatrix(n_qubits, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Matrix haar_random_unitary(int n_qubits, uint64_t seed) {
    require_dense(n_qubits, "haar_random_unitary");
    int64_t dim = int64_t{1} << n_qubits;
    Matrix g = gaussian_matrix(dim, dim, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int64_t k = 0; k < dim; k++) {
        Complex d = r(k, k);
        double mag = std::abs(d);
        Complex phase = mag > 0 ? d / mag : Complex(1.0);
        q.col(k) *= phase;
    }
    return q;
}

PureState haar_random_state(int n_qubits, uint64_t seed) {
    require_dense(n_qubits, "haar_random_state");
    int64_t dim = int64_t{1} << n_qubits;
    Vector g = gaussian_matrix(dim, 1, seed).col(0);
    g /= g.norm();
    return PureState(n_qubits, std::move(g));
}

DensityMatrix depolarized_state(const PureState &psi, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("depolarized_state: eps must be in (0, 1], got " + std::to_string(eps) + ".");
    }
    int64_t dim = psi.dim();
    Matrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
    Matrix id = Matrix::Identity(dim, dim);
    Matrix rho = (1.0 - eps) * proj + (eps / static_cast<double>(dim - 1)) * (id - proj);
    return DensityMatrix(psi.n_qubits(), std::move(rho));
}

DensityMatrix random_mixed_state(int n_qubits, uint64_t seed) {
    require_dense(n_qubits, "random_mixed_state");
    int64_t dim = int64_t{1} << n_qubits;
    Matrix g = gaussian_matrix(dim, dim, seed);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Symmetrize away roundoff.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(n_qubits, std::move(rho));
}

}  // namespace shadow
