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

#include "shadow/qcore/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shadow {

namespace {

void check_dims(int64_t dim, const Observable &o) {
    if ((int64_t{1} << o.n_qubits()) != dim) {
        throw std::invalid_argument("Observable acts on " + std::to_string(o.n_qubits()) +
                                    " qubits but the state has dimension " + std::to_string(dim) + ".");
    }
}

Matrix matrix_power(const Matrix &m, int p) {
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    while (p > 0) {
        if (p & 1) {
            result = (result * base).eval();
        }
        p >>= 1;
        if (p) {
            base = (base * base).eval();
        }
    }
    return result;
}

}  // namespace

double purity_exact(const DensityMatrix &rho, int m) {
    if (m < 1) {
        throw std::invalid_argument("purity_exact: m must be >= 1.");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double total = 0;
    for (int64_t k = 0; k < es.eigenvalues().size(); k++) {
        double lam = std::max(0.0, es.eigenvalues()[k]);
        total += std::pow(lam, m);
    }
    return total;
}

double expval_exact(const DensityMatrix &rho, const Observable &o) {
    check_dims(rho.dim(), o);
    double total = 0;
    for (const auto &t : o.terms()) {
        total += t.coefficient() * pauli_trace_product(t.letters(), rho.matrix()).real();
    }
    return total;
}

double mitigated_expval_matrix(const Matrix &rho, const Observable &o, int m) {
    if (m < 1) {
        throw std::invalid_argument("mitigated_expval: m must be >= 1.");
    }
    check_dims(rho.rows(), o);
    Matrix rm = matrix_power(rho, m);
    double denom = rm.trace().real();
    if (std::abs(denom) < 1e-14) {
        throw std::domain_error("mitigated_expval: tr(rho^m) is numerically zero.");
    }
    double num = 0;
    for (const auto &t : o.terms()) {
        num += t.coefficient() * pauli_trace_product(t.letters(), rm).real();
    }
    return num / denom;
}

double mitigated_expval_exact(const DensityMatrix &rho, const Observable &o, int m) {
    return mitigated_expval_matrix(rho.matrix(), o, m);
}

DistillResult dominant_eigenvector_distill(const Matrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("dominant_eigenvector_distill: eigensolver failed.");
    }
    const auto &vals = es.eigenvalues();  // ascending
    int64_t dim = vals.size();
    int64_t top = dim - 1;
    double gap = dim > 1 ? vals[top] - vals[top - 1] : std::numeric_limits<double>::infinity();
    Vector v = es.eigenvectors().col(top);
    for (int64_t i = 0; i < dim; i++) {
        if (std::abs(v[i]) > 1e-8) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            break;
        }
    }
    v /= v.norm();
    int n = 0;
    while ((int64_t{1} << n) < dim) {
        n++;
    }
    return DistillResult{PureState(n, std::move(v)), vals[top], gap, gap < kExactTol};
}

DistillResult dominant_eigenvector_distill(const DensityMatrix &rho) {
    return dominant_eigenvector_distill(rho.matrix());
}

double expval_pure(const PureState &v, const Observable &o) {
    check_dims(v.dim(), o);
    Matrix m = observable_matrix(o);
    return v.amplitudes().dot(m * v.amplitudes()).real();
}

}  // namespace shadow
