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

#include "shadow/bounds/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "shadow/shadows/shadow.hpp"

namespace shadow {

namespace {

/// Letters of o's terms restricted to the support qubits, packed as base-4 local indices.
struct SupportView {
    std::vector<int> support;
    std::unordered_map<uint64_t, double> alpha;  // local index -> coefficient
};

SupportView support_view(const Observable &o) {
    SupportView v;
    v.support = o.support();
    for (const auto &t : o.terms()) {
        uint64_t idx = 0;
        for (int q : v.support) {
            idx = idx * 4 + static_cast<uint64_t>(t[q]);
        }
        v.alpha[idx] += t.coefficient();
    }
    return v;
}

std::vector<Pauli> embed(uint64_t local, const std::vector<int> &support, int n) {
    std::vector<Pauli> letters(n, Pauli::I);
    const int k = static_cast<int>(support.size());
    for (int i = k - 1; i >= 0; i--) {
        letters[support[i]] = static_cast<Pauli>(local & 3);
        local >>= 2;
    }
    return letters;
}

}  // namespace

Observable restricted_observable(const Observable &o, const std::vector<Pauli> &s) {
    const auto support = o.support();
    if (s.size() != support.size()) {
        throw std::invalid_argument("restricted_observable: pattern has " + std::to_string(s.size()) +
                                    " letters but the observable's support has " + std::to_string(support.size()) +
                                    " qubits.");
    }
    for (Pauli p : s) {
        if (p == Pauli::I) {
            throw std::invalid_argument("restricted_observable: pattern letters must be X, Y or Z.");
        }
    }
    Observable out(o.n_qubits());
    for (const auto &t : o.terms()) {
        bool keep = true;
        for (size_t i = 0; i < support.size(); i++) {
            Pauli l = t[support[i]];
            if (l != Pauli::I && l != s[i]) {
                keep = false;
                break;
            }
        }
        if (keep) {
            out.add(PauliString(t.letters(), t.coefficient() * std::pow(3.0, t.weight())));
        }
    }
    return out;
}

UFunctionals u_functionals(const Observable &o, const DensityMatrix &rho) {
    if (o.n_qubits() != rho.n_qubits()) {
        throw std::invalid_argument("u_functionals: observable and state sizes differ.");
    }
    const SupportView view = support_view(o);
    const int k = static_cast<int>(view.support.size());
    if (k > kMaxBoundSupport) {
        throw std::length_error("u_functionals: support of " + std::to_string(k) + " qubits exceeds the limit of " +
                                std::to_string(kMaxBoundSupport) + ".");
    }
    const int n = rho.n_qubits();
    if (k == 0) {
        return {};
    }
    // tr(rho P) for every Pauli on the support.
    const uint64_t n_pauli = uint64_t{1} << (2 * k);
    std::vector<double> ev(n_pauli);
#pragma omp parallel for schedule(static)
    for (int64_t p = 0; p < static_cast<int64_t>(n_pauli); p++) {
        ev[p] = pauli_trace_product(embed(static_cast<uint64_t>(p), view.support, n), rho.matrix()).real();
    }
    double mean = 0;
    for (const auto &[idx, a] : view.alpha) {
        mean += a * ev[idx];
    }

    uint64_t n_patterns = 1;
    for (int i = 0; i < k; i++) {
        n_patterns *= 3;
    }
    const uint64_t dim = uint64_t{1} << k;
    std::vector<double> sq(n_patterns), second(n_patterns);
#pragma omp parallel for schedule(static)
    for (int64_t sidx = 0; sidx < static_cast<int64_t>(n_patterns); sidx++) {
        // letters of pattern s, qubit i of the support at digit (k-1-i)
        std::vector<uint64_t> letter(k);
        uint64_t rest = static_cast<uint64_t>(sidx);
        for (int i = k - 1; i >= 0; i--) {
            letter[i] = rest % 3 + 1;
            rest /= 3;
        }
        std::vector<double> w(dim, 0.0), e(dim, 0.0);
        for (uint64_t mask = 0; mask < dim; mask++) {
            uint64_t idx = 0;
            int weight = 0;
            for (int i = 0; i < k; i++) {
                bool on = (mask >> (k - 1 - i)) & 1;
                idx = idx * 4 + (on ? letter[i] : 0);
                weight += on;
            }
            auto it = view.alpha.find(idx);
            if (it != view.alpha.end()) {
                w[mask] = std::pow(3.0, weight) * it->second;
            }
            e[mask] = ev[idx];
        }
        double a = 0;
        for (uint64_t m = 0; m < dim; m++) {
            a += w[m] * e[m];
        }
        // O_s^2 coefficients: XOR convolution of w with itself.
        std::vector<double> h = w;
        kernels::walsh_hadamard(h);
        for (double &x : h) {
            x *= x;
        }
        kernels::walsh_hadamard(h);
        double b = 0;
        for (uint64_t m = 0; m < dim; m++) {
            b += h[m] / static_cast<double>(dim) * e[m];
        }
        sq[sidx] = a * a;
        second[sidx] = b - a * a;
    }
    double s0 = 0, s1 = 0;
    for (uint64_t i = 0; i < n_patterns; i++) {
        s0 += sq[i];
        s1 += second[i];
    }
    const double norm = static_cast<double>(n_patterns);
    return {s0 / norm - mean * mean, s1 / norm};
}

double u0(const Observable &o, const DensityMatrix &rho) { return u_functionals(o, rho).u0; }

double u1(const Observable &o, const DensityMatrix &rho) { return u_functionals(o, rho).u1; }

double var_bound_linear(const Observable &o, const DensityMatrix &rho, int n_s) {
    if (n_s < 1) {
        throw std::invalid_argument("var_bound_linear: N_S must be >= 1.");
    }
    auto u = u_functionals(o, rho);
    return u.u0 + u.u1 / n_s;
}

Observable symmetrized_product(const Observable &o, const DensityMatrix &rho) {
    Matrix om = observable_matrix(o);
    Matrix a = (rho.matrix() * om + om * rho.matrix()) / 2.0;
    return pauli_decompose(a, 1e-12);
}

Observable swap_observable(const Observable &o) {
    const int n = o.n_qubits();
    require_dense(2 * n, "swap_observable");
    const int64_t d = int64_t{1} << n;
    Matrix om = observable_matrix(o);
    // V (I x O): row (a, b) of the product is row (b, a) of I x O, which is nonzero only in
    // the block of columns (b, .) with entries O(a, .).
    Matrix m = Matrix::Zero(d * d, d * d);
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            for (int64_t c = 0; c < d; c++) {
                m(a * d + b, b * d + c) = om(a, c);
            }
        }
    }
    Matrix sym = (m + m.adjoint()) / 2.0;
    return pauli_decompose(sym, 1e-12);
}

double var_bound_o2(const Observable &o, const DensityMatrix &rho, int n_u, int n_s) {
    if (n_u < 2 || n_s < 1) {
        throw std::invalid_argument("var_bound_o2: needs N_U >= 2 and N_S >= 1.");
    }
    if (rho.n_qubits() > kMaxPairBoundQubits) {
        throw std::length_error("var_bound_o2: the 3^(2n) enumeration is limited to n <= " +
                                std::to_string(kMaxPairBoundQubits) + ".");
    }
    if (o.n_qubits() != rho.n_qubits()) {
        throw std::invalid_argument("var_bound_o2: observable and state sizes differ.");
    }
    auto ua = u_functionals(symmetrized_product(o, rho), rho);
    auto u2 = u_functionals(swap_observable(o), rho.tensor_square());
    const double nu = n_u;
    return 4.0 / nu * (ua.u0 + ua.u1 / n_s) + 4.0 / (nu * nu) * (u2.u0 + u2.u1 / n_s);
}

double var_bound_s2(const DensityMatrix &rho, int n_u, int n_s) {
    return var_bound_o2(Observable::identity(rho.n_qubits()), rho, n_u, n_s);
}

}  // namespace shadow
