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

#include "shadow/qcore/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shadow {

char pauli_char(Pauli p) {
    constexpr char chars[] = {'I', 'X', 'Y', 'Z'};
    return chars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'I':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw std::invalid_argument(std::string("Not a Pauli letter: '") + c + "'.");
    }
}

PauliProduct multiply(Pauli a, Pauli b) {
    if (a == Pauli::I) {
        return {b, 0};
    }
    if (b == Pauli::I) {
        return {a, 0};
    }
    if (a == b) {
        return {Pauli::I, 0};
    }
    int ia = static_cast<int>(a);
    int ib = static_cast<int>(b);
    auto third = static_cast<Pauli>(6 - ia - ib);
    // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {third, cyclic ? 1 : 3};
}

PauliString::PauliString(std::vector<Pauli> letters, double coefficient)
    : letters_(std::move(letters)), coefficient_(coefficient) {
    if (letters_.empty()) {
        throw std::invalid_argument("PauliString needs at least one qubit.");
    }
    if (!std::isfinite(coefficient_)) {
        throw std::invalid_argument("PauliString coefficient must be finite.");
    }
}

static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

PauliString PauliString::parse(std::string_view text) {
    text = trim(text);
    double coef = 1.0;
    auto star = text.find('*');
    if (star != std::string_view::npos) {
        std::string num(trim(text.substr(0, star)));
        size_t used = 0;
        try {
            coef = std::stod(num, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != num.size() || num.empty()) {
            throw std::invalid_argument("Bad Pauli coefficient in '" + std::string(text) + "'.");
        }
        text = trim(text.substr(star + 1));
    } else if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        if (text.front() == '-') {
            coef = -1.0;
        }
        text = trim(text.substr(1));
    }
    if (text.empty()) {
        throw std::invalid_argument("Empty Pauli string.");
    }
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
        letters.push_back(pauli_from_char(c));
    }
    return PauliString(std::move(letters), coef);
}

PauliString PauliString::identity(int n_qubits, double coefficient) {
    if (n_qubits < 1) {
        throw std::invalid_argument("identity: n_qubits must be >= 1.");
    }
    return PauliString(std::vector<Pauli>(n_qubits, Pauli::I), coefficient);
}

int PauliString::weight() const {
    return static_cast<int>(std::count_if(letters_.begin(), letters_.end(), [](Pauli p) { return p != Pauli::I; }));
}

std::vector<int> PauliString::support() const {
    std::vector<int> out;
    for (int k = 0; k < n_qubits(); k++) {
        if (letters_[k] != Pauli::I) {
            out.push_back(k);
        }
    }
    return out;
}

uint64_t PauliString::index() const {
    uint64_t idx = 0;
    for (Pauli p : letters_) {
        idx = idx * 4 + static_cast<uint64_t>(p);
    }
    return idx;
}

PauliString PauliString::from_index(uint64_t index, int n_qubits, double coefficient) {
    std::vector<Pauli> letters(n_qubits);
    for (int k = n_qubits - 1; k >= 0; k--) {
        letters[k] = static_cast<Pauli>(index & 3);
        index >>= 2;
    }
    return PauliString(std::move(letters), coefficient);
}

std::string PauliString::letters_string() const {
    std::string s;
    s.reserve(letters_.size());
    for (Pauli p : letters_) {
        s.push_back(pauli_char(p));
    }
    return s;
}

std::string PauliString::to_string() const {
    if (coefficient_ == 1.0) {
        return letters_string();
    }
    std::ostringstream ss;
    ss.precision(17);
    ss << coefficient_ << "*" << letters_string();
    return ss.str();
}

Observable::Observable(const PauliString &p) : n_qubits_(p.n_qubits()) {
    add(p);
}

Observable::Observable(int n_qubits, const std::vector<PauliString> &terms) : n_qubits_(n_qubits) {
    for (const auto &t : terms) {
        add(t);
    }
}

Observable Observable::parse(std::string_view text) {
    // Split on '+' and on '-' that starts a new term (not part of an exponent like 1e-3).
    std::vector<std::string> pieces;
    std::string cur;
    for (size_t i = 0; i < text.size(); i++) {
        char c = text[i];
        bool exponent_sign = i >= 2 && (text[i - 1] == 'e' || text[i - 1] == 'E') &&
                             (std::isdigit(static_cast<unsigned char>(text[i - 2])) || text[i - 2] == '.');
        if ((c == '+' || c == '-') && !exponent_sign) {
            if (!std::string(trim(cur)).empty()) {
                pieces.push_back(cur);
            }
            cur.clear();
            if (c == '-') {
                cur.push_back('-');
            }
            continue;
        }
        cur.push_back(c);
    }
    if (!std::string(trim(cur)).empty()) {
        pieces.push_back(cur);
    }
    if (pieces.empty()) {
        throw std::invalid_argument("Empty observable.");
    }
    Observable out;
    for (const auto &piece : pieces) {
        std::string_view p = trim(piece);
        // "-0.5*XX": fold a leading minus into the coefficient.
        if (p.size() > 1 && p.front() == '-' && p.find('*') != std::string_view::npos) {
            PauliString inner = PauliString::parse(p.substr(1));
            out.add(PauliString(inner.letters(), -inner.coefficient()));
        } else {
            out.add(PauliString::parse(p));
        }
    }
    return out;
}

void Observable::add(const PauliString &p) {
    if (terms_.empty() && n_qubits_ == 0) {
        n_qubits_ = p.n_qubits();
    }
    if (p.n_qubits() != n_qubits_) {
        throw std::invalid_argument("Observable term has " + std::to_string(p.n_qubits()) + " qubits, expected " +
                                    std::to_string(n_qubits_) + ".");
    }
    for (auto &t : terms_) {
        if (t.letters() == p.letters()) {
            t = PauliString(t.letters(), t.coefficient() + p.coefficient());
            return;
        }
    }
    terms_.push_back(p);
}

int Observable::weight() const {
    int w = 0;
    for (const auto &t : terms_) {
        w = std::max(w, t.weight());
    }
    return w;
}

std::vector<int> Observable::support() const {
    std::vector<bool> used(n_qubits_, false);
    for (const auto &t : terms_) {
        for (int k : t.support()) {
            used[k] = true;
        }
    }
    std::vector<int> out;
    for (int k = 0; k < n_qubits_; k++) {
        if (used[k]) {
            out.push_back(k);
        }
    }
    return out;
}

std::string Observable::to_string() const {
    std::string s;
    for (size_t i = 0; i < terms_.size(); i++) {
        if (i) {
            s += " + ";
        }
        s += terms_[i].to_string();
    }
    return s;
}

Matrix pauli_matrix(const PauliString &p) {
    require_dense(p.n_qubits(), "pauli_matrix");
    // P|b> = phase(b) |b ^ xmask>, built entrywise rather than via Kronecker products.
    const int n = p.n_qubits();
    const int64_t dim = int64_t{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    for (int64_t b = 0; b < dim; b++) {
        Complex amp = p.coefficient();
        int64_t row = b;
        for (int k = 0; k < n; k++) {
            int64_t bit = int64_t{1} << (n - 1 - k);
            bool one = (b & bit) != 0;
            switch (p[k]) {
                case Pauli::I:
                    break;
                case Pauli::X:
                    row ^= bit;
                    break;
                case Pauli::Y:
                    row ^= bit;
                    amp *= one ? Complex(0, -1) : Complex(0, 1);
                    break;
                case Pauli::Z:
                    if (one) {
                        amp = -amp;
                    }
                    break;
            }
        }
        out(row, b) = amp;
    }
    return out;
}

Matrix observable_matrix(const Observable &o) {
    require_dense(o.n_qubits(), "observable_matrix");
    const int64_t dim = int64_t{1} << o.n_qubits();
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto &t : o.terms()) {
        out += pauli_matrix(t);
    }
    return out;
}

Complex pauli_trace_product(const std::vector<Pauli> &letters, const Matrix &m) {
    const int n = static_cast<int>(letters.size());
    const int64_t dim = int64_t{1} << n;
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument("pauli_trace_product: dimension mismatch.");
    }
    // tr(P M) = sum_b <b|P M|b> = sum_b P(b, b') M(b', b) with b' = b ^ xmask.
    int64_t xmask = 0;
    for (int k = 0; k < n; k++) {
        if (letters[k] == Pauli::X || letters[k] == Pauli::Y) {
            xmask |= int64_t{1} << (n - 1 - k);
        }
    }
    Complex acc = 0;
    for (int64_t b = 0; b < dim; b++) {
        int64_t col = b ^ xmask;
        // P(b, col): P|col> = amp |b>.
        Complex amp = 1.0;
        for (int k = 0; k < n; k++) {
            bool one = (col >> (n - 1 - k)) & 1;
            if (letters[k] == Pauli::Y) {
                amp *= one ? Complex(0, -1) : Complex(0, 1);
            } else if (letters[k] == Pauli::Z && one) {
                amp = -amp;
            }
        }
        acc += amp * m(col, b);
    }
    return acc;
}

Observable pauli_decompose(const Matrix &m, double cutoff) {
    const int64_t dim = m.rows();
    int n = 0;
    while ((int64_t{1} << n) < dim) {
        n++;
    }
    if ((int64_t{1} << n) != dim || m.cols() != dim || n == 0) {
        throw std::invalid_argument("pauli_decompose: matrix is not 2^n x 2^n.");
    }
    Observable out(n);
    const uint64_t count = uint64_t{1} << (2 * n);
    const double norm = 1.0 / static_cast<double>(dim);
    for (uint64_t idx = 0; idx < count; idx++) {
        PauliString p = PauliString::from_index(idx, n);
        double c = pauli_trace_product(p.letters(), m).real() * norm;
        if (std::abs(c) > cutoff) {
            out.add(PauliString(p.letters(), c));
        }
    }
    return out;
}

}  // namespace shadow
