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

#include "shadow/shadows/shadow.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "shadow/stats/stats.hpp"

namespace shadow {

namespace {

constexpr int64_t kPairBlock = 8;
constexpr int64_t kIndexBlock = 4096;

/// Fixed-block reduction: block sums land in a vector and are added in block order, so the
/// result does not depend on the number of threads.
template <class F>
double blocked_sum(int64_t count, int64_t block, F &&f) {
    if (count <= 0) {
        return 0.0;
    }
    const int64_t n_blocks = (count + block - 1) / block;
    std::vector<double> partial(n_blocks, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int64_t b = 0; b < n_blocks; b++) {
        partial[b] = f(b * block, std::min(count, (b + 1) * block));
    }
    double total = 0;
    for (double p : partial) {
        total += p;
    }
    return total;
}

double pow3(int k) {
    double r = 1;
    for (int i = 0; i < k; i++) {
        r *= 3;
    }
    return r;
}

void check_observable(const ShadowEnsemble &ens, const Observable &o) {
    if (o.n_qubits() != ens.n_qubits()) {
        throw std::invalid_argument("Observable acts on " + std::to_string(o.n_qubits()) +
                                    " qubits but the ensemble has " + std::to_string(ens.n_qubits()) + ".");
    }
}

void check_pairs(const ShadowEnsemble &ens) {
    if (ens.n_settings() < 2) {
        throw std::invalid_argument("The pairwise estimator needs N_U >= 2, got " +
                                    std::to_string(ens.n_settings()) + ".");
    }
}

/// True when every non-identity letter of p equals the setting's letter on that qubit.
bool compatible(const std::vector<Pauli> &letters, const BasisSetting &s) {
    for (size_t k = 0; k < letters.size(); k++) {
        if (letters[k] != Pauli::I && letters[k] != s.bases[k]) {
            return false;
        }
    }
    return true;
}

uint64_t letters_mask(const std::vector<Pauli> &letters) {
    const int n = static_cast<int>(letters.size());
    uint64_t m = 0;
    for (int k = 0; k < n; k++) {
        if (letters[k] != Pauli::I) {
            m |= uint64_t{1} << (n - 1 - k);
        }
    }
    return m;
}

uint64_t letters_index(const std::vector<Pauli> &letters) {
    uint64_t idx = 0;
    for (Pauli p : letters) {
        idx = idx * 4 + static_cast<uint64_t>(p);
    }
    return idx;
}

/// Pauli-basis index of P_{j,mask} for every mask.
std::vector<uint64_t> family_indices(const BasisSetting &s) {
    const int n = s.n_qubits();
    std::vector<uint64_t> idx(size_t{1} << n, 0);
    for (uint64_t mask = 1; mask < idx.size(); mask++) {
        int pos = std::countr_zero(mask);
        int k = n - 1 - pos;
        idx[mask] = idx[mask & (mask - 1)] + (static_cast<uint64_t>(s.bases[k]) << (2 * pos));
    }
    return idx;
}

/// Real part of the phase i^e of P*R for Pauli indices p, r: +1, -1, or 0 when e is odd.
int product_phase_real(uint64_t p, uint64_t r, int n) {
    int e = 0;
    for (int d = 0; d < n; d++) {
        auto a = static_cast<Pauli>((p >> (2 * d)) & 3);
        auto b = static_cast<Pauli>((r >> (2 * d)) & 3);
        e += multiply(a, b).phase;
    }
    e &= 3;
    return e == 0 ? 1 : e == 2 ? -1 : 0;
}

std::vector<double> accumulate_pauli_sum(const ShadowEnsemble &ens) {
    const int n = ens.n_qubits();
    std::vector<double> s(size_t{1} << (2 * n), 0.0);
    for (int j = 0; j < ens.n_settings(); j++) {
        const auto &c = ens.coefficients(j);
        auto idx = family_indices(ens.records()[j].setting);
        for (size_t m = 0; m < c.size(); m++) {
            s[idx[m]] += c[m];
        }
    }
    return s;
}

/// sum_{j,j'} tr(rho_hat_j R rho_hat_j') for a unit-coefficient Pauli R.
double full_trace(const std::vector<double> &s, const std::vector<Pauli> &r_letters, int n, bool parallel) {
    const uint64_t r = letters_index(r_letters);
    const int64_t count = static_cast<int64_t>(s.size());
    auto range = [&](int64_t lo, int64_t hi) {
        double acc = 0;
        for (int64_t p = lo; p < hi; p++) {
            if (s[p] == 0.0) {
                continue;
            }
            int ph = product_phase_real(static_cast<uint64_t>(p), r, n);
            if (ph != 0) {
                acc += ph * s[p] * s[static_cast<uint64_t>(p) ^ r];
            }
        }
        return acc;
    };
    double total = parallel ? blocked_sum(count, kIndexBlock, range) : range(0, count);
    return total / static_cast<double>(int64_t{1} << n);
}

/// sum_j tr(rho_hat_j R rho_hat_j).
double diagonal_trace(const ShadowEnsemble &ens, const std::vector<Pauli> &r_letters, bool parallel) {
    const int n = ens.n_qubits();
    const uint64_t rmask = letters_mask(r_letters);
    auto range = [&](int64_t lo, int64_t hi) {
        double acc = 0;
        for (int64_t j = lo; j < hi; j++) {
            if (!compatible(r_letters, ens.records()[j].setting)) {
                continue;
            }
            const auto &c = ens.coefficients(static_cast<int>(j));
            for (size_t m = 0; m < c.size(); m++) {
                acc += c[m] * c[m ^ rmask];
            }
        }
        return acc;
    };
    double total = parallel ? blocked_sum(ens.n_settings(), kPairBlock, range) : range(0, ens.n_settings());
    return total / static_cast<double>(int64_t{1} << n);
}

double pair_norm(const ShadowEnsemble &ens) {
    const double nu = ens.n_settings();
    return nu * (nu - 1);
}

/// Distinct outcomes of a record with multiplicities.
std::vector<std::pair<uint32_t, double>> outcome_histogram(const MeasurementRecord &rec) {
    std::vector<uint32_t> sorted = rec.outcomes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<uint32_t, double>> out;
    for (uint32_t o : sorted) {
        if (!out.empty() && out.back().first == o) {
            out.back().second += 1;
        } else {
            out.emplace_back(o, 1.0);
        }
    }
    return out;
}

using FactorTable = std::array<Complex, 3 * 2 * 4 * 3 * 2>;

FactorTable build_factor_table() {
    FactorTable t{};
    for (int pa = 1; pa <= 3; pa++) {
        for (int ba = 0; ba < 2; ba++) {
            for (int o = 0; o < 4; o++) {
                for (int pb = 1; pb <= 3; pb++) {
                    for (int bb = 0; bb < 2; bb++) {
                        Matrix sa = pauli_matrix(PauliString({static_cast<Pauli>(pa)}));
                        Matrix so = pauli_matrix(PauliString({static_cast<Pauli>(o)}));
                        Matrix sb = pauli_matrix(PauliString({static_cast<Pauli>(pb)}));
                        Matrix id = Matrix::Identity(2, 2);
                        Matrix fa = (id + 3.0 * (ba ? -1.0 : 1.0) * sa) / 2.0;
                        Matrix fb = (id + 3.0 * (bb ? -1.0 : 1.0) * sb) / 2.0;
                        t[(((pa - 1) * 2 + ba) * 4 + o) * 6 + (pb - 1) * 2 + bb] = (fa * so * fb).trace();
                    }
                }
            }
        }
    }
    return t;
}

const FactorTable &factor_table() {
    static const FactorTable table = build_factor_table();
    return table;
}

/// Re tr(rho_hat_a R rho_hat_b) from shot histograms.
double factorized_pair(const MeasurementRecord &a, const std::vector<std::pair<uint32_t, double>> &ha,
                       const MeasurementRecord &b, const std::vector<std::pair<uint32_t, double>> &hb,
                       const std::vector<Pauli> &r, double inv_shots2) {
    const int n = a.n_qubits();
    const auto &table = factor_table();
    // Per-qubit 2x2 kernel for this pair of settings.
    std::vector<std::array<Complex, 4>> qk(n);
    for (int k = 0; k < n; k++) {
        int pa = static_cast<int>(a.setting.bases[k]) - 1;
        int pb = static_cast<int>(b.setting.bases[k]) - 1;
        int o = static_cast<int>(r[k]);
        for (int ba = 0; ba < 2; ba++) {
            for (int bb = 0; bb < 2; bb++) {
                qk[k][ba * 2 + bb] = table[((pa * 2 + ba) * 4 + o) * 6 + pb * 2 + bb];
            }
        }
    }
    double acc = 0;
    for (const auto &[oa, wa] : ha) {
        for (const auto &[ob, wb] : hb) {
            Complex prod = 1.0;
            for (int k = 0; k < n; k++) {
                int sh = n - 1 - k;
                prod *= qk[k][((oa >> sh) & 1) * 2 + ((ob >> sh) & 1)];
            }
            acc += wa * wb * prod.real();
        }
    }
    return acc * inv_shots2;
}

}  // namespace

Matrix snapshot_matrix(const Snapshot &s) {
    const int n = s.setting.n_qubits();
    require_dense(n, "snapshot_matrix");
    Matrix out = Matrix::Ones(1, 1);
    for (int k = 0; k < n; k++) {
        int bit = (s.bits >> (n - 1 - k)) & 1;
        Matrix u = basis_rotation(s.setting.bases[k]);
        Matrix proj = u.row(bit).adjoint() * u.row(bit);
        Matrix factor = 3.0 * proj - Matrix::Identity(2, 2);
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (int64_t r = 0; r < out.rows(); r++) {
            for (int64_t c = 0; c < out.cols(); c++) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * factor;
            }
        }
        out = std::move(next);
    }
    return out;
}

ShadowEnsemble::ShadowEnsemble(std::vector<MeasurementRecord> records) : records_(std::move(records)) {
    if (records_.empty()) {
        throw std::invalid_argument("ShadowEnsemble needs at least one record.");
    }
    n_qubits_ = records_[0].n_qubits();
    n_shots_ = records_[0].n_shots();
    if (n_shots_ < 1) {
        throw std::invalid_argument("Records need at least one shot.");
    }
    for (size_t j = 0; j < records_.size(); j++) {
        if (records_[j].n_qubits() != n_qubits_ || records_[j].n_shots() != n_shots_) {
            throw std::invalid_argument("Record " + std::to_string(j) + " has (n, N_S) = (" +
                                        std::to_string(records_[j].n_qubits()) + ", " +
                                        std::to_string(records_[j].n_shots()) + "), expected (" +
                                        std::to_string(n_qubits_) + ", " + std::to_string(n_shots_) + ").");
        }
    }
}

void ShadowEnsemble::ensure_coefficients() const {
    std::call_once(coeff_once_, [this] {
        if (n_qubits_ > kMaxCoefficientQubits) {
            throw std::length_error("Shadow coefficients need n <= " + std::to_string(kMaxCoefficientQubits) + ".");
        }
        const size_t dim = size_t{1} << n_qubits_;
        std::vector<double> w(dim);
        for (size_t m = 0; m < dim; m++) {
            w[m] = pow3(std::popcount(m));
        }
        std::vector<std::vector<double>> all(records_.size());
        for (size_t j = 0; j < records_.size(); j++) {
            auto c = empirical_distribution(records_[j]);
            kernels::walsh_hadamard(c);
            for (size_t m = 0; m < dim; m++) {
                c[m] *= w[m];
            }
            all[j] = std::move(c);
        }
        coeffs_ = std::move(all);
    });
}

const std::vector<double> &ShadowEnsemble::coefficients(int j) const {
    ensure_coefficients();
    return coeffs_.at(j);
}

void ShadowEnsemble::ensure_dense() const {
    std::call_once(dense_once_, [this] {
        require_dense(n_qubits_, "averaged_snapshot");
        const int n = n_qubits_;
        const int64_t dim = int64_t{1} << n;
        const double inv_dim = 1.0 / static_cast<double>(dim);
        std::vector<Matrix> all(records_.size());
        for (size_t j = 0; j < records_.size(); j++) {
            const auto &c = coefficients(static_cast<int>(j));
            const auto &bases = records_[j].setting.bases;
            uint64_t xm = 0;
            uint64_t zm = 0;
            uint64_t ym = 0;
            for (int k = 0; k < n; k++) {
                uint64_t bit = uint64_t{1} << (n - 1 - k);
                if (bases[k] != Pauli::Z) {
                    xm |= bit;
                }
                if (bases[k] != Pauli::X) {
                    zm |= bit;
                }
                if (bases[k] == Pauli::Y) {
                    ym |= bit;
                }
            }
            Matrix m = Matrix::Zero(dim, dim);
            for (uint64_t mask = 0; mask < static_cast<uint64_t>(dim); mask++) {
                if (c[mask] == 0.0) {
                    continue;
                }
                // P|x> = i^{#Y} (-1)^{popcount(x & zmask)} |x ^ xmask> on the masked qubits.
                const uint64_t flip = mask & xm;
                const uint64_t zs = mask & zm;
                static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
                const Complex base = kIPow[std::popcount(mask & ym) & 3] * (c[mask] * inv_dim);
                for (uint64_t x = 0; x < static_cast<uint64_t>(dim); x++) {
                    m(x ^ flip, x) += (std::popcount(x & zs) & 1) ? -base : base;
                }
            }
            all[j] = std::move(m);
        }
        dense_ = std::move(all);
    });
}

const Matrix &ShadowEnsemble::averaged_snapshot(int j) const {
    ensure_dense();
    return dense_.at(j);
}

Matrix mean_state(const ShadowEnsemble &ens) {
    const int64_t dim = int64_t{1} << ens.n_qubits();
    require_dense(ens.n_qubits(), "mean_state");
    Matrix sum = Matrix::Zero(dim, dim);
    for (int j = 0; j < ens.n_settings(); j++) {
        sum += ens.averaged_snapshot(j);
    }
    return sum / static_cast<double>(ens.n_settings());
}

double estimate_linear(const ShadowEnsemble &ens, const Observable &o) {
    check_observable(ens, o);
    double total = 0;
    for (const auto &t : o.terms()) {
        const uint64_t mask = letters_mask(t.letters());
        const double scale = pow3(t.weight());
        double term = 0;
        for (const auto &rec : ens.records()) {
            if (!compatible(t.letters(), rec.setting)) {
                continue;
            }
            int64_t signed_count = 0;
            for (uint32_t b : rec.outcomes) {
                signed_count += (std::popcount(b & mask) & 1) ? -1 : 1;
            }
            term += static_cast<double>(signed_count);
        }
        total += t.coefficient() * scale * term / (static_cast<double>(ens.n_settings()) * ens.n_shots());
    }
    return total;
}

namespace kernels {

void walsh_hadamard(std::vector<double> &v) {
    const size_t n = v.size();
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t i = 0; i < n; i += 2 * h) {
            for (size_t j = i; j < i + h; j++) {
                double a = v[j];
                double b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

Complex factor_kernel(Pauli basis_a, int bit_a, Pauli o, Pauli basis_b, int bit_b) {
    if (basis_a == Pauli::I || basis_b == Pauli::I) {
        throw std::invalid_argument("factor_kernel: measurement bases must be X, Y or Z.");
    }
    int pa = static_cast<int>(basis_a) - 1;
    int pb = static_cast<int>(basis_b) - 1;
    return factor_table()[((pa * 2 + bit_a) * 4 + static_cast<int>(o)) * 6 + pb * 2 + bit_b];
}

double o2_pauli_sum(const ShadowEnsemble &ens, const Observable &o, bool parallel) {
    check_pairs(ens);
    check_observable(ens, o);
    const int n = ens.n_qubits();
    if (n > kPauliSumMaxQubits) {
        throw std::length_error("The Pauli-sum path needs n <= " + std::to_string(kPauliSumMaxQubits) + ".");
    }
    auto s = accumulate_pauli_sum(ens);
    double total = 0;
    for (const auto &t : o.terms()) {
        double full = full_trace(s, t.letters(), n, parallel);
        double diag = diagonal_trace(ens, t.letters(), parallel);
        total += t.coefficient() * (full - diag);
    }
    return total / pair_norm(ens);
}

double o2_dense_pairwise(const ShadowEnsemble &ens, const Observable &o, bool parallel) {
    check_pairs(ens);
    check_observable(ens, o);
    require_dense(ens.n_qubits(), "dense pairwise estimator");
    const Matrix om = observable_matrix(o);
    const int64_t nu = ens.n_settings();
    std::vector<Matrix> right(nu);   // O rho_hat_j'
    std::vector<Matrix> left_t(nu);  // rho_hat_j^T
    for (int64_t j = 0; j < nu; j++) {
        right[j] = om * ens.averaged_snapshot(static_cast<int>(j));
        left_t[j] = ens.averaged_snapshot(static_cast<int>(j)).transpose();
    }
    double total;
    if (!parallel) {
        total = 0;
        for (int64_t j = 0; j < nu; j++) {
            for (int64_t jp = 0; jp < nu; jp++) {
                if (j != jp) {
                    total += left_t[j].cwiseProduct(right[jp]).sum().real();
                }
            }
        }
    } else {
        // Re tr(A O B) is symmetric in (A, B) for Hermitian A, B, O.
        total = 2.0 * blocked_sum(nu, kPairBlock, [&](int64_t lo, int64_t hi) {
            double acc = 0;
            for (int64_t j = lo; j < hi; j++) {
                for (int64_t jp = j + 1; jp < nu; jp++) {
                    acc += left_t[j].cwiseProduct(right[jp]).sum().real();
                }
            }
            return acc;
        });
    }
    return total / pair_norm(ens);
}

double o2_factorized(const ShadowEnsemble &ens, const Observable &o, bool parallel) {
    check_pairs(ens);
    check_observable(ens, o);
    const int64_t nu = ens.n_settings();
    const auto &recs = ens.records();
    std::vector<std::vector<std::pair<uint32_t, double>>> hist(nu);
    for (int64_t j = 0; j < nu; j++) {
        hist[j] = outcome_histogram(recs[j]);
    }
    const double inv2 = 1.0 / (static_cast<double>(ens.n_shots()) * ens.n_shots());
    double total = 0;
    for (const auto &t : o.terms()) {
        double term;
        if (!parallel) {
            term = 0;
            for (int64_t j = 0; j < nu; j++) {
                for (int64_t jp = 0; jp < nu; jp++) {
                    if (j != jp) {
                        term += factorized_pair(recs[j], hist[j], recs[jp], hist[jp], t.letters(), inv2);
                    }
                }
            }
        } else {
            term = 2.0 * blocked_sum(nu, kPairBlock, [&](int64_t lo, int64_t hi) {
                double acc = 0;
                for (int64_t j = lo; j < hi; j++) {
                    for (int64_t jp = j + 1; jp < nu; jp++) {
                        acc += factorized_pair(recs[j], hist[j], recs[jp], hist[jp], t.letters(), inv2);
                    }
                }
                return acc;
            });
        }
        total += t.coefficient() * term;
    }
    return total / pair_norm(ens);
}

}  // namespace kernels

double estimate_o2(const ShadowEnsemble &ens, const Observable &o, const EstimateOptions &opts) {
    switch (opts.strategy) {
        case O2Strategy::PauliSum:
            return kernels::o2_pauli_sum(ens, o, opts.parallel);
        case O2Strategy::DensePairwise:
            return kernels::o2_dense_pairwise(ens, o, opts.parallel);
        case O2Strategy::Factorized:
            return kernels::o2_factorized(ens, o, opts.parallel);
        case O2Strategy::Auto:
            break;
    }
    if (ens.n_qubits() <= kPauliSumMaxQubits) {
        return kernels::o2_pauli_sum(ens, o, opts.parallel);
    }
    return kernels::o2_factorized(ens, o, opts.parallel);
}

double estimate_s2(const ShadowEnsemble &ens, const EstimateOptions &opts) {
    return estimate_o2(ens, Observable::identity(ens.n_qubits()), opts);
}

std::vector<double> estimate_o2_batch(const ShadowEnsemble &ens, const std::vector<Observable> &os,
                                      const EstimateOptions &opts) {
    const int n = ens.n_qubits();
    bool pauli_sum = opts.strategy == O2Strategy::PauliSum ||
                     (opts.strategy == O2Strategy::Auto && n <= kPauliSumMaxQubits);
    std::vector<double> out;
    out.reserve(os.size() + 1);
    if (!pauli_sum) {
        out.push_back(estimate_s2(ens, opts));
        for (const auto &o : os) {
            out.push_back(estimate_o2(ens, o, opts));
        }
        return out;
    }
    check_pairs(ens);
    for (const auto &o : os) {
        check_observable(ens, o);
    }
    if (n > kPauliSumMaxQubits) {
        throw std::length_error("The Pauli-sum path needs n <= " + std::to_string(kPauliSumMaxQubits) + ".");
    }
    auto s = accumulate_pauli_sum(ens);
    auto eval = [&](const Observable &o) {
        double total = 0;
        for (const auto &t : o.terms()) {
            total += t.coefficient() *
                     (full_trace(s, t.letters(), n, opts.parallel) - diagonal_trace(ens, t.letters(), opts.parallel));
        }
        return total / pair_norm(ens);
    };
    out.push_back(eval(Observable::identity(n)));
    for (const auto &o : os) {
        out.push_back(eval(o));
    }
    return out;
}

DegenerateDenominator::DegenerateDenominator(double s2_value, double floor)
    : std::domain_error("Purity estimate s2 = " + std::to_string(s2_value) + " is below the floor " +
                        std::to_string(floor) + "; the mitigated ratio is undefined."),
      s2(s2_value) {}

MitigatedEstimate mitigated_estimate(const ShadowEnsemble &ens, const Observable &o, const RatioOptions &opts) {
    auto both = estimate_o2_batch(ens, {o}, opts.estimate);
    MitigatedEstimate e{};
    e.o1 = estimate_linear(ens, o);
    e.s2 = both[0];
    e.o2 = both[1];
    e.denominator = e.s2;
    if (opts.prior) {
        e.denominator = bayes_purity(e.s2, opts.prior->mu0, opts.prior->alpha, ens.n_settings());
    }
    if (!(e.denominator >= opts.floor)) {
        throw DegenerateDenominator(e.denominator, opts.floor);
    }
    e.ratio = e.o2 / e.denominator;
    return e;
}

double mitigated_ratio(const ShadowEnsemble &ens, const Observable &o, const RatioOptions &opts) {
    return mitigated_estimate(ens, o, opts).ratio;
}

}  // namespace shadow
