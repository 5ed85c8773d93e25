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

#include "shadow/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "shadow/qcore/exact.hpp"

namespace shadow {

uint64_t uniform_index(std::mt19937_64 &rng, uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_index: empty range.");
    }
    // Rejection keeps the draw exactly uniform.
    const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

namespace {

double mitigated_target(const DensityMatrix &rho, const Observable &o) { return mitigated_expval_exact(rho, o, 2); }

/// Runs f(r) for r in [0, count) and returns the values in index order.
template <class F>
std::vector<double> indexed_map(int count, bool parallel, F &&f) {
    std::vector<double> out(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int r = 0; r < count; r++) {
        out[r] = f(r);
    }
    return out;
}

ResampleResult summarize(std::vector<double> values) {
    ResampleResult res;
    double total = 0;
    int used = 0;
    for (double v : values) {
        if (std::isnan(v)) {
            res.degenerate++;
        } else {
            total += v;
            used++;
        }
    }
    res.mean_delta2 = used > 0 ? total / used : std::numeric_limits<double>::quiet_NaN();
    res.delta2 = std::move(values);
    return res;
}

double squared_error_or_nan(const ShadowEnsemble &ens, double target, const Observable &o, const RatioOptions &opts) {
    try {
        double r = mitigated_ratio(ens, o, opts);
        return (target - r) * (target - r);
    } catch (const DegenerateDenominator &) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

double bayes_purity(double s2, double mu0, double alpha, int n_u) {
    if (alpha < 0 || !std::isfinite(alpha)) {
        throw std::invalid_argument("bayes_purity: alpha must be a finite value >= 0.");
    }
    if (n_u < 1) {
        throw std::invalid_argument("bayes_purity: N_U must be >= 1.");
    }
    const double lam = alpha / n_u;
    return (s2 + lam * mu0) / (1.0 + lam);
}

EmpiricalPool build_pool(const DensityMatrix &rho, int pool_nu, int pool_ns, uint64_t seed, double p_det) {
    if (pool_nu < 2 || pool_ns < 1) {
        throw std::invalid_argument("build_pool: needs pool_nu >= 2 and pool_ns >= 1.");
    }
    OutcomeSampler sampler(rho, p_det);
    auto settings = sample_settings(rho.n_qubits(), pool_nu, derive_seed(seed, 0));
    EmpiricalPool pool;
    pool.n_qubits = rho.n_qubits();
    pool.pool_nu = pool_nu;
    pool.pool_ns = pool_ns;
    pool.seed = seed;
    pool.records = sample_records(sampler, settings, pool_ns, derive_seed(seed, 1));
    return pool;
}

EmpiricalPool pool_from_records(std::vector<MeasurementRecord> records, uint64_t seed) {
    if (records.empty()) {
        throw DataError("Empty record set.");
    }
    EmpiricalPool pool;
    pool.n_qubits = records[0].n_qubits();
    pool.pool_ns = records[0].n_shots();
    for (size_t j = 0; j < records.size(); j++) {
        if (records[j].n_qubits() != pool.n_qubits || records[j].n_shots() != pool.pool_ns) {
            throw DataError("Record " + std::to_string(j) + " does not match the first record's n or N_S.");
        }
    }
    pool.pool_nu = static_cast<int>(records.size());
    pool.seed = seed;
    pool.records = std::move(records);
    return pool;
}

ShadowEnsemble draw_resample(const EmpiricalPool &pool, int n_u, int n_s, uint64_t seed) {
    if (n_u < 2 || n_u > pool.pool_nu) {
        throw std::invalid_argument("Resample N_U = " + std::to_string(n_u) + " must be in [2, " +
                                    std::to_string(pool.pool_nu) + "].");
    }
    if (n_s < 1 || n_s > pool.pool_ns) {
        throw std::invalid_argument("Resample N_S = " + std::to_string(n_s) + " must be in [1, " +
                                    std::to_string(pool.pool_ns) + "].");
    }
    std::mt19937_64 rng(seed);
    std::vector<int> order(pool.pool_nu);
    std::iota(order.begin(), order.end(), 0);
    std::vector<MeasurementRecord> picked(n_u);
    for (int j = 0; j < n_u; j++) {
        auto k = j + static_cast<int>(uniform_index(rng, static_cast<uint64_t>(pool.pool_nu - j)));
        std::swap(order[j], order[k]);
        const auto &src = pool.records[order[j]];
        auto &dst = picked[j];
        dst.setting = src.setting;
        dst.source = src.source;
        dst.outcomes.resize(n_s);
        for (auto &o : dst.outcomes) {
            o = src.outcomes[uniform_index(rng, static_cast<uint64_t>(pool.pool_ns))];
        }
    }
    return ShadowEnsemble(std::move(picked));
}

ResampleResult resample_delta2(const EmpiricalPool &pool, double target, const Observable &o, int n_u, int n_s,
                               int n_resamples, uint64_t seed, const ResampleOptions &opts) {
    if (n_resamples < 1) {
        throw std::invalid_argument("resample_delta2: n_resamples must be >= 1.");
    }
    if (n_u > pool.pool_nu || n_s > pool.pool_ns) {
        throw std::invalid_argument("Resample size (" + std::to_string(n_u) + ", " + std::to_string(n_s) +
                                    ") exceeds the pool (" + std::to_string(pool.pool_nu) + ", " +
                                    std::to_string(pool.pool_ns) + ").");
    }
    RatioOptions ratio = opts.ratio;
    // Parallelism lives at the resample level. Kernels always run serially so the values do
    // not depend on opts.parallel.
    ratio.estimate.parallel = false;
    auto values = indexed_map(n_resamples, opts.parallel, [&](int r) {
        auto ens = draw_resample(pool, n_u, n_s, derive_seed(seed, static_cast<uint64_t>(r)));
        return squared_error_or_nan(ens, target, o, ratio);
    });
    return summarize(std::move(values));
}

ResampleResult resample_delta2(const EmpiricalPool &pool, const DensityMatrix &rho_exact, const Observable &o,
                               int n_u, int n_s, int n_resamples, uint64_t seed, const ResampleOptions &opts) {
    return resample_delta2(pool, mitigated_target(rho_exact, o), o, n_u, n_s, n_resamples, seed, opts);
}

std::pair<double, double> mean_and_std(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean_and_std: no values.");
    }
    double mean = 0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) {
        var += (mean - v) * (mean - v);
    }
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

MseReport aggregate_over_states(const std::function<StateSample(int)> &factory, int n_states, const Observable &o,
                                const AggregateConfig &cfg, uint64_t seed) {
    if (n_states < 2) {
        throw std::invalid_argument("aggregate_over_states: needs at least 2 states.");
    }
    if (cfg.grid.empty()) {
        throw std::invalid_argument("aggregate_over_states: empty (N_U, N_S) grid.");
    }
    const size_t cells = cfg.grid.size();
    std::vector<std::vector<double>> per_cell(cells, std::vector<double>(n_states));
    for (int r = 0; r < n_states; r++) {
        StateSample st = factory(r);
        auto pool = build_pool(st.rho, cfg.pool_nu, cfg.pool_ns, derive_seed(seed, st.seed), cfg.p_det);
        const double target = mitigated_target(st.rho, o);
        for (size_t c = 0; c < cells; c++) {
            auto [nu, ns] = cfg.grid[c];
            auto res = resample_delta2(pool, target, o, nu, ns, cfg.n_resamples, derive_seed(seed, st.seed, c + 1),
                                       cfg.resample);
            per_cell[c][r] = res.mean_delta2;
        }
    }
    MseReport report;
    for (size_t c = 0; c < cells; c++) {
        auto [mean, sd] = mean_and_std(per_cell[c]);
        report.rows.push_back(MseRow{cfg.grid[c].first, cfg.grid[c].second, mean, sd, cfg.n_resamples, n_states,
                                     o.to_string()});
    }
    return report;
}

void MseReport::write_csv(std::ostream &out) const {
    out << "observable,n_u,n_s,mean_delta2,std_delta2,n_resamples,n_states\n";
    out << std::setprecision(17);
    for (const auto &r : rows) {
        out << r.label << "," << r.n_u << "," << r.n_s << "," << r.mean_delta2 << "," << r.std_delta2 << ","
            << r.n_resamples << "," << r.n_states << "\n";
    }
}

void MseReport::write_csv(const std::string &path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("Cannot open " + path + " for writing.");
    }
    write_csv(f);
}

MseReport MseReport::read_csv(std::istream &in) {
    MseReport rep;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) {
        throw DataError("MSE CSV is empty.");
    }
    line_no++;
    if (line != "observable,n_u,n_s,mean_delta2,std_delta2,n_resamples,n_states") {
        throw DataError("line 1: unexpected MSE CSV header.");
    }
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != 7) {
            throw DataError("line " + std::to_string(line_no) + ": expected 7 fields, found " +
                            std::to_string(f.size()) + ".");
        }
        try {
            MseRow r;
            r.label = f[0];
            r.n_u = std::stoi(f[1]);
            r.n_s = std::stoi(f[2]);
            r.mean_delta2 = std::stod(f[3]);
            r.std_delta2 = std::stod(f[4]);
            r.n_resamples = std::stoi(f[5]);
            r.n_states = std::stoi(f[6]);
            if (r.mean_delta2 < 0 || r.std_delta2 < 0) {
                throw DataError("negative MSE");
            }
            rep.rows.push_back(std::move(r));
        } catch (const std::exception &e) {
            throw DataError("line " + std::to_string(line_no) + ": bad field (" + e.what() + ").");
        }
    }
    return rep;
}

MseReport MseReport::read_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw DataError("Cannot open MSE CSV " + path + ".");
    }
    return read_csv(f);
}

GammaFit fit_exponent(std::span<const int> n_qubits, std::span<const double> n_settings) {
    if (n_qubits.size() != n_settings.size()) {
        throw std::invalid_argument("fit_exponent: length mismatch.");
    }
    std::vector<int> distinct(n_qubits.begin(), n_qubits.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        throw std::invalid_argument("fit_exponent: needs at least 3 distinct qubit counts.");
    }
    const double m = static_cast<double>(n_qubits.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n_qubits.size(); i++) {
        if (!(n_settings[i] > 0)) {
            throw std::invalid_argument("fit_exponent: N_U values must be positive.");
        }
        sx += n_qubits[i];
        sy += std::log2(n_settings[i]);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n_qubits.size(); i++) {
        double dx = n_qubits[i] - mx;
        sxx += dx * dx;
        sxy += dx * (std::log2(n_settings[i]) - my);
    }
    GammaFit fit;
    fit.gamma = sxy / sxx;
    fit.c = std::exp2(my - fit.gamma * mx);
    return fit;
}

std::optional<int> required_settings(const std::function<double(int)> &delta2_at, double target, int lo, int hi) {
    if (lo < 2 || hi < lo) {
        throw std::invalid_argument("required_settings: needs 2 <= lo <= hi.");
    }
    if (!(delta2_at(hi) <= target)) {
        return std::nullopt;
    }
    if (delta2_at(lo) <= target) {
        return lo;
    }
    // Invariant: lo misses, hi meets.
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (delta2_at(mid) <= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double simulated_delta2(const OutcomeSampler &sampler, double target, const Observable &o, int n_u, int n_s,
                        int n_reps, uint64_t seed, const ResampleOptions &opts) {
    RatioOptions ratio = opts.ratio;
    ratio.estimate.parallel = false;
    auto values = indexed_map(n_reps, opts.parallel, [&](int r) {
        auto settings = sample_settings(sampler.n_qubits(), n_u, derive_seed(seed, static_cast<uint64_t>(r), 0));
        ShadowEnsemble ens(sample_records(sampler, settings, n_s, derive_seed(seed, static_cast<uint64_t>(r), 1)));
        return squared_error_or_nan(ens, target, o, ratio);
    });
    return summarize(std::move(values)).mean_delta2;
}

GammaStudy fit_gamma(double delta2_target, std::span<const int> n_qubits, const GammaStudyConfig &cfg, uint64_t seed) {
    if (!(delta2_target > 0)) {
        throw std::invalid_argument("fit_gamma: target must be positive.");
    }
    GammaStudy study;
    std::vector<int> ns;
    std::vector<double> nus;
    for (int n : n_qubits) {
        if (n < 2) {
            throw std::invalid_argument("fit_gamma: qubit counts must be >= 2.");
        }
        auto psi = haar_random_state(n, derive_seed(seed, static_cast<uint64_t>(n), 0));
        DensityMatrix rho = depolarized_state(psi, cfg.eps);
        std::vector<Pauli> letters(n, Pauli::I);
        letters[0] = Pauli::Z;
        letters[1] = Pauli::Z;
        Observable o{PauliString(letters)};
        const double target = mitigated_target(rho, o);
        OutcomeSampler sampler(rho, 0.0);
        const uint64_t eval_seed = derive_seed(seed, static_cast<uint64_t>(n), 1);
        auto eval = [&](int nu) {
            return simulated_delta2(sampler, target, o, nu, cfg.n_s, cfg.n_reps, eval_seed, cfg.resample);
        };
        auto nu = required_settings(eval, delta2_target, cfg.nu_min, cfg.nu_max);
        study.points.push_back({n, nu});
        if (nu) {
            ns.push_back(n);
            nus.push_back(*nu);
        }
    }
    std::vector<int> distinct = ns;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() >= 3) {
        study.fit = fit_exponent(ns, nus);
    }
    return study;
}

}  // namespace shadow
