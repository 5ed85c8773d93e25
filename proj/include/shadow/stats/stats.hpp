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

#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "shadow/shadows/shadow.hpp"

namespace shadow {

/// Exactly uniform draw from [0, bound) by rejection; portable across standard libraries.
uint64_t uniform_index(std::mt19937_64 &rng, uint64_t bound);

/// Shrinks a purity estimate toward a prior mean: (s2 + alpha mu0 / N_U) / (1 + alpha / N_U).
/// Throws std::invalid_argument for alpha < 0 or N_U < 1.
double bayes_purity(double s2, double mu0, double alpha, int n_u);

/// A bank of records for one fixed state, resampled to emulate smaller experiments.
struct EmpiricalPool {
    int n_qubits = 0;
    int pool_nu = 0;
    int pool_ns = 0;
    uint64_t seed = 0;
    std::vector<MeasurementRecord> records;
};

/// pool_nu i.i.d. settings with pool_ns shots each.
EmpiricalPool build_pool(const DensityMatrix &rho, int pool_nu, int pool_ns, uint64_t seed, double p_det = 0.0);

/// Wraps existing records (for example, read from a file). Throws DataError on ragged input.
EmpiricalPool pool_from_records(std::vector<MeasurementRecord> records, uint64_t seed = 0);

/// N_U distinct pool settings (without replacement) with N_S shots each drawn with replacement
/// from that setting's pool shots. Throws std::invalid_argument when the sizes exceed the pool.
ShadowEnsemble draw_resample(const EmpiricalPool &pool, int n_u, int n_s, uint64_t seed);

struct ResampleOptions {
    RatioOptions ratio;
    /// Spread resamples over OpenMP threads. Results are identical either way.
    bool parallel = true;
};

struct ResampleResult {
    /// Mean squared error over the non-degenerate resamples.
    double mean_delta2 = 0;
    std::vector<double> delta2;
    /// Resamples whose denominator fell below the floor; they are excluded from the mean.
    int degenerate = 0;
};

/// Average of (target - o2/s2)^2 over n_resamples draws; resample r uses derive_seed(seed, r).
ResampleResult resample_delta2(const EmpiricalPool &pool, double target, const Observable &o, int n_u, int n_s,
                               int n_resamples, uint64_t seed, const ResampleOptions &opts = {});
/// Same with target = tr(O rho^2) / tr(rho^2).
ResampleResult resample_delta2(const EmpiricalPool &pool, const DensityMatrix &rho_exact, const Observable &o,
                               int n_u, int n_s, int n_resamples, uint64_t seed, const ResampleOptions &opts = {});

struct MseRow {
    int n_u = 0;
    int n_s = 0;
    double mean_delta2 = 0;
    /// sqrt((1/N_R) sum_R (mean - per_state)^2).
    double std_delta2 = 0;
    int n_resamples = 0;
    int n_states = 0;
    std::string label;

    bool operator==(const MseRow &) const = default;
};

struct MseReport {
    std::vector<MseRow> rows;

    /// Columns: observable,n_u,n_s,mean_delta2,std_delta2,n_resamples,n_states.
    void write_csv(std::ostream &out) const;
    void write_csv(const std::string &path) const;
    static MseReport read_csv(std::istream &in);
    static MseReport read_csv(const std::string &path);
};

/// One state of an aggregation run. States with equal seeds get identical pools.
struct StateSample {
    DensityMatrix rho;
    uint64_t seed;
};

struct AggregateConfig {
    std::vector<std::pair<int, int>> grid;  ///< (N_U, N_S) cells
    int pool_nu = 2000;
    int pool_ns = 512;
    int n_resamples = 100;
    double p_det = 0.0;
    ResampleOptions resample;
};

/// Per-state pools and resampled errors, combined into mean and std over states.
/// Throws std::invalid_argument for n_states < 2.
MseReport aggregate_over_states(const std::function<StateSample(int)> &factory, int n_states, const Observable &o,
                                const AggregateConfig &cfg, uint64_t seed);

/// Mean and population std of per-state values, as used by aggregate_over_states.
std::pair<double, double> mean_and_std(std::span<const double> values);

/// log2 N_U = log2 c + gamma n.
struct GammaFit {
    double c = 0;
    double gamma = 0;
};

/// Least-squares line through (n, log2 N_U). Needs at least 3 distinct n.
GammaFit fit_exponent(std::span<const int> n_qubits, std::span<const double> n_settings);

/// Smallest N_U in [lo, hi] with delta2_at(N_U) <= target, by bisection assuming the error
/// decreases with N_U. Empty if even hi misses the target.
std::optional<int> required_settings(const std::function<double(int)> &delta2_at, double target, int lo, int hi);

struct GammaStudyConfig {
    double eps = 0.1;         ///< depolarization of the random states
    int n_s = 1;              ///< shots per setting
    int nu_min = 4;
    int nu_max = 1 << 16;
    int n_reps = 64;          ///< independent simulations per Delta^2 evaluation
    ResampleOptions resample;
};

struct GammaPoint {
    int n_qubits;
    std::optional<int> n_u;  ///< empty when the target is unreachable below nu_max
};

struct GammaStudy {
    std::vector<GammaPoint> points;
    std::optional<GammaFit> fit;
};

/// For each n: a depolarized Haar-random state, Delta^2(N_U) of Z_0 Z_1 from fresh simulations
/// with common random numbers across N_U, the bisected N_U for the target, and the fit over the
/// reachable points.
GammaStudy fit_gamma(double delta2_target, std::span<const int> n_qubits, const GammaStudyConfig &cfg, uint64_t seed);

/// Delta^2 at N_U from fresh simulations (used by fit_gamma).
double simulated_delta2(const OutcomeSampler &sampler, double target, const Observable &o, int n_u, int n_s,
                        int n_reps, uint64_t seed, const ResampleOptions &opts = {});

}  // namespace shadow
