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

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "shadow/randmeas/records.hpp"

namespace shadow {

/// One randomized-measurement outcome. Its matrix is (x)_k (3 u_k^dagger |b_k><b_k| u_k - I).
struct Snapshot {
    BasisSetting setting;
    uint32_t bits = 0;
};

/// Dense snapshot matrix. Throws std::length_error above the dense cap.
Matrix snapshot_matrix(const Snapshot &s);

/// N_U records sharing n and N_S. Per-setting shadow coefficients and dense averaged snapshots
/// are computed lazily and cached; the first access is internally synchronized.
class ShadowEnsemble {
   public:
    /// Throws std::invalid_argument on an empty set or mismatched n / N_S.
    explicit ShadowEnsemble(std::vector<MeasurementRecord> records);

    int n_qubits() const { return n_qubits_; }
    int n_settings() const { return static_cast<int>(records_.size()); }
    int n_shots() const { return n_shots_; }
    const std::vector<MeasurementRecord> &records() const { return records_; }

    /// c_j[mask] = 3^|mask| mean_b (-1)^popcount(b & mask), so that
    /// rho_hat_j = 2^-n sum_mask c_j[mask] P_{j,mask} with P_{j,mask} carrying the setting's
    /// letter on the qubits of mask. Requires n <= kMaxCoefficientQubits.
    const std::vector<double> &coefficients(int j) const;

    /// Dense rho_hat_j, the average snapshot of setting j.
    const Matrix &averaged_snapshot(int j) const;

   private:
    void ensure_coefficients() const;
    void ensure_dense() const;

    int n_qubits_;
    int n_shots_;
    std::vector<MeasurementRecord> records_;
    mutable std::once_flag coeff_once_;
    mutable std::vector<std::vector<double>> coeffs_;
    mutable std::once_flag dense_once_;
    mutable std::vector<Matrix> dense_;
};

inline constexpr int kMaxCoefficientQubits = 20;

/// Mean of all N_U * N_S snapshots (dense). Trace 1, not necessarily positive.
Matrix mean_state(const ShadowEnsemble &ens);

/// o_1 = mean over snapshots of tr(O rho_hat), evaluated per Pauli term from the shots.
double estimate_linear(const ShadowEnsemble &ens, const Observable &o);

/// How the pairwise sum of estimate_o2 is evaluated. All give the same value up to rounding.
enum class O2Strategy {
    Auto,           ///< PauliSum when n <= kPauliSumMaxQubits, else Factorized
    PauliSum,       ///< Pauli-basis accumulation, O(N_U 2^n + |terms| n 4^n)
    DensePairwise,  ///< cached dense rho_hat_j, O(N_U^2 4^n)
    Factorized,     ///< per-qubit kernel over shot pairs, O(n N_U^2 N_S^2)
};

inline constexpr int kPauliSumMaxQubits = 10;

struct EstimateOptions {
    O2Strategy strategy = O2Strategy::Auto;
    /// OpenMP kernels. The serial kernels are the reference implementation.
    bool parallel = true;
};

/// U-statistic 1/(N_U(N_U-1)) sum_{j != j'} tr(rho_hat_j O rho_hat_j'). Throws
/// std::invalid_argument if N_U < 2.
double estimate_o2(const ShadowEnsemble &ens, const Observable &o, const EstimateOptions &opts = {});

/// estimate_o2 with O = I.
double estimate_s2(const ShadowEnsemble &ens, const EstimateOptions &opts = {});

/// Gaussian-prior shrinkage of the purity estimate.
struct BayesPrior {
    double mu0 = 0.0;
    double alpha = 0.0;
};

struct RatioOptions {
    double floor = 1e-6;
    std::optional<BayesPrior> prior;
    EstimateOptions estimate;
};

/// Thrown when the purity estimate is below the configured floor.
class DegenerateDenominator : public std::domain_error {
   public:
    DegenerateDenominator(double s2, double floor);
    double s2;
};

struct MitigatedEstimate {
    double o1;
    double o2;
    double s2;
    /// Denominator actually used (s2, or its shrunk value).
    double denominator;
    double ratio;
};

/// o2 / s2 (or o2 / bayes_purity(s2, ...)). Throws DegenerateDenominator when the denominator
/// is below opts.floor.
MitigatedEstimate mitigated_estimate(const ShadowEnsemble &ens, const Observable &o, const RatioOptions &opts = {});
double mitigated_ratio(const ShadowEnsemble &ens, const Observable &o, const RatioOptions &opts = {});

/// Returns the ensemble's pairwise numerators for several observables at once, sharing the
/// Pauli-sum accumulation. Entry 0 is s2 (O = I), then one entry per observable.
std::vector<double> estimate_o2_batch(const ShadowEnsemble &ens, const std::vector<Observable> &os,
                                      const EstimateOptions &opts = {});

namespace kernels {

/// Exposed for tests and benchmarks; estimate_o2 dispatches to these.
double o2_pauli_sum(const ShadowEnsemble &ens, const Observable &o, bool parallel);
double o2_dense_pairwise(const ShadowEnsemble &ens, const Observable &o, bool parallel);
double o2_factorized(const ShadowEnsemble &ens, const Observable &o, bool parallel);

/// tr(A_a sigma_o A_b) for single-qubit snapshot factors A = (I + 3 (-1)^bit sigma_basis) / 2.
Complex factor_kernel(Pauli basis_a, int bit_a, Pauli o, Pauli basis_b, int bit_b);

/// In-place unnormalized Walsh-Hadamard transform.
void walsh_hadamard(std::vector<double> &v);

}  // namespace kernels

}  // namespace shadow
