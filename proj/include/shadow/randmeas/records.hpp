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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shadow/qcore/measure.hpp"
#include "shadow/qcore/state.hpp"

namespace shadow {

/// Per-qubit measurement basis, letters in {X, Y, Z}.
struct BasisSetting {
    std::vector<Pauli> bases;

    int n_qubits() const { return static_cast<int>(bases.size()); }
    std::string to_string() const;
    /// Throws std::invalid_argument on letters outside {X, Y, Z}.
    static BasisSetting parse(std::string_view text);
    /// Base-3 index with qubit 0 most significant (X=0, Y=1, Z=2).
    uint64_t index() const;

    bool operator==(const BasisSetting &) const = default;
};

enum class RecordSource { Simulated, External };

/// One setting plus its shots. Outcome bit (n-1-k) holds qubit k, so n <= 32.
struct MeasurementRecord {
    BasisSetting setting;
    std::vector<uint32_t> outcomes;
    RecordSource source = RecordSource::External;
    std::optional<uint64_t> seed;

    int n_qubits() const { return setting.n_qubits(); }
    int n_shots() const { return static_cast<int>(outcomes.size()); }

    bool operator==(const MeasurementRecord &) const = default;
};

inline constexpr int kMaxRecordQubits = 32;

/// N_U settings with every letter drawn i.i.d. uniform from {X, Y, Z}. Throws
/// std::invalid_argument if n_settings < 2.
std::vector<BasisSetting> sample_settings(int n_qubits, int n_settings, uint64_t seed);

/// Shot sampler for a fixed state. With cache set, Born distributions for all 3^n settings are
/// computed up front when n <= kCachedSamplerQubits. Sampling is const and thread-safe.
class OutcomeSampler {
   public:
    OutcomeSampler(const DensityMatrix &rho, double p_det, bool cache = true);

    int n_qubits() const { return n_qubits_; }
    double p_det() const { return p_det_; }

    MeasurementRecord sample(const BasisSetting &setting, int n_shots, uint64_t seed) const;

    /// Exact outcome distribution of a setting, without detection errors.
    std::vector<double> distribution(const BasisSetting &setting) const;

   private:
    std::vector<double> cdf_for(const BasisSetting &setting) const;

    int n_qubits_;
    double p_det_;
    Matrix rho_;
    std::vector<std::vector<double>> cdfs_;  // by BasisSetting::index(), empty if not cached
};

inline constexpr int kCachedSamplerQubits = 6;

/// N_S shots from the Born distribution of rho in the setting's basis, each bit then flipped
/// independently with probability p_det.
MeasurementRecord sample_outcomes(const DensityMatrix &rho, const BasisSetting &setting, int n_shots,
                                  double p_det, uint64_t seed);

/// Record j is sampled with derive_seed(seed, j); the result does not depend on thread count.
std::vector<MeasurementRecord> sample_records(const OutcomeSampler &sampler, std::span<const BasisSetting> settings,
                                              int n_shots, uint64_t seed);

/// Histogram of a record's outcomes, normalized.
std::vector<double> empirical_distribution(const MeasurementRecord &record);

/// Record file IO. All records must share n and N_S. Errors carry the 1-based line number.
void write_records(std::ostream &out, std::span<const MeasurementRecord> records);
void write_records(const std::string &path, std::span<const MeasurementRecord> records);
std::vector<MeasurementRecord> read_records(std::istream &in);
std::vector<MeasurementRecord> read_records(const std::string &path);

/// Per-qubit readout confusion A_i = [[1-p0, p1], [p0, 1-p1]] (columns: true outcome).
struct CalibrationMatrix {
    std::vector<double> p0;
    std::vector<double> p1;

    static CalibrationMatrix symmetric(int n_qubits, double p);
    int n_qubits() const { return static_cast<int>(p0.size()); }
    /// Throws std::invalid_argument for probabilities outside [0, 1] and std::domain_error for a
    /// singular A_i.
    void validate() const;
};

struct CorrectedDistribution {
    std::vector<double> probs;
    /// Smallest entry; negative values are quasi-probabilities and are kept as is.
    double min_value = 0;
    bool has_negative() const { return min_value < 0; }
};

/// M^-1 dist applied qubit by qubit.
CorrectedDistribution calibrate_correct(std::span<const double> dist, const CalibrationMatrix &cal);

void write_calibration(const std::string &path, const CalibrationMatrix &cal);
CalibrationMatrix read_calibration(const std::string &path);
CalibrationMatrix read_calibration(std::istream &in);

/// sum_b dist[b] (-1)^popcount(b & mask).
double signed_expectation(std::span<const double> dist, uint64_t mask);

/// Outcome-bit mask of a Pauli string's support.
uint64_t support_mask(const PauliString &p);

}  // namespace shadow
