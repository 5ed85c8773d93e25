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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "shadow/noisesim/noise.hpp"
#include "shadow/shadows/shadow.hpp"

namespace shadow::workflow {

inline constexpr const char *kScenarios[] = {"scaling",         "purity-sweep",   "gamma-fit",   "ghz-contour",
                                             "planner",         "mitigate-records", "noise-analysis", "calibration",
                                             "bayes-study",     "bounds-check",   "simulate-records"};

bool is_scenario(const std::string &name);

enum class StateKind { Ghz, Haar };

/// GHZ states go through the noisy preparation circuit. Haar states are depolarized by
/// eps_depol and dephased by p_deph; delta_coh does not apply to them.
struct StateSpec {
    StateKind kind = StateKind::Ghz;
    int n_qubits = 0;
    uint64_t seed = 0;
    int n_states = 1;
};

/// Flat JSON document. Keys map 1:1 onto fields; unknown keys are rejected so typos surface.
struct ExperimentConfig {
    std::string scenario;
    StateSpec state;
    NoiseConfig noise;
    std::vector<int> n_u;  ///< grid axis; cells are the Cartesian product with n_s
    std::vector<int> n_s;
    std::vector<std::string> observables;
    uint64_t seed = 1;
    std::string output_dir = "out";

    int pool_nu = 2000;
    int pool_ns = 512;
    int n_resamples = 100;
    int n_reps = 200;
    int n_boot = 200;
    std::string records;
    std::string calibration;
    std::string grid_csv;
    double tau = 1000.0;
    std::vector<double> budgets;
    std::optional<BayesPrior> prior;
    double ratio_floor = 1e-6;
    std::vector<double> eps_values;
    std::vector<int> n_qubits_list;
    double delta2_target = 0.0;
    int nu_min = 4;
    int nu_max = 1 << 16;
    int dense_cap = kDefaultDenseQubitCap;

    /// Throws ConfigError naming the offending key.
    static ExperimentConfig from_json(const nlohmann::json &j);
    static ExperimentConfig load(const std::string &path);
    nlohmann::json to_json() const;

    /// Scenario-specific required fields. Throws ConfigError naming the first missing or
    /// invalid field.
    void validate() const;

    std::vector<std::pair<int, int>> cells() const;
    /// Observables parsed and checked against state.n_qubits when that is set.
    std::vector<Observable> parsed_observables() const;
};

/// Hex SHA-256 of the canonical (sorted-key, compact) JSON dump.
std::string config_hash(const ExperimentConfig &cfg);

}  // namespace shadow::workflow
