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

#include "shadow/workflow/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "shadow/bounds/bounds.hpp"

namespace shadow::workflow {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "scenario", "state",       "n_qubits",    "state_seed",    "n_states",   "delta_coh",   "p_deph",
    "p_det",    "eps_depol",   "n_u",         "n_s",           "observables", "seed",       "output_dir",
    "pool_nu",  "pool_ns",     "n_resamples", "n_reps",        "n_boot",     "records",     "calibration",
    "grid_csv", "tau",         "budgets",     "prior_mu0",     "prior_alpha", "ratio_floor", "eps_values",
    "n_qubits_list", "delta2_target", "nu_min", "nu_max",      "dense_cap"};

[[noreturn]] void fail(const std::string &key, const std::string &msg) {
    throw ConfigError("config field '" + key + "': " + msg);
}

template <class T>
void read(const json &j, const char *key, T &out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception &e) {
        fail(key, std::string("wrong type (") + e.what() + ")");
    }
}

void require(bool ok, const std::string &key, const std::string &msg) {
    if (!ok) {
        fail(key, msg);
    }
}

void require_positive_list(const std::vector<int> &v, const std::string &key, int min_value) {
    require(!v.empty(), key, "required for this scenario");
    for (int x : v) {
        require(x >= min_value, key, "entries must be >= " + std::to_string(min_value));
    }
}

}  // namespace

bool is_scenario(const std::string &name) {
    return std::any_of(std::begin(kScenarios), std::end(kScenarios), [&](const char *s) { return name == s; });
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[k, v] : j.items()) {
        if (!kKeys.count(k)) {
            fail(k, "unknown key");
        }
    }
    ExperimentConfig c;
    read(j, "scenario", c.scenario);
    std::string kind = "ghz";
    read(j, "state", kind);
    if (kind == "ghz") {
        c.state.kind = StateKind::Ghz;
    } else if (kind == "haar") {
        c.state.kind = StateKind::Haar;
    } else {
        fail("state", "expected \"ghz\" or \"haar\", got \"" + kind + "\"");
    }
    read(j, "n_qubits", c.state.n_qubits);
    read(j, "state_seed", c.state.seed);
    read(j, "n_states", c.state.n_states);
    read(j, "delta_coh", c.noise.delta_coh);
    read(j, "p_deph", c.noise.p_deph);
    read(j, "p_det", c.noise.p_det);
    read(j, "eps_depol", c.noise.eps_depol);
    read(j, "n_u", c.n_u);
    read(j, "n_s", c.n_s);
    read(j, "observables", c.observables);
    read(j, "seed", c.seed);
    read(j, "output_dir", c.output_dir);
    read(j, "pool_nu", c.pool_nu);
    read(j, "pool_ns", c.pool_ns);
    read(j, "n_resamples", c.n_resamples);
    read(j, "n_reps", c.n_reps);
    read(j, "n_boot", c.n_boot);
    read(j, "records", c.records);
    read(j, "calibration", c.calibration);
    read(j, "grid_csv", c.grid_csv);
    read(j, "tau", c.tau);
    read(j, "budgets", c.budgets);
    if (j.contains("prior_mu0") || j.contains("prior_alpha")) {
        if (!j.contains("prior_mu0") || !j.contains("prior_alpha")) {
            fail(j.contains("prior_mu0") ? "prior_alpha" : "prior_mu0", "prior needs both prior_mu0 and prior_alpha");
        }
        BayesPrior p;
        read(j, "prior_mu0", p.mu0);
        read(j, "prior_alpha", p.alpha);
        c.prior = p;
    }
    read(j, "ratio_floor", c.ratio_floor);
    read(j, "eps_values", c.eps_values);
    read(j, "n_qubits_list", c.n_qubits_list);
    read(j, "delta2_target", c.delta2_target);
    read(j, "nu_min", c.nu_min);
    read(j, "nu_max", c.nu_max);
    read(j, "dense_cap", c.dense_cap);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["state"] = state.kind == StateKind::Ghz ? "ghz" : "haar";
    j["n_qubits"] = state.n_qubits;
    j["state_seed"] = state.seed;
    j["n_states"] = state.n_states;
    j["delta_coh"] = noise.delta_coh;
    j["p_deph"] = noise.p_deph;
    j["p_det"] = noise.p_det;
    j["eps_depol"] = noise.eps_depol;
    j["n_u"] = n_u;
    j["n_s"] = n_s;
    j["observables"] = observables;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["pool_nu"] = pool_nu;
    j["pool_ns"] = pool_ns;
    j["n_resamples"] = n_resamples;
    j["n_reps"] = n_reps;
    j["n_boot"] = n_boot;
    j["records"] = records;
    j["calibration"] = calibration;
    j["grid_csv"] = grid_csv;
    j["tau"] = tau;
    j["budgets"] = budgets;
    if (prior) {
        j["prior_mu0"] = prior->mu0;
        j["prior_alpha"] = prior->alpha;
    }
    j["ratio_floor"] = ratio_floor;
    j["eps_values"] = eps_values;
    j["n_qubits_list"] = n_qubits_list;
    j["delta2_target"] = delta2_target;
    j["nu_min"] = nu_min;
    j["nu_max"] = nu_max;
    j["dense_cap"] = dense_cap;
    return j;
}

std::vector<std::pair<int, int>> ExperimentConfig::cells() const {
    std::vector<std::pair<int, int>> out;
    for (int u : n_u) {
        for (int s : n_s) {
            out.emplace_back(u, s);
        }
    }
    return out;
}

std::vector<Observable> ExperimentConfig::parsed_observables() const {
    std::vector<Observable> out;
    for (size_t i = 0; i < observables.size(); i++) {
        const std::string key = "observables[" + std::to_string(i) + "]";
        Observable o;
        try {
            o = Observable::parse(observables[i]);
        } catch (const std::invalid_argument &e) {
            fail(key, e.what());
        }
        if (state.n_qubits > 0 && o.n_qubits() != state.n_qubits) {
            fail(key, "acts on " + std::to_string(o.n_qubits()) + " qubits but n_qubits is " +
                          std::to_string(state.n_qubits));
        }
        out.push_back(std::move(o));
    }
    return out;
}

void ExperimentConfig::validate() const {
    require(!scenario.empty(), "scenario", "required");
    require(is_scenario(scenario), "scenario", "unknown scenario \"" + scenario + "\"");
    try {
        noise.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    require(state.n_states >= 1, "n_states", "must be >= 1");
    require(pool_nu >= 2, "pool_nu", "must be >= 2");
    require(pool_ns >= 1, "pool_ns", "must be >= 1");
    require(n_resamples >= 1, "n_resamples", "must be >= 1");
    require(n_reps >= 2, "n_reps", "must be >= 2");
    require(n_boot >= 2, "n_boot", "must be >= 2");
    require(tau >= 0, "tau", "must be >= 0");
    require(ratio_floor >= 0, "ratio_floor", "must be >= 0");
    require(dense_cap >= 1, "dense_cap", "must be >= 1");
    if (prior) {
        require(prior->alpha >= 0, "prior_alpha", "must be >= 0");
    }
    for (int u : n_u) {
        require(u >= 2, "n_u", "entries must be >= 2");
    }
    for (int s : n_s) {
        require(s >= 1, "n_s", "entries must be >= 1");
    }

    auto need_state = [&] {
        require(state.n_qubits >= (state.kind == StateKind::Ghz ? 2 : 1), "n_qubits",
                "required (>= 2 for ghz, >= 1 for haar)");
        require(state.n_qubits <= dense_cap, "n_qubits", "exceeds dense_cap");
    };
    auto need_observables = [&] {
        require(!observables.empty(), "observables", "required for this scenario");
        (void)parsed_observables();
    };
    auto need_grid = [&] {
        require_positive_list(n_u, "n_u", 2);
        require_positive_list(n_s, "n_s", 1);
    };
    auto need_pool_fit = [&] {
        for (auto [u, s] : cells()) {
            require(u <= pool_nu, "n_u", "cell N_U = " + std::to_string(u) + " exceeds pool_nu");
            require(s <= pool_ns, "n_s", "cell N_S = " + std::to_string(s) + " exceeds pool_ns");
        }
    };

    const std::string &s = scenario;
    if (s == "scaling") {
        need_state();
        need_grid();
        need_observables();
        need_pool_fit();
        require(state.n_states >= 2, "n_states", "scaling averages over states and needs >= 2");
    } else if (s == "purity-sweep") {
        need_state();
        need_grid();
        require(!eps_values.empty(), "eps_values", "required for this scenario");
        for (double e : eps_values) {
            require(e > 0 && e <= 1, "eps_values", "entries must be in (0, 1]");
        }
    } else if (s == "gamma-fit") {
        require(n_qubits_list.size() >= 3, "n_qubits_list", "needs at least 3 qubit counts");
        for (int n : n_qubits_list) {
            require(n >= 2 && n <= dense_cap, "n_qubits_list", "entries must be in [2, dense_cap]");
        }
        require(delta2_target > 0, "delta2_target", "must be > 0");
        require(nu_min >= 2 && nu_max >= nu_min, "nu_min", "need 2 <= nu_min <= nu_max");
    } else if (s == "ghz-contour") {
        need_state();
        require(state.kind == StateKind::Ghz, "state", "ghz-contour needs state = \"ghz\"");
        need_grid();
        need_observables();
        require(n_u.size() >= 2, "n_u", "the model fit needs at least 2 N_U values");
        require(n_s.size() >= 2, "n_s", "the model fit needs at least 2 N_S values");
    } else if (s == "planner") {
        require(!grid_csv.empty(), "grid_csv", "required for this scenario");
        require(!budgets.empty(), "budgets", "required for this scenario");
        for (double b : budgets) {
            require(b > 0, "budgets", "entries must be > 0");
        }
    } else if (s == "mitigate-records") {
        require(!records.empty(), "records", "required for this scenario");
        need_observables();
    } else if (s == "noise-analysis") {
        need_state();
        require(state.kind == StateKind::Ghz, "state", "noise-analysis needs state = \"ghz\"");
        need_observables();
        require(noise.p_det == 0 || state.n_qubits <= kMaxPauliSweepQubits, "n_qubits",
                "detection analysis supports at most " + std::to_string(kMaxPauliSweepQubits) + " qubits");
    } else if (s == "calibration") {
        require(!records.empty(), "records", "required for this scenario");
        require(!calibration.empty() || noise.p_det > 0, "calibration",
                "give a calibration file or a nonzero p_det");
        need_observables();
    } else if (s == "bayes-study") {
        need_state();
        need_grid();
        need_observables();
        need_pool_fit();
        require(prior.has_value(), "prior_mu0", "bayes-study needs prior_mu0 and prior_alpha");
    } else if (s == "bounds-check") {
        need_state();
        require(state.n_qubits <= kMaxPairBoundQubits, "n_qubits",
                "bounds-check supports at most " + std::to_string(kMaxPairBoundQubits) + " qubits");
        need_grid();
        need_observables();
    } else if (s == "simulate-records") {
        need_state();
        require(!records.empty(), "records", "output path required for simulate-records");
        require(n_u.size() == 1, "n_u", "simulate-records takes exactly one N_U");
        require(n_s.size() == 1, "n_s", "simulate-records takes exactly one N_S");
        require(n_u[0] >= 2, "n_u", "must be >= 2");
        require(n_s[0] >= 1, "n_s", "must be >= 1");
    }
}

std::string config_hash(const ExperimentConfig &cfg) {
    const std::string text = cfg.to_json().dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; i++) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace shadow::workflow
