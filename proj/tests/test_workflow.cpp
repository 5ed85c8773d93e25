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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shadow/planner/planner.hpp"
#include "shadow/qcore/exact.hpp"
#include "shadow/stats/stats.hpp"
#include "shadow/workflow/scenarios.hpp"

using namespace shadow;
using namespace shadow::workflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    auto p = fs::temp_directory_path() / ("shadow_workflow_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const json &j) {
    try {
        ExperimentConfig::from_json(j).validate();
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

std::vector<MeasurementRecord> ghz_records(int n, int nu, int ns, uint64_t seed, double p_deph = 0.1) {
    NoiseConfig noise;
    noise.p_deph = p_deph;
    OutcomeSampler sampler(prepare_noisy_ghz(n, noise), 0.0);
    return sample_records(sampler, sample_settings(n, nu, derive_seed(seed, 0)), ns, derive_seed(seed, 1));
}

}  // namespace

TEST(Config, ErrorsNameTheField) {
    EXPECT_NE(config_error({{"scenario", "scaling"}, {"n_uu", {4}}}).find("'n_uu'"), std::string::npos);
    EXPECT_NE(config_error({{"scenario", "scaling"}, {"n_u", "many"}}).find("'n_u'"), std::string::npos);
    EXPECT_NE(config_error({{"scenario", "bogus"}}).find("'scenario'"), std::string::npos);
    EXPECT_NE(config_error({{"scenario", "planner"}, {"budgets", {1e5}}}).find("'grid_csv'"), std::string::npos);
    EXPECT_NE(config_error({{"scenario", "mitigate-records"}, {"records", "x"}, {"observables", {"ZQ"}}})
                  .find("'observables[0]'"),
              std::string::npos);
    EXPECT_NE(config_error({{"scenario", "scaling"}, {"state", "w"}}).find("'state'"), std::string::npos);
    EXPECT_NE(config_error({{"scenario", "bayes-study"}, {"n_qubits", 2}, {"n_u", {4}}, {"n_s", {2}},
                            {"observables", {"ZZ"}}, {"prior_mu0", 0.9}})
                  .find("prior_alpha"),
              std::string::npos);
}

TEST(Config, PoolMustCoverCells) {
    json j = {{"scenario", "scaling"}, {"state", "haar"}, {"n_qubits", 2}, {"n_states", 2},  {"n_u", {4, 40}},
              {"n_s", {2}},            {"observables", {"ZZ"}},           {"pool_nu", 10}, {"pool_ns", 4}};
    EXPECT_NE(config_error(j).find("'n_u'"), std::string::npos);
    j["pool_nu"] = 40;
    EXPECT_EQ(config_error(j), "");
}

TEST(Config, JsonRoundTripKeepsHash) {
    json j = {{"scenario", "bayes-study"}, {"n_qubits", 3},   {"eps_depol", 0.1},   {"n_u", {8, 16}},
              {"n_s", {4}},                {"observables", {"ZZI"}}, {"prior_mu0", 0.9}, {"prior_alpha", 100},
              {"seed", 7}};
    auto a = ExperimentConfig::from_json(j);
    auto b = ExperimentConfig::from_json(a.to_json());
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 64u);
    b.seed = 8;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, CellsAreCartesianProduct) {
    ExperimentConfig c;
    c.n_u = {10, 20};
    c.n_s = {1, 2, 3};
    auto cells = c.cells();
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells.front(), (std::pair<int, int>{10, 1}));
    EXPECT_EQ(cells.back(), (std::pair<int, int>{20, 3}));
}

TEST(Direct, HandComputedRecords) {
    std::vector<MeasurementRecord> recs = {
        {BasisSetting::parse("ZZ"), {0b00, 0b00, 0b01}},  // ZI: +1 +1 +1, ZZ: +1 +1 -1
        {BasisSetting::parse("ZX"), {0b10, 0b00, 0b00}},  // ZI: -1 +1 +1
        {BasisSetting::parse("XX"), {0b11, 0b11, 0b11}},  // XX: +1 +1 +1
    };
    EXPECT_NEAR(direct_expectation(recs, Observable::parse("ZI")), (1.0 + 1.0 / 3) / 2, 1e-15);
    EXPECT_NEAR(direct_expectation(recs, Observable::parse("ZZ")), 1.0 / 3, 1e-15);
    EXPECT_NEAR(direct_expectation(recs, Observable::parse("0.5*ZZ - 2*XX")), 1.0 / 6 - 2.0, 1e-15);
    EXPECT_TRUE(std::isnan(direct_expectation(recs, Observable::parse("YY"))));
}

TEST(Direct, CalibrationUndoesSymmetricFlips) {
    const double p = 0.05;
    std::vector<MeasurementRecord> recs = {{BasisSetting::parse("Z"), {0, 0, 0, 1}}};
    auto cal = CalibrationMatrix::symmetric(1, p);
    EXPECT_NEAR(direct_expectation(recs, Observable::parse("Z"), &cal), 0.5 / (1 - 2 * p), 1e-12);
}

TEST(Bootstrap, IdenticalRecordsGiveZero) {
    std::vector<MeasurementRecord> recs(6, {BasisSetting::parse("Z"), {0, 0}});
    EXPECT_LT(bootstrap_errorbars(recs, Observable::parse("Z"), 50, 3), 1e-12);
    EXPECT_EQ(bootstrap_std(6, 20, 3, [](std::span<const int>) { return 1.25; }), 0.0);
}

TEST(Bootstrap, RejectsTooFewResamples) {
    EXPECT_THROW(bootstrap_std(5, 1, 0, [](std::span<const int>) { return 0.0; }), std::invalid_argument);
}

TEST(Bootstrap, MeanOfValuesMatchesStandardError) {
    // Bootstrap std of a sample mean approaches sd / sqrt(n).
    std::vector<double> x(400);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (auto &v : x) {
        v = g(rng);
    }
    auto [mean, sd] = mean_and_std(x);
    const double se = bootstrap_std(400, 2000, 12, [&](std::span<const int> idx) {
        double s = 0;
        for (int i : idx) {
            s += x[i];
        }
        return s / idx.size();
    });
    EXPECT_NEAR(se, sd / std::sqrt(400.0), 0.1 * sd / std::sqrt(400.0));
    (void)mean;
}

TEST(Bootstrap, StableUnderMoreResamplesAndShrinksWithData) {
    auto recs = ghz_records(3, 2666, 10, 4);
    auto o = Observable::parse("XXX");
    const double se100 = bootstrap_errorbars(recs, o, 100, 5);
    const double se200 = bootstrap_errorbars(recs, o, 200, 5);
    EXPECT_LT(std::abs(se200 - se100) / se200, 0.2);
    std::vector<MeasurementRecord> head(recs.begin(), recs.begin() + 1446);
    EXPECT_LT(se200, bootstrap_errorbars(head, o, 200, 5));
}

TEST(States, GhzIgnoresReadoutNoise) {
    ExperimentConfig c;
    c.state.n_qubits = 3;
    c.noise.p_deph = 0.1;
    auto a = make_state(c, 0);
    c.noise.p_det = 0.2;
    auto b = make_state(c, 0);
    EXPECT_LT((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(States, HaarIndexedAndReproducible) {
    ExperimentConfig c;
    c.state = {StateKind::Haar, 2, 9, 3};
    c.noise.eps_depol = 0.1;
    EXPECT_EQ(make_state(c, 1).matrix(), make_state(c, 1).matrix());
    EXPECT_GT((make_state(c, 0).matrix() - make_state(c, 1).matrix()).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_NEAR(purity_exact(make_state(c, 2), 2), 0.9 * 0.9 + 0.1 * 0.1 / 3, 1e-12);
}

TEST(Scenarios, NoiseAnalysisExactValues) {
    json j = {{"scenario", "noise-analysis"}, {"n_qubits", 5},        {"delta_coh", 0.15},
              {"p_deph", 0.1},               {"p_det", 0.01},        {"observables", {"XXXXX", "ZZIII"}}};
    auto t = run_table(ExperimentConfig::from_json(j));
    auto find = [&](const std::string &noise, const std::string &obs) {
        for (const auto &r : t.rows) {
            if (r[0] == noise && r[1] == obs) {
                return std::pair{std::stod(r[3]), std::stod(r[4])};
            }
        }
        ADD_FAILURE() << noise << " " << obs;
        return std::pair{0.0, 0.0};
    };
    auto [coh_d, coh_m] = find("coherent", "XXXXX");
    EXPECT_NEAR(coh_d, coh_m, 1e-9);
    auto [deph_d, deph_m] = find("dephasing", "XXXXX");
    EXPECT_NEAR(deph_d, 0.8, 1e-6);
    EXPECT_LT(std::abs(1 - deph_m), std::abs(1 - deph_d));
    auto [det_d, det_m] = find("detection", "XXXXX");
    EXPECT_NEAR(det_d, std::pow(0.98, 5), 1e-6);
    EXPECT_LT(std::abs(1 - det_m), std::abs(1 - det_d));
}

TEST(Scenarios, IdenticalConfigsGiveIdenticalBytes) {
    auto dir = scratch("determinism");
    json j = {{"scenario", "scaling"}, {"state", "haar"},  {"n_qubits", 2},       {"n_states", 2},
              {"eps_depol", 0.1},      {"n_u", {6, 12}},   {"n_s", {2, 4}},       {"observables", {"ZZ", "XI"}},
              {"pool_nu", 40},         {"pool_ns", 8},     {"n_resamples", 10}};
    auto cfg = ExperimentConfig::from_json(j);
    cfg.output_dir = dir.string();
    run(cfg);
    const auto csv = slurp(dir / "scaling.csv");
    const auto manifest = slurp(dir / "scaling.manifest.json");
    run(cfg);
    EXPECT_FALSE(csv.empty());
    EXPECT_EQ(csv, slurp(dir / "scaling.csv"));
    EXPECT_EQ(manifest, slurp(dir / "scaling.manifest.json"));
}

TEST(Scenarios, RecordsRoundTripThroughCli) {
    auto dir = scratch("records");
    json sim = {{"scenario", "simulate-records"}, {"n_qubits", 3}, {"p_deph", 0.1}, {"n_u", {300}}, {"n_s", {8}},
                {"records", (dir / "ghz.rec").string()}, {"output_dir", dir.string()}};
    run(ExperimentConfig::from_json(sim));
    json mit = {{"scenario", "mitigate-records"}, {"records", (dir / "ghz.rec").string()}, {"n_u", {100, 300}},
                {"observables", {"XXX", "ZZI"}},  {"n_boot", 20}, {"output_dir", dir.string()}};
    auto t = run_table(ExperimentConfig::from_json(mit));
    ASSERT_EQ(t.rows.size(), 4u);
    for (const auto &r : t.rows) {
        EXPECT_GT(std::stod(r[4]), 0.0);  // stderr
    }
}

TEST(Scenarios, ManifestWrittenOnFailure) {
    auto dir = scratch("failure");
    json j = {{"scenario", "mitigate-records"}, {"records", (dir / "missing.rec").string()},
              {"observables", {"ZZ"}},           {"output_dir", dir.string()}};
    EXPECT_THROW(run(ExperimentConfig::from_json(j)), DataError);
    auto m = json::parse(slurp(dir / "mitigate-records.manifest.json"));
    EXPECT_EQ(m["status"], "failed");
    EXPECT_NE(m["error"].get<std::string>().find("missing.rec"), std::string::npos);
    EXPECT_EQ(m["config_sha256"].get<std::string>().size(), 64u);
}

TEST(Scenarios, PlannerInfeasibleBudget) {
    auto dir = scratch("planner");
    std::vector<GridPoint> grid;
    for (int nu : {100, 200, 400}) {
        for (int ns : {2, 8, 32}) {
            grid.push_back({nu, ns, 3384.0 / (double(nu) * nu) * (1 + 22.0 / (double(ns) * ns))});
        }
    }
    {
        std::ofstream out(dir / "grid.csv");
        write_grid_csv(out, grid);
    }
    json j = {{"scenario", "planner"}, {"grid_csv", (dir / "grid.csv").string()}, {"budgets", {1e6}}};
    auto t = run_table(ExperimentConfig::from_json(j));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_NEAR(std::stod(t.rows[0][6]), 3384.0, 1e-3);
    j["budgets"] = {5.0};
    EXPECT_THROW(run_table(ExperimentConfig::from_json(j)), InfeasibleError);
}
