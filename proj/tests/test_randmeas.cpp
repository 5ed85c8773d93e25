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
#include <sstream>

#include "oracles.hpp"
#include "shadow/randmeas/records.hpp"

using namespace shadow;

namespace {

std::string dump(const std::vector<MeasurementRecord> &r) {
    std::ostringstream os;
    write_records(os, r);
    return os.str();
}

std::vector<MeasurementRecord> load(const std::string &s) {
    std::istringstream is(s);
    return read_records(is);
}

}  // namespace

TEST(Settings, ParseAndIndex) {
    auto s = BasisSetting::parse("XYZ");
    EXPECT_EQ(s.to_string(), "XYZ");
    EXPECT_EQ(s.index(), 0u * 9 + 1 * 3 + 2);
    EXPECT_EQ(BasisSetting::parse("ZZ").index(), 8u);
    EXPECT_THROW(BasisSetting::parse("XIZ"), std::invalid_argument);
    EXPECT_THROW(BasisSetting::parse("XQ"), std::invalid_argument);
}

TEST(Settings, DeterministicAndUniform) {
    auto a = sample_settings(4, 3000, 11);
    auto b = sample_settings(4, 3000, 11);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, sample_settings(4, 3000, 12));
    int counts[4] = {0, 0, 0, 0};
    for (const auto &s : a) {
        for (Pauli p : s.bases) {
            counts[static_cast<int>(p)]++;
        }
    }
    EXPECT_EQ(counts[0], 0);
    // Each letter count is Binomial(12000, 1/3); 5 sigma is about 258.
    for (int l = 1; l < 4; l++) {
        EXPECT_NEAR(counts[l], 4000, 258);
    }
    EXPECT_THROW(sample_settings(3, 1, 0), std::invalid_argument);
}

TEST(Sampling, BornDistributionMatchesDense) {
    auto rho = random_mixed_state(3, 8);
    OutcomeSampler sampler(rho, 0.0);
    OutcomeSampler uncached(rho, 0.0, false);
    for (const char *s : {"XYZ", "ZZZ", "YXX"}) {
        auto set = BasisSetting::parse(s);
        auto want = oracle::born(rho.matrix(), set);
        auto got = sampler.distribution(set);
        auto got2 = uncached.distribution(set);
        for (size_t b = 0; b < want.size(); b++) {
            EXPECT_NEAR(got[b], want[b], 1e-12);
            EXPECT_NEAR(got2[b], want[b], 1e-12);
        }
    }
}

TEST(Sampling, CachedAndUncachedAgreeShotForShot) {
    auto rho = random_mixed_state(3, 8);
    auto set = BasisSetting::parse("XZY");
    auto a = OutcomeSampler(rho, 0.02).sample(set, 500, 77);
    auto b = OutcomeSampler(rho, 0.02, false).sample(set, 500, 77);
    EXPECT_EQ(a.outcomes, b.outcomes);
    EXPECT_EQ(sample_outcomes(rho, set, 500, 0.02, 77).outcomes, a.outcomes);
}

TEST(Sampling, ChiSquaredAgainstBorn) {
    auto rho = random_mixed_state(3, 9);
    auto set = BasisSetting::parse("YZX");
    const int shots = 40000;
    auto rec = sample_outcomes(rho, set, shots, 0.0, 5);
    auto p = oracle::born(rho.matrix(), set);
    std::vector<int> hist(8, 0);
    for (uint32_t o : rec.outcomes) {
        hist[o]++;
    }
    double chi2 = 0;
    for (int b = 0; b < 8; b++) {
        double e = p[b] * shots;
        chi2 += (hist[b] - e) * (hist[b] - e) / e;
    }
    // 7 dof: P(chi2 > 24.32) = 0.001.
    EXPECT_LT(chi2, 24.32);
}

TEST(Sampling, DetectionErrorsFlipBits) {
    DensityMatrix rho(basis_state(2, 0));
    auto rec = sample_outcomes(rho, BasisSetting::parse("ZZ"), 100000, 0.1, 3);
    std::vector<int> hist(4, 0);
    for (uint32_t o : rec.outcomes) {
        hist[o]++;
    }
    const double want[4] = {0.81, 0.09, 0.09, 0.01};
    for (int b = 0; b < 4; b++) {
        double sd = std::sqrt(want[b] * (1 - want[b]) / 1e5);
        EXPECT_NEAR(hist[b] / 1e5, want[b], 5 * sd);
    }
}

TEST(Sampling, RecordsIndependentOfOrderAndThreads) {
    auto rho = random_mixed_state(3, 10);
    OutcomeSampler sampler(rho, 0.01);
    auto settings = sample_settings(3, 20, 4);
    auto recs = sample_records(sampler, settings, 30, 99);
    ASSERT_EQ(recs.size(), 20u);
    for (size_t j = 0; j < recs.size(); j++) {
        EXPECT_EQ(recs[j].setting, settings[j]);
        EXPECT_EQ(recs[j].source, RecordSource::Simulated);
        auto single = sampler.sample(settings[j], 30, derive_seed(99, j));
        EXPECT_EQ(single.outcomes, recs[j].outcomes);
    }
}

TEST(Sampling, EmpiricalDistribution) {
    MeasurementRecord r{BasisSetting::parse("Z"), {0, 1, 1, 1}};
    auto d = empirical_distribution(r);
    EXPECT_DOUBLE_EQ(d[0], 0.25);
    EXPECT_DOUBLE_EQ(d[1], 0.75);
}

TEST(RecordIo, RoundTripAndByteStable) {
    auto rho = random_mixed_state(3, 12);
    auto recs = sample_records(OutcomeSampler(rho, 0.0), sample_settings(3, 5, 1), 7, 2);
    std::string text = dump(recs);
    auto back = load(text);
    EXPECT_EQ(back, recs);
    EXPECT_EQ(dump(back), text);
    EXPECT_EQ(text.rfind("# shadowrec v1 n=3 NU=5 NS=7", 0), 0u);
}

TEST(RecordIo, ExternalRecordsHaveNoSeed) {
    std::vector<MeasurementRecord> r = {{BasisSetting::parse("XZ"), {0, 3}}, {BasisSetting::parse("YY"), {1, 2}}};
    std::string text = dump(r);
    EXPECT_EQ(text, "# shadowrec v1 n=2 NU=2 NS=2\nB XZ\n00\n11\nB YY\n01\n10\n");
    EXPECT_EQ(load(text), r);
}

TEST(RecordIo, FileRoundTrip) {
    auto path = (std::filesystem::temp_directory_path() / "shadow_records_test.txt").string();
    std::vector<MeasurementRecord> r = {{BasisSetting::parse("XZY"), {0, 5, 7}}, {BasisSetting::parse("ZZZ"), {1, 2, 4}}};
    write_records(path, r);
    EXPECT_EQ(read_records(path), r);
    std::filesystem::remove(path);
    EXPECT_THROW(read_records(path), DataError);
}

TEST(RecordIo, MalformedInputsNameTheLine) {
    auto expect_error = [](const std::string &text, const std::string &needle) {
        try {
            load(text);
            ADD_FAILURE() << "no error for: " << text;
        } catch (const DataError &e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_error("# shadowrec v1 n=2 NU=2 NS=1\nB XZ\n0\nB XX\n00\n", "line 3");
    expect_error("# shadowrec v1 n=2 NU=2 NS=1\nB XZ\n00\nB XI\n00\n", "line 4");
    expect_error("# shadowrec v1 n=2 NU=2 NS=1\nB XZ\n02\nB XX\n00\n", "line 3");
    expect_error("# shadowrec v1 n=2 NU=2 NS=2\nB XZ\n00\nB XX\n00\n11\n", "line 4");
    expect_error("# shadowrec v1 n=2 NU=3 NS=1\nB XZ\n00\nB XX\n00\n", "record");
    expect_error("B XZ\n00\n", "line 1");
}

TEST(RecordIo, RejectsMismatchedShapesOnWrite) {
    std::vector<MeasurementRecord> r = {{BasisSetting::parse("XZ"), {0}}, {BasisSetting::parse("XZ"), {0, 1}}};
    std::ostringstream os;
    EXPECT_THROW(write_records(os, r), std::invalid_argument);
}

TEST(Calibration, InverseRecoversIdealDistribution) {
    std::vector<double> ideal = {0.5, 0.1, 0.0, 0.15, 0.05, 0.05, 0.1, 0.05};
    CalibrationMatrix cal{{0.02, 0.05, 0.1}, {0.03, 0.01, 0.07}};
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(ideal.data(), 8);
    // Dense oracle of the per-qubit confusion.
    std::vector<Matrix> f;
    for (int i = 0; i < 3; i++) {
        Matrix a(2, 2);
        a << 1 - cal.p0[i], cal.p1[i], cal.p0[i], 1 - cal.p1[i];
        f.push_back(a);
    }
    Eigen::VectorXd measured = oracle::kron_all(f).real() * v;
    std::vector<double> m(measured.data(), measured.data() + 8);
    auto out = calibrate_correct(m, cal);
    for (int b = 0; b < 8; b++) {
        EXPECT_NEAR(out.probs[b], ideal[b], 1e-12);
    }
    EXPECT_NEAR(out.min_value, 0.0, 1e-12);
}

TEST(Calibration, NegativeQuasiProbabilitiesKept) {
    std::vector<double> d = {1.0, 0.0};
    auto out = calibrate_correct(d, CalibrationMatrix::symmetric(1, 0.1));
    EXPECT_NEAR(out.probs[0], 0.9 / 0.8, 1e-14);
    EXPECT_NEAR(out.probs[1], -0.1 / 0.8, 1e-14);
    EXPECT_TRUE(out.has_negative());
}

TEST(Calibration, SingularAndInvalid) {
    std::vector<double> d = {0.5, 0.5};
    EXPECT_THROW(calibrate_correct(d, CalibrationMatrix::symmetric(1, 0.5)), std::domain_error);
    EXPECT_THROW(calibrate_correct(d, CalibrationMatrix{{1.2}, {0.0}}), std::invalid_argument);
    EXPECT_THROW(calibrate_correct(d, CalibrationMatrix::symmetric(2, 0.1)), std::invalid_argument);
}

TEST(Calibration, FileRoundTrip) {
    auto path = (std::filesystem::temp_directory_path() / "shadow_cal_test.txt").string();
    CalibrationMatrix cal{{0.01, 0.02}, {0.03, 0.125}};
    write_calibration(path, cal);
    auto back = read_calibration(path);
    EXPECT_EQ(back.p0, cal.p0);
    EXPECT_EQ(back.p1, cal.p1);
    std::filesystem::remove(path);
    std::istringstream bad("q 0 p0 0.1 p1\n");
    EXPECT_THROW(read_calibration(bad), DataError);
}

TEST(Signed, ExpectationAndMask) {
    std::vector<double> d = {0.4, 0.1, 0.2, 0.3};
    EXPECT_NEAR(signed_expectation(d, 0b11), 0.4 - 0.1 - 0.2 + 0.3, 1e-15);
    EXPECT_NEAR(signed_expectation(d, 0b10), 0.4 + 0.1 - 0.2 - 0.3, 1e-15);
    EXPECT_EQ(support_mask(PauliString::parse("ZIX")), 0b101u);
}
