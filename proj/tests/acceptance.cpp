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

// Acceptance checks. Prints one "CRITERION n: PASS|FAIL" line per criterion, preceded by
// indented detail lines. Exit status is 0 only when every selected criterion passes.
//
//   shadow_acceptance                 all criteria
//   shadow_acceptance --criterion 4   one criterion

#include <array>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "shadow/bounds/bounds.hpp"
#include "shadow/planner/planner.hpp"
#include "shadow/qcore/exact.hpp"
#include "shadow/stats/stats.hpp"
#include "shadow/workflow/scenarios.hpp"

using namespace shadow;
using namespace shadow::workflow;
using nlohmann::json;

namespace {

constexpr uint64_t kSeed = 1;

void detail(const char *format, ...) __attribute__((format(printf, 1, 2)));
void detail(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    std::cout << "  " << buf << "\n";
}

std::pair<double, double> mean_sd(const std::vector<double> &v) {
    double m = 0;
    for (double x : v) {
        m += x;
    }
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return {m, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

double ls_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

ShadowEnsemble simulate(const OutcomeSampler &sampler, int n_u, int n_s, uint64_t seed) {
    auto settings = sample_settings(sampler.n_qubits(), n_u, derive_seed(seed, 0));
    return ShadowEnsemble(sample_records(sampler, settings, n_s, derive_seed(seed, 1)));
}

DensityMatrix depolarized_ghz5() { return depolarized_state(ghz_state(5), 0.1); }

/// Looks up a numeric column of a scenario table by matching leading key columns.
double cell(const Table &t, const std::vector<std::string> &keys, const std::string &column) {
    size_t col = 0;
    while (col < t.header.size() && t.header[col] != column) {
        col++;
    }
    for (const auto &row : t.rows) {
        bool match = true;
        for (size_t i = 0; i < keys.size(); i++) {
            match &= row[i] == keys[i];
        }
        if (match) {
            return std::stod(row.at(col));
        }
    }
    throw std::runtime_error("no row for " + keys.front() + " in column " + column);
}

// 1. Mean of o2 over independent ensembles against tr(O rho^2).
bool unbiasedness() {
    const std::vector<std::string> names = {"ZZ", "XI", "XY"};
    const int reps = 500;
    bool ok = true;
    double worst = 0;
    for (int s = 0; s < 5; s++) {
        auto rho = random_mixed_state(2, derive_seed(kSeed, 1, s));
        OutcomeSampler sampler(rho, 0.0);
        std::vector<std::vector<double>> vals(names.size(), std::vector<double>(reps));
        for (int r = 0; r < reps; r++) {
            auto ens = simulate(sampler, 50, 10, derive_seed(kSeed, 2, s * reps + r));
            for (size_t k = 0; k < names.size(); k++) {
                vals[k][r] = estimate_o2(ens, Observable::parse(names[k]));
            }
        }
        for (size_t k = 0; k < names.size(); k++) {
            const Matrix o = oracle::observable(Observable::parse(names[k]));
            const double want = (o * rho.matrix() * rho.matrix()).trace().real();
            auto [m, sd] = mean_sd(vals[k]);
            const double z = (m - want) / (sd / std::sqrt(double(reps)));
            worst = std::max(worst, std::abs(z));
            ok &= std::abs(z) <= 3;
            detail("state %d %s: mean %.6f exact %.6f z %+.2f", s, names[k].c_str(), m, want, z);
        }
    }
    detail("max |z| = %.2f (limit 3)", worst);
    return ok;
}

// 2. Log-slope in m of the exact mitigated error against log(eps).
bool suppression_law() {
    bool ok = true;
    const auto o = Observable::parse("ZZIII");
    for (double eps : {0.05, 0.1, 0.2}) {
        auto rho = depolarized_state(ghz_state(5), eps);
        std::vector<double> m_axis, log_err;
        for (int m = 1; m <= 4; m++) {
            const double err = std::abs(mitigated_expval_exact(rho, o, m) - 1.0);
            m_axis.push_back(m);
            log_err.push_back(std::log(err));
            detail("eps %.2f m %d: error %.6e", eps, m, err);
        }
        const double slope = ls_slope(m_axis, log_err);
        const double want = std::log(eps);
        const double rel = std::abs(slope - want) / std::abs(want);
        ok &= rel <= 0.10;
        detail("eps %.2f: slope %.4f, log eps %.4f, relative deviation %.1f%% (limit 10%%)", eps, slope, want,
               100 * rel);
    }
    return ok;
}

// 3. Exact purity and its recovery from a 2000 x 512 pool.
bool purity_anchor() {
    auto rho = depolarized_ghz5();
    const double exact = purity_exact(rho, 2);
    const double quoted = 0.81001;
    auto pool = build_pool(rho, 2000, 512, derive_seed(kSeed, 3));
    const EstimateOptions serial{O2Strategy::Auto, false};
    const double s2 = estimate_s2(ShadowEnsemble(pool.records), serial);
    const double sigma = bootstrap_std(2000, 200, derive_seed(kSeed, 4), [&](std::span<const int> idx) {
        std::vector<MeasurementRecord> pick;
        for (int i : idx) {
            pick.push_back(pool.records[i]);
        }
        return estimate_s2(ShadowEnsemble(std::move(pick)), serial);
    });
    detail("exact purity %.7f, quoted anchor %.5f, difference %.2e", exact, quoted, exact - quoted);
    detail("pool s2 %.6f, bootstrap sigma %.6f", s2, sigma);
    detail("|s2 - exact| = %.2f sigma, |s2 - quoted| = %.2f sigma (limit 3)", std::abs(s2 - exact) / sigma,
           std::abs(s2 - quoted) / sigma);
    return std::abs(s2 - exact) <= 3 * sigma && std::abs(s2 - quoted) <= 3 * sigma;
}

// 4. Delta^2 against N_U and N_S for depolarized random 4-qubit states.
bool scaling_exponents() {
    const std::vector<int> nus = {100, 200, 400, 800}, nss = {4, 16, 64, 256};
    json j = {{"scenario", "scaling"}, {"state", "haar"},       {"n_qubits", 4},       {"n_states", 8},
              {"state_seed", kSeed},   {"eps_depol", 0.1},      {"n_u", nus},          {"n_s", nss},
              {"observables", {"ZZII"}}, {"pool_nu", 2000},     {"pool_ns", 512},      {"n_resamples", 80},
              {"seed", kSeed}};
    auto t = run_table(ExperimentConfig::from_json(j));
    auto d2 = [&](int nu, int ns) {
        return cell(t, {"ZZII", std::to_string(nu), std::to_string(ns)}, "mean_delta2");
    };
    std::vector<double> lx, ly;
    for (int nu : nus) {
        lx.push_back(std::log(nu));
        ly.push_back(std::log(d2(nu, 256)));
        detail("N_U %d: Delta^2(N_S=4) %.4e, (16) %.4e, (64) %.4e, (256) %.4e", nu, d2(nu, 4), d2(nu, 16),
               d2(nu, 64), d2(nu, 256));
    }
    const double slope = ls_slope(lx, ly);
    bool ok = std::abs(slope + 1) <= 0.15;
    detail("log-log slope vs N_U at N_S=256: %.4f (want -1 +- 0.15)", slope);
    for (int nu : nus) {
        const double ratio = (d2(nu, 4) - d2(nu, 256)) / d2(nu, 256);
        ok &= ratio > 0.2;
        detail("N_U %d: flattening ratio %.3f (want > 0.2)", nu, ratio);
    }
    return ok;
}

// 5. Model fit on a simulated GHZ_5 grid, optimal allocation, synthetic recovery.
bool ghz_model_fit() {
    const std::vector<int> nus = {512, 1024, 2048, 4096}, nss = {2, 4, 8, 16, 32, 64};
    const double tau = 1000;
    json j = {{"scenario", "ghz-contour"}, {"n_qubits", 5}, {"eps_depol", 0.1}, {"n_u", nus}, {"n_s", nss},
              {"observables", {"ZZIII"}}, {"n_reps", 400},  {"seed", kSeed}};
    auto t = run_table(ExperimentConfig::from_json(j));
    const MseModel model{std::stod(t.rows[0][4]), std::stod(t.rows[0][5])};
    bool ok = true;
    for (const auto &r : t.rows) {
        detail("N_U %4s N_S %2s: Delta^2 %.4e, model %.4e", r[0].c_str(), r[1].c_str(), std::stod(r[2]),
               std::stod(r[3]));
    }
    detail("fit c1 %.1f c2 %.2f", model.c1, model.c2);

    // Exhaustive-search oracle over integer N_S with N_U = floor(T / (tau + N_S)).
    const double budget = 1e9;
    int best_ns = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int ns = 1; ns <= 100000; ns++) {
        const double nu = std::floor(budget / (tau + ns));
        const double v = model.predict(nu, ns);
        if (v < best) {
            best = v;
            best_ns = ns;
        }
    }
    const double analytic = std::cbrt(model.c2 * tau);
    const auto plan = optimize_allocation(model, budget, tau);
    ok &= std::abs(best_ns - analytic) <= 2 && plan.n_s == best_ns;
    detail("N_S*: exhaustive %d, optimizer %d, (c2 tau)^(1/3) = %.2f (within 2)", best_ns, plan.n_s, analytic);

    std::vector<GridPoint> synth;
    const MseModel truth{3384, 22};
    for (int nu : nus) {
        for (int ns : nss) {
            synth.push_back({nu, ns, truth.predict(nu, ns)});
        }
    }
    const auto rec = fit_mse_model(synth);
    const double e1 = std::abs(rec.c1 / truth.c1 - 1), e2 = std::abs(rec.c2 / truth.c2 - 1);
    ok &= e1 < 1e-6 && e2 < 1e-6;
    detail("synthetic recovery: c1 rel err %.2e, c2 rel err %.2e (limit 1e-6)", e1, e2);

    const double r1 = model.c1 / truth.c1 - 1, r2 = model.c2 / truth.c2 - 1;
    ok &= std::abs(r1) <= 0.5 && std::abs(r2) <= 0.5;
    detail("fit vs 3384 / 22: %+.0f%% / %+.0f%% (limit 50%%)", 100 * r1, 100 * r2);
    return ok;
}

// 6. Exact-path noise discrimination on GHZ_5.
bool noise_discrimination() {
    const std::vector<std::string> gens = {"XXXXX", "ZZIII", "IZZII", "IIZZI", "IIIZZ"};
    json j = {{"scenario", "noise-analysis"}, {"n_qubits", 5}, {"delta_coh", 0.15}, {"p_deph", 0.1},
              {"p_det", 0.01},               {"observables", gens}};
    auto t = run_table(ExperimentConfig::from_json(j));
    bool ok = true;
    double worst = 0;
    for (const auto &g : gens) {
        worst = std::max(worst, std::abs(cell(t, {"coherent", g}, "direct") - cell(t, {"coherent", g}, "mitigated")));
    }
    ok &= worst < 1e-9;
    detail("coherent: max |SD - direct| over generators %.2e (limit 1e-9)", worst);

    // Dense oracles for the two direct values.
    const Matrix ghz = DensityMatrix(ghz_state(5)).matrix();
    const Matrix x5 = oracle::observable(Observable::parse("XXXXX"));
    const double deph_oracle = (x5 * oracle::dephase(ghz, 5, 0.1)).trace().real();
    auto dist = oracle::born(ghz, BasisSetting::parse("XXXXX"));
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(dist.data(), static_cast<Eigen::Index>(dist.size()));
    Eigen::VectorXd q = oracle::confusion(5, 0.01, 0.01).real() * p;
    double det_oracle = 0;
    for (Eigen::Index b = 0; b < q.size(); b++) {
        det_oracle += (__builtin_popcountll(static_cast<uint64_t>(b)) % 2 ? -1 : 1) * q[b];
    }

    const double deph_d = cell(t, {"dephasing", "XXXXX"}, "direct");
    const double deph_m = cell(t, {"dephasing", "XXXXX"}, "mitigated");
    const double det_d = cell(t, {"detection", "XXXXX"}, "direct");
    const double det_m = cell(t, {"detection", "XXXXX"}, "mitigated");
    ok &= std::abs(deph_d - 0.8) < 1e-6 && std::abs(deph_oracle - 0.8) < 1e-6 && std::abs(deph_d - deph_oracle) < 1e-6;
    ok &= std::abs(det_d - std::pow(0.98, 5)) < 1e-6 && std::abs(det_d - det_oracle) < 1e-6;
    ok &= std::abs(1 - deph_m) < std::abs(1 - deph_d) && std::abs(1 - det_m) < std::abs(1 - det_d);
    detail("dephasing <XXXXX>: direct %.9f (oracle %.9f, want 0.8), SD %.9f", deph_d, deph_oracle, deph_m);
    detail("detection <XXXXX>: direct %.9f (oracle %.9f, want %.9f), SD %.9f", det_d, det_oracle, std::pow(0.98, 5),
           det_m);
    return ok;
}

// 7. Readout calibration inverse, and SD against calibration-only on simulated records.
bool detection_calibration() {
    bool ok = true;
    std::mt19937_64 rng(derive_seed(kSeed, 7));
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int trial = 0; trial < 20; trial++) {
        const double p0 = 0.1 * u(rng), p1 = 0.1 * u(rng);
        std::vector<double> dist(32);
        double total = 0;
        for (auto &x : dist) {
            total += x = u(rng);
        }
        Eigen::VectorXd p(32);
        for (int i = 0; i < 32; i++) {
            p[i] = dist[i] / total;
        }
        Eigen::VectorXd noisy = oracle::confusion(5, p0, p1).real() * p;
        std::vector<double> nv(noisy.data(), noisy.data() + 32);
        CalibrationMatrix cal{std::vector<double>(5, p0), std::vector<double>(5, p1)};
        auto back = calibrate_correct(nv, cal).probs;
        for (int i = 0; i < 32; i++) {
            worst = std::max(worst, std::abs(back[i] - p[i]));
        }
    }
    ok &= worst <= 1e-10;
    detail("forward then inverse: max error %.2e (limit 1e-10)", worst);

    NoiseConfig noise;
    noise.p_deph = 0.1;
    OutcomeSampler sampler(prepare_noisy_ghz(5, noise), 0.01);
    auto settings = sample_settings(5, 2666, derive_seed(kSeed, 8));
    auto recs = sample_records(sampler, settings, 50, derive_seed(kSeed, 9));
    const auto cal = CalibrationMatrix::symmetric(5, 0.01);
    const ShadowEnsemble ens(recs);
    const RatioOptions serial{1e-6, std::nullopt, {O2Strategy::Auto, false}};
    auto report = [&](const std::string &name) {
        const auto o = Observable::parse(name);
        const double sd = mitigated_ratio(ens, o, serial);
        const double sd_err = bootstrap_errorbars(recs, o, 200, derive_seed(kSeed, 10));
        const double calibrated = direct_expectation(recs, o, &cal);
        const double cal_err = bootstrap_std(static_cast<int>(recs.size()), 200, derive_seed(kSeed, 11),
                                             [&](std::span<const int> idx) {
                                                 std::vector<MeasurementRecord> pick;
                                                 for (int i : idx) {
                                                     pick.push_back(recs[i]);
                                                 }
                                                 return direct_expectation(pick, o, &cal);
                                             });
        detail("%s: SD %.4f +- %.4f, calibrated %.4f +- %.4f", name.c_str(), sd, sd_err, calibrated, cal_err);
        return std::array<double, 4>{sd, sd_err, calibrated, cal_err};
    };
    const auto x = report("XXXXX");
    const auto z = report("ZZIII");
    ok &= x[0] > x[2];
    const double combined = std::hypot(z[1], z[3]);
    ok &= std::abs(z[0] - z[2]) <= 2 * combined;
    detail("ZZIII difference %.4f, two combined bootstrap sigma %.4f", std::abs(z[0] - z[2]), 2 * combined);
    return ok;
}

// 8. Shrunk against plain denominator on the depolarized GHZ_5 pool.
bool bayes_estimator() {
    auto rho = depolarized_ghz5();
    auto pool = build_pool(rho, 2000, 512, derive_seed(kSeed, 12));
    const auto o = Observable::parse("ZZIII");
    ResampleOptions plain, shrunk;
    plain.ratio.estimate.parallel = shrunk.ratio.estimate.parallel = false;
    shrunk.ratio.prior = BayesPrior{0.9, 100};
    bool ok = true;
    for (int nu : {16, 32, 64, 1024, 1536}) {
        const uint64_t seed = derive_seed(kSeed, 13, nu);
        auto a = resample_delta2(pool, rho, o, nu, 50, 200, seed, plain);
        auto b = resample_delta2(pool, rho, o, nu, 50, 200, seed, shrunk);
        const bool pass = nu <= 64 ? b.mean_delta2 < a.mean_delta2
                                   : std::abs(b.mean_delta2 / a.mean_delta2 - 1) <= 0.10;
        ok &= pass;
        detail("N_U %4d: MSE plain %.4e (%d degenerate excluded), shrunk %.4e (%d), ratio %.3f %s", nu,
               a.mean_delta2, a.degenerate, b.mean_delta2, b.degenerate, b.mean_delta2 / a.mean_delta2,
               pass ? "ok" : "FAIL");
    }
    return ok;
}

Observable random_observable(int n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> terms(1, 4), letter(0, 3);
    std::uniform_real_distribution<double> coeff(-1, 1);
    Observable o(n);
    const int count = terms(rng);
    for (int t = 0; t < count; t++) {
        std::vector<Pauli> l(n);
        for (auto &p : l) {
            p = static_cast<Pauli>(letter(rng));
        }
        o.add(PauliString(l, coeff(rng)));
    }
    return o;
}

// 9. Variance functionals and bounds.
bool variance_bounds() {
    bool ok = true;
    const auto z = Observable::parse("Z");
    const double u0z = u0(z, maximally_mixed(1)), u1z = u1(z, maximally_mixed(1));
    ok &= u0z == 0.0 && u1z == 3.0;
    detail("u0(Z, I/2) = %.17g, u1(Z, I/2) = %.17g (want 0 and 3)", u0z, u1z);

    std::mt19937_64 rng(derive_seed(kSeed, 14));
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; i++) {
        auto rho = random_mixed_state(3, derive_seed(kSeed, 15, i));
        auto o = random_observable(3, rng);
        const int k = static_cast<int>(o.support().size());
        double sum_sq = 0;
        for (const auto &t : o.terms()) {
            sum_sq += t.coefficient() * t.coefficient();
        }
        // tr(O^2) over the k support qubits is 2^k sum alpha^2.
        const double limit = std::pow(2.0, k) * std::pow(2.0, k) * sum_sq;
        auto f = u_functionals(o, rho);
        worst = std::max(worst, f.u0 + f.u1 - limit);
    }
    ok &= worst <= 1e-9;
    detail("max of u0 + u1 - 2^k tr(O^2) over 100 random pairs: %.3e (limit 1e-9)", worst);

    struct Case {
        const char *o;
        int n_s;
    };
    const int reps = 40000;
    auto rho2 = random_mixed_state(2, derive_seed(kSeed, 16));
    OutcomeSampler sampler(rho2, 0.0);
    for (const Case c : {Case{"ZZ", 1}, Case{"ZZ", 10}, Case{"XI + 0.5*YZ", 4}}) {
        const auto o = Observable::parse(c.o);
        auto settings = sample_settings(2, reps, derive_seed(kSeed, 17, c.n_s));
        auto recs = sample_records(sampler, settings, c.n_s, derive_seed(kSeed, 18, c.n_s));
        std::vector<double> v(reps);
        for (int r = 0; r < reps; r++) {
            v[r] = estimate_linear(ShadowEnsemble({recs[r]}), o);
        }
        const double var = mean_sd(v).second * mean_sd(v).second;
        const double want = var_bound_linear(o, rho2, c.n_s);
        const double rel = std::abs(var / want - 1);
        ok &= rel <= 0.05;
        detail("Var[tr(O rho_hat)] %s N_S=%d: empirical %.5f, u0 + u1/N_S %.5f, deviation %.1f%% (limit 5%%)", c.o,
               c.n_s, var, want, 100 * rel);
    }

    const auto zz = Observable::parse("ZZ");
    double worst_ratio = 0;
    uint64_t cell_index = 0;
    for (int s = 0; s < 3; s++) {
        auto rho = random_mixed_state(2, derive_seed(kSeed, 19, s));
        OutcomeSampler smp(rho, 0.0);
        for (int nu : {10, 50}) {
            for (int ns : {1, 10}) {
                std::vector<double> o2v, s2v;
                const uint64_t cell_seed = derive_seed(kSeed, 20, cell_index++);
                for (int r = 0; r < 500; r++) {
                    auto ens = simulate(smp, nu, ns, derive_seed(cell_seed, r));
                    o2v.push_back(estimate_o2(ens, zz));
                    s2v.push_back(estimate_s2(ens));
                }
                const double vo = std::pow(mean_sd(o2v).second, 2), vs = std::pow(mean_sd(s2v).second, 2);
                const double bo = var_bound_o2(zz, rho, nu, ns), bs = var_bound_s2(rho, nu, ns);
                ok &= vo <= bo && vs <= bs;
                worst_ratio = std::max({worst_ratio, vo / bo, vs / bs});
                detail("state %d N_U %2d N_S %2d: Var o2 %.4f <= %.4f, Var s2 %.4f <= %.4f", s, nu, ns, vo, bo, vs,
                       bs);
            }
        }
    }
    detail("largest empirical / bound ratio %.3f (limit 1)", worst_ratio);
    return ok;
}

// 10. Exponent fit on synthetic data and on a small simulated sweep.
bool gamma_exponent() {
    bool ok = true;
    std::vector<int> ns = {2, 3, 4, 5};
    std::vector<double> nu;
    for (int n : ns) {
        nu.push_back(4 * std::pow(2.0, 0.82 * n));
    }
    const auto fit = fit_exponent(ns, nu);
    ok &= std::abs(fit.gamma - 0.82) <= 1e-6;
    detail("synthetic: gamma %.9f (want 0.82 +- 1e-6)", fit.gamma);

    GammaStudyConfig cfg;
    cfg.resample.ratio.estimate.parallel = false;
    const auto study = fit_gamma(0.01, ns, cfg, derive_seed(kSeed, 21));
    for (const auto &p : study.points) {
        detail("n_q %d: required N_U %s", p.n_qubits, p.n_u ? std::to_string(*p.n_u).c_str() : "unreachable");
    }
    if (!study.fit) {
        detail("empirical sweep: no fit");
        return false;
    }
    ok &= study.fit->gamma > 0.5 && study.fit->gamma < 1.1;
    detail("empirical: gamma %.4f (want in (0.5, 1.1))", study.fit->gamma);
    return ok;
}

const std::map<int, std::pair<const char *, std::function<bool()>>> kCriteria = {
    {1, {"unbiasedness of o2", unbiasedness}},
    {2, {"error suppression slope in m", suppression_law}},
    {3, {"purity anchor", purity_anchor}},
    {4, {"scaling exponents", scaling_exponents}},
    {5, {"GHZ model fit and allocation", ghz_model_fit}},
    {6, {"noise-type discrimination", noise_discrimination}},
    {7, {"detection calibration", detection_calibration}},
    {8, {"shrunk purity denominator", bayes_estimator}},
    {9, {"variance bounds", variance_bounds}},
    {10, {"gamma exponent", gamma_exponent}},
};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (const auto &[id, entry] : kCriteria) {
        if (only && id != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = entry.second();
        } catch (const std::exception &e) {
            detail("exception: %s", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "CRITERION " << id << ": " << (pass ? "PASS" : "FAIL") << " (" << entry.first << ", " << std::fixed
                  << std::setprecision(1) << secs << " s)" << std::endl;
        std::cout.unsetf(std::ios::floatfield);
        all &= pass;
    }
    return all ? 0 : 1;
}
