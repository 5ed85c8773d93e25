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

#include "shadow/workflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "shadow/bounds/bounds.hpp"
#include "shadow/planner/planner.hpp"
#include "shadow/stats/stats.hpp"

#ifndef SHADOW_VERSION
#define SHADOW_VERSION "0.0.0"
#endif

namespace shadow::workflow {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Output {
    Table table;
    std::vector<Series> series;
    std::string title, xlabel, ylabel;
    bool log_x = false;
    bool log_y = false;
};

/// f(r) for r in [0, count), OpenMP over r, values kept in index order.
template <class F>
std::vector<double> parallel_map(int count, F &&f) {
    std::vector<double> out(count);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < count; r++) {
        out[r] = f(r);
    }
    return out;
}

/// Mean and sample std, skipping NaN.
std::pair<double, double> mean_sample_std(const std::vector<double> &v) {
    double sum = 0;
    int n = 0;
    for (double x : v) {
        if (!std::isnan(x)) {
            sum += x;
            n++;
        }
    }
    if (n < 2) {
        return {n == 1 ? sum : kNaN, kNaN};
    }
    const double mean = sum / n;
    double ss = 0;
    for (double x : v) {
        if (!std::isnan(x)) {
            ss += (x - mean) * (x - mean);
        }
    }
    return {mean, std::sqrt(ss / (n - 1))};
}

const EstimateOptions kSerial{O2Strategy::Auto, false};

RatioOptions ratio_options(const ExperimentConfig &cfg, bool with_prior) {
    RatioOptions r;
    r.floor = cfg.ratio_floor;
    r.estimate = kSerial;
    if (with_prior) {
        r.prior = cfg.prior;
    }
    return r;
}

ShadowEnsemble simulate_ensemble(const OutcomeSampler &sampler, int n_u, int n_s, uint64_t seed) {
    auto settings = sample_settings(sampler.n_qubits(), n_u, derive_seed(seed, 0));
    return ShadowEnsemble(sample_records(sampler, settings, n_s, derive_seed(seed, 1)));
}

std::vector<Observable> observables_for(const ExperimentConfig &cfg, int n_qubits) {
    auto os = cfg.parsed_observables();
    for (size_t i = 0; i < os.size(); i++) {
        if (os[i].n_qubits() != n_qubits) {
            throw ConfigError("config field 'observables[" + std::to_string(i) + "]': acts on " +
                              std::to_string(os[i].n_qubits()) + " qubits but the records have " +
                              std::to_string(n_qubits));
        }
    }
    return os;
}

std::vector<MeasurementRecord> load_records(const ExperimentConfig &cfg) {
    auto recs = read_records(cfg.records);
    if (recs.size() < 2) {
        throw DataError(cfg.records + ": need at least 2 settings");
    }
    return recs;
}

/// Per-term, per-record signed expectations with a flag for records that measure the term.
struct DirectTerms {
    std::vector<double> coeff;
    std::vector<std::vector<double>> value;  // [term][record]
    std::vector<std::vector<char>> match;    // [term][record]

    DirectTerms(std::span<const MeasurementRecord> records, const Observable &o, const CalibrationMatrix *cal) {
        std::vector<std::vector<double>> dists;
        for (const auto &r : records) {
            auto d = empirical_distribution(r);
            dists.push_back(cal ? calibrate_correct(d, *cal).probs : d);
        }
        for (const auto &t : o.terms()) {
            coeff.push_back(t.coefficient());
            auto &v = value.emplace_back(records.size(), 0.0);
            auto &m = match.emplace_back(records.size(), 0);
            const uint64_t mask = support_mask(t);
            for (size_t j = 0; j < records.size(); j++) {
                bool ok = true;
                for (int k = 0; k < t.n_qubits(); k++) {
                    ok &= t[k] == Pauli::I || t[k] == records[j].setting.bases[k];
                }
                m[j] = ok;
                v[j] = ok ? signed_expectation(dists[j], mask) : 0.0;
            }
        }
    }

    double operator()(std::span<const int> idx) const {
        double total = 0;
        for (size_t t = 0; t < coeff.size(); t++) {
            double sum = 0;
            int count = 0;
            for (int j : idx) {
                if (match[t][j]) {
                    sum += value[t][j];
                    count++;
                }
            }
            if (count == 0) {
                return kNaN;
            }
            total += coeff[t] * sum / count;
        }
        return total;
    }
};

std::vector<int> iota_indices(size_t n) {
    std::vector<int> idx(n);
    for (size_t j = 0; j < n; j++) {
        idx[j] = static_cast<int>(j);
    }
    return idx;
}

// ---- scenarios ----

Output scaling(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"observable", "n_u", "n_s", "mean_delta2", "std_delta2", "n_resamples", "n_states"};
    auto os = cfg.parsed_observables();
    AggregateConfig ac;
    ac.grid = cfg.cells();
    ac.pool_nu = cfg.pool_nu;
    ac.pool_ns = cfg.pool_ns;
    ac.n_resamples = cfg.n_resamples;
    ac.p_det = cfg.noise.p_det;
    ac.resample.ratio = ratio_options(cfg, false);
    auto factory = [&](int i) { return StateSample{make_state(cfg, i), static_cast<uint64_t>(i)}; };
    for (size_t oi = 0; oi < os.size(); oi++) {
        auto rep = aggregate_over_states(factory, cfg.state.n_states, os[oi], ac, cfg.seed);
        std::map<int, Series> by_ns;
        for (const auto &r : rep.rows) {
            out.table.rows.push_back({cfg.observables[oi], std::to_string(r.n_u), std::to_string(r.n_s),
                                      fmt(r.mean_delta2), fmt(r.std_delta2), std::to_string(r.n_resamples),
                                      std::to_string(r.n_states)});
            auto &s = by_ns[r.n_s];
            s.label = cfg.observables[oi] + " N_S=" + std::to_string(r.n_s);
            s.x.push_back(r.n_u);
            s.y.push_back(r.mean_delta2);
        }
        for (auto &[ns, s] : by_ns) {
            out.series.push_back(std::move(s));
        }
    }
    out.title = "Resampled error vs settings";
    out.xlabel = "N_U";
    out.ylabel = "mean Delta^2";
    out.log_x = out.log_y = true;
    return out;
}

Output purity_sweep(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"eps", "exact_purity", "n_u", "n_s", "s2_mean", "s2_std", "n_reps"};
    const auto cells = cfg.cells();
    for (size_t ei = 0; ei < cfg.eps_values.size(); ei++) {
        ExperimentConfig c = cfg;
        c.noise.eps_depol = cfg.eps_values[ei];
        auto rho = make_state(c, 0);
        const double exact = purity_exact(rho, 2);
        OutcomeSampler sampler(rho, cfg.noise.p_det);
        Series s{"eps=" + fmt(cfg.eps_values[ei]), {}, {}};
        for (size_t ci = 0; ci < cells.size(); ci++) {
            auto [nu, ns] = cells[ci];
            const uint64_t cell_seed = derive_seed(cfg.seed, ei, ci);
            auto v = parallel_map(cfg.n_reps, [&](int r) {
                return estimate_s2(simulate_ensemble(sampler, nu, ns, derive_seed(cell_seed, r)), kSerial);
            });
            auto [m, sd] = mean_sample_std(v);
            out.table.rows.push_back({fmt(cfg.eps_values[ei]), fmt(exact), std::to_string(nu), std::to_string(ns),
                                      fmt(m), fmt(sd), std::to_string(cfg.n_reps)});
            s.x.push_back(nu);
            s.y.push_back(m);
        }
        out.series.push_back(std::move(s));
    }
    out.title = "Purity estimate vs settings";
    out.xlabel = "N_U";
    out.ylabel = "mean s2";
    out.log_x = true;
    return out;
}

Output gamma_fit(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"n_qubits", "n_u_required", "fit_c", "fit_gamma"};
    GammaStudyConfig g;
    g.eps = cfg.noise.eps_depol > 0 ? cfg.noise.eps_depol : 0.1;
    g.n_s = cfg.n_s.empty() ? 1 : cfg.n_s[0];
    g.nu_min = cfg.nu_min;
    g.nu_max = cfg.nu_max;
    g.n_reps = cfg.n_reps;
    g.resample.ratio = ratio_options(cfg, false);
    auto study = fit_gamma(cfg.delta2_target, cfg.n_qubits_list, g, cfg.seed);
    Series s{"required N_U", {}, {}};
    for (const auto &p : study.points) {
        out.table.rows.push_back({std::to_string(p.n_qubits), p.n_u ? std::to_string(*p.n_u) : "",
                                  study.fit ? fmt(study.fit->c) : "", study.fit ? fmt(study.fit->gamma) : ""});
        if (p.n_u) {
            s.x.push_back(p.n_qubits);
            s.y.push_back(*p.n_u);
        }
    }
    out.series.push_back(std::move(s));
    out.title = "Settings needed for the target error";
    out.xlabel = "n_qubits";
    out.ylabel = "N_U";
    out.log_y = true;
    return out;
}

Output ghz_contour(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"n_u", "n_s", "delta2", "predicted", "c1", "c2", "n_s_star"};
    auto rho = make_state(cfg, 0);
    const auto o = cfg.parsed_observables().front();
    const double target = mitigated_expval_exact(rho, o, 2);
    OutcomeSampler sampler(rho, cfg.noise.p_det);
    ResampleOptions ro;
    ro.ratio = ratio_options(cfg, false);
    const auto cells = cfg.cells();
    std::vector<GridPoint> grid;
    for (size_t ci = 0; ci < cells.size(); ci++) {
        auto [nu, ns] = cells[ci];
        grid.push_back({nu, ns, simulated_delta2(sampler, target, o, nu, ns, cfg.n_reps, derive_seed(cfg.seed, ci), ro)});
    }
    MseModel model;
    try {
        model = fit_mse_model(grid);
    } catch (const std::invalid_argument &e) {
        throw DataError(std::string("model fit: ") + e.what());
    }
    const double n_star = continuous_optimal_shots(model, cfg.tau);
    std::map<int, Series> measured, predicted;
    for (const auto &g : grid) {
        const double p = model.predict(g.n_u, g.n_s);
        out.table.rows.push_back({std::to_string(g.n_u), std::to_string(g.n_s), fmt(g.delta2), fmt(p), fmt(model.c1),
                                  fmt(model.c2), fmt(n_star)});
        auto &m = measured[g.n_u];
        m.label = "N_U=" + std::to_string(g.n_u);
        m.x.push_back(g.n_s);
        m.y.push_back(g.delta2);
        auto &q = predicted[g.n_u];
        q.label = "model N_U=" + std::to_string(g.n_u);
        q.x.push_back(g.n_s);
        q.y.push_back(p);
    }
    for (auto &[k, s] : measured) {
        out.series.push_back(std::move(s));
    }
    for (auto &[k, s] : predicted) {
        out.series.push_back(std::move(s));
    }
    out.title = "GHZ error grid and fitted model";
    out.xlabel = "N_S";
    out.ylabel = "Delta^2";
    out.log_x = out.log_y = true;
    return out;
}

Output planner_scenario(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"budget", "tau", "n_u", "n_s", "time", "predicted_delta2", "c1", "c2", "continuous_n_s"};
    auto grid = read_grid_csv(cfg.grid_csv);
    MseModel model;
    try {
        model = fit_mse_model(grid);
    } catch (const std::invalid_argument &e) {
        throw DataError(cfg.grid_csv + ": " + e.what());
    }
    for (double b : cfg.budgets) {
        auto p = optimize_allocation(model, b, cfg.tau);
        out.table.rows.push_back({fmt(p.budget), fmt(p.tau), std::to_string(p.n_u), std::to_string(p.n_s), fmt(p.time),
                                  fmt(p.predicted_delta2), fmt(model.c1), fmt(model.c2),
                                  fmt(continuous_optimal_shots(model, cfg.tau))});
    }
    return out;
}

Output mitigate_records(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"observable", "n_u", "direct", "mitigated", "stderr_boot"};
    auto recs = load_records(cfg);
    auto os = observables_for(cfg, recs.front().n_qubits());
    std::vector<int> sizes = cfg.n_u.empty() ? std::vector<int>{static_cast<int>(recs.size())} : cfg.n_u;
    for (size_t ui = 0; ui < sizes.size(); ui++) {
        if (sizes[ui] > static_cast<int>(recs.size())) {
            throw DataError(cfg.records + " has " + std::to_string(recs.size()) + " settings, fewer than n_u = " +
                            std::to_string(sizes[ui]));
        }
        std::span<const MeasurementRecord> sub(recs.data(), sizes[ui]);
        ShadowEnsemble ens(std::vector<MeasurementRecord>(sub.begin(), sub.end()));
        for (size_t oi = 0; oi < os.size(); oi++) {
            const double direct = direct_expectation(sub, os[oi]);
            const double ratio = mitigated_ratio(ens, os[oi], ratio_options(cfg, true));
            const double se = bootstrap_errorbars(sub, os[oi], cfg.n_boot, derive_seed(cfg.seed, oi, ui),
                                                  ratio_options(cfg, true));
            out.table.rows.push_back(
                {cfg.observables[oi], std::to_string(sizes[ui]), fmt(direct), fmt(ratio), fmt(se)});
        }
    }
    return out;
}

Output noise_analysis(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"noise", "observable", "ideal", "direct", "mitigated"};
    const int n = cfg.state.n_qubits;
    const auto os = cfg.parsed_observables();
    const DensityMatrix ideal(ghz_state(n));
    const NoiseConfig &nc = cfg.noise;

    auto detection_direct = [](const DensityMatrix &rho, const Observable &o, double p) {
        double total = 0;
        for (const auto &t : o.terms()) {
            total += t.is_identity() ? t.coefficient()
                                     : t.coefficient() * noisy_pauli_expectation(rho, PauliString(t.letters()), p);
        }
        return total;
    };
    auto add_rows = [&](const std::string &label, const DensityMatrix &rho, double p_det) {
        for (size_t oi = 0; oi < os.size(); oi++) {
            double direct, mitigated;
            if (p_det > 0) {
                direct = detection_direct(rho, os[oi], p_det);
                mitigated = detection_affected_mitigation(rho, os[oi], p_det);
            } else {
                direct = expval_exact(rho, os[oi]);
                mitigated = mitigated_expval_exact(rho, os[oi], 2);
            }
            out.table.rows.push_back(
                {label, cfg.observables[oi], fmt(expval_exact(ideal, os[oi])), fmt(direct), fmt(mitigated)});
        }
    };

    int active = 0;
    if (nc.delta_coh != 0) {
        NoiseConfig c;
        c.delta_coh = nc.delta_coh;
        add_rows("coherent", prepare_noisy_ghz(n, c), 0);
        active++;
    }
    if (nc.p_deph > 0) {
        NoiseConfig c;
        c.p_deph = nc.p_deph;
        add_rows("dephasing", prepare_noisy_ghz(n, c), 0);
        active++;
    }
    if (nc.eps_depol > 0) {
        NoiseConfig c;
        c.eps_depol = nc.eps_depol;
        add_rows("depolarizing", prepare_noisy_ghz(n, c), 0);
        active++;
    }
    if (nc.p_det > 0) {
        add_rows("detection", prepare_noisy_ghz(n, NoiseConfig{}), nc.p_det);
        active++;
    }
    if (active == 0) {
        add_rows("none", prepare_noisy_ghz(n, NoiseConfig{}), 0);
    } else if (active > 1) {
        NoiseConfig c = nc;
        c.p_det = 0;
        add_rows("combined", prepare_noisy_ghz(n, c), nc.p_det);
    }
    return out;
}

Output calibration(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"observable",    "direct",       "calibrated",       "mitigated",
                        "stderr_direct", "stderr_calibrated", "stderr_mitigated"};
    auto recs = load_records(cfg);
    const int n = recs.front().n_qubits();
    auto os = observables_for(cfg, n);
    CalibrationMatrix cal = cfg.calibration.empty() ? CalibrationMatrix::symmetric(n, cfg.noise.p_det)
                                                    : read_calibration(cfg.calibration);
    if (cal.n_qubits() != n) {
        throw DataError("calibration covers " + std::to_string(cal.n_qubits()) + " qubits, records have " +
                        std::to_string(n));
    }
    cal.validate();
    ShadowEnsemble ens(recs);
    const int nu = static_cast<int>(recs.size());
    const auto all = iota_indices(recs.size());
    for (size_t oi = 0; oi < os.size(); oi++) {
        const DirectTerms raw(recs, os[oi], nullptr), corrected(recs, os[oi], &cal);
        const double mitigated = mitigated_ratio(ens, os[oi], ratio_options(cfg, true));
        const double se_d = bootstrap_std(nu, cfg.n_boot, derive_seed(cfg.seed, oi, 0), raw);
        const double se_c = bootstrap_std(nu, cfg.n_boot, derive_seed(cfg.seed, oi, 1), corrected);
        const double se_m = bootstrap_errorbars(recs, os[oi], cfg.n_boot, derive_seed(cfg.seed, oi, 2),
                                                ratio_options(cfg, true));
        out.table.rows.push_back({cfg.observables[oi], fmt(raw(all)), fmt(corrected(all)), fmt(mitigated), fmt(se_d),
                                  fmt(se_c), fmt(se_m)});
    }
    return out;
}

Output bayes_study(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"n_u",         "n_s",         "mse_plain", "mse_bayes", "degenerate_plain",
                        "degenerate_bayes", "n_resamples"};
    auto rho = make_state(cfg, 0);
    const auto o = cfg.parsed_observables().front();
    const double target = mitigated_expval_exact(rho, o, 2);
    auto pool = build_pool(rho, cfg.pool_nu, cfg.pool_ns, derive_seed(cfg.seed, 0), cfg.noise.p_det);
    ResampleOptions plain, bayes;
    plain.ratio = ratio_options(cfg, false);
    bayes.ratio = ratio_options(cfg, true);
    Series sp{"plain", {}, {}}, sb{"bayes", {}, {}};
    const auto cells = cfg.cells();
    for (size_t ci = 0; ci < cells.size(); ci++) {
        auto [nu, ns] = cells[ci];
        const uint64_t s = derive_seed(cfg.seed, 1, ci);
        auto a = resample_delta2(pool, target, o, nu, ns, cfg.n_resamples, s, plain);
        auto b = resample_delta2(pool, target, o, nu, ns, cfg.n_resamples, s, bayes);
        out.table.rows.push_back({std::to_string(nu), std::to_string(ns), fmt(a.mean_delta2), fmt(b.mean_delta2),
                                  std::to_string(a.degenerate), std::to_string(b.degenerate),
                                  std::to_string(cfg.n_resamples)});
        sp.x.push_back(nu);
        sp.y.push_back(a.mean_delta2);
        sb.x.push_back(nu);
        sb.y.push_back(b.mean_delta2);
    }
    out.series = {sp, sb};
    out.title = "Ratio error with and without the purity prior";
    out.xlabel = "N_U";
    out.ylabel = "mean Delta^2";
    out.log_x = out.log_y = true;
    return out;
}

Output bounds_check(const ExperimentConfig &cfg) {
    Output out;
    out.table.header = {"observable", "quantity", "n_u",    "n_s", "empirical_var",
                        "reference",  "reference_kind", "n_reps", "pass"};
    auto rho = make_state(cfg, 0);
    const auto os = cfg.parsed_observables();
    OutcomeSampler sampler(rho, cfg.noise.p_det);
    const auto cells = cfg.cells();
    std::map<std::string, Series> emp, bnd;
    for (size_t ci = 0; ci < cells.size(); ci++) {
        auto [nu, ns] = cells[ci];
        const uint64_t cell_seed = derive_seed(cfg.seed, ci);
        // One set of ensembles per cell, shared across observables.
        std::vector<std::vector<double>> vals(cfg.n_reps);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < cfg.n_reps; r++) {
            auto ens = simulate_ensemble(sampler, nu, ns, derive_seed(cell_seed, r));
            auto batch = estimate_o2_batch(ens, os, kSerial);
            for (const auto &o : os) {
                batch.push_back(estimate_linear(ens, o));
            }
            vals[r] = std::move(batch);
        }
        auto column = [&](size_t k) {
            std::vector<double> v;
            for (const auto &row : vals) {
                v.push_back(row[k]);
            }
            return mean_sample_std(v).second;
        };
        // Upper bounds pass when var <= bound. The linear variance is exact, so it passes when within
        // three standard errors of a Gaussian sample variance.
        auto add = [&](const std::string &label, const std::string &q, double sd, double bound, bool exact) {
            const double var = sd * sd;
            const bool pass = exact ? std::abs(var - bound) <= 3 * bound * std::sqrt(2.0 / (cfg.n_reps - 1))
                                    : var <= bound;
            out.table.rows.push_back({label, q, std::to_string(nu), std::to_string(ns), fmt(var), fmt(bound),
                                      exact ? "exact" : "upper_bound", std::to_string(cfg.n_reps),
                                      pass ? "1" : "0"});
            const std::string key = label + " " + q + " N_S=" + std::to_string(ns);
            emp[key].label = key;
            emp[key].x.push_back(nu);
            emp[key].y.push_back(var);
            bnd[key].label = key + " bound";
            bnd[key].x.push_back(nu);
            bnd[key].y.push_back(bound);
        };
        add("I", "s2", column(0), var_bound_s2(rho, nu, ns), false);
        for (size_t oi = 0; oi < os.size(); oi++) {
            add(cfg.observables[oi], "o2", column(oi + 1), var_bound_o2(os[oi], rho, nu, ns), false);
            add(cfg.observables[oi], "o1", column(os.size() + 1 + oi), var_bound_linear(os[oi], rho, ns) / nu, true);
        }
    }
    for (auto &[k, s] : emp) {
        out.series.push_back(std::move(s));
    }
    for (auto &[k, s] : bnd) {
        out.series.push_back(std::move(s));
    }
    out.title = "Empirical variance vs bound";
    out.xlabel = "N_U";
    out.ylabel = "variance";
    out.log_x = out.log_y = true;
    return out;
}

Output dispatch(const ExperimentConfig &cfg) {
    const std::string &s = cfg.scenario;
    if (s == "scaling") return scaling(cfg);
    if (s == "purity-sweep") return purity_sweep(cfg);
    if (s == "gamma-fit") return gamma_fit(cfg);
    if (s == "ghz-contour") return ghz_contour(cfg);
    if (s == "planner") return planner_scenario(cfg);
    if (s == "mitigate-records") return mitigate_records(cfg);
    if (s == "noise-analysis") return noise_analysis(cfg);
    if (s == "calibration") return calibration(cfg);
    if (s == "bayes-study") return bayes_study(cfg);
    if (s == "bounds-check") return bounds_check(cfg);
    throw ConfigError("config field 'scenario': no table for \"" + s + "\"");
}

void write_manifest(const std::string &path, const ExperimentConfig &cfg, const std::vector<std::string> &files,
                    const std::string &error) {
    json m;
    m["scenario"] = cfg.scenario;
    m["config_sha256"] = config_hash(cfg);
    m["config"] = cfg.to_json();
    m["seeds"] = {{"seed", cfg.seed}, {"state_seed", cfg.state.seed}};
    m["versions"] = {{"shadowdistill", SHADOW_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"openmp", _OPENMP},
                     {"compiler", __VERSION__}};
    json names = json::array();
    for (const auto &f : files) {
        names.push_back(std::filesystem::path(f).filename().string());
    }
    m["outputs"] = names;
    m["status"] = error.empty() ? "ok" : "failed";
    if (!error.empty()) {
        m["error"] = error;
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << m.dump(2) << "\n";
}

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::write(std::ostream &out) const {
    auto line = [&](const std::vector<std::string> &cells) {
        for (size_t i = 0; i < cells.size(); i++) {
            out << (i ? "," : "") << cells[i];
        }
        out << "\n";
    };
    line(header);
    for (const auto &r : rows) {
        line(r);
    }
}

void Table::write(const std::string &path) const {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    write(out);
}

DensityMatrix make_state(const ExperimentConfig &cfg, int index) {
    const int n = cfg.state.n_qubits;
    if (cfg.state.kind == StateKind::Ghz) {
        NoiseConfig c = cfg.noise;
        c.p_det = 0;
        return prepare_noisy_ghz(n, c);
    }
    auto psi = haar_random_state(n, derive_seed(cfg.state.seed, static_cast<uint64_t>(index)));
    DensityMatrix rho = cfg.noise.eps_depol > 0 ? depolarized_state(psi, cfg.noise.eps_depol) : DensityMatrix(psi);
    return cfg.noise.p_deph > 0 ? dephase(rho, cfg.noise.p_deph) : rho;
}

double bootstrap_std(int n_records, int n_boot, uint64_t seed,
                     const std::function<double(std::span<const int>)> &stat) {
    if (n_boot < 2) {
        throw std::invalid_argument("bootstrap: n_boot must be >= 2");
    }
    if (n_records < 1) {
        throw std::invalid_argument("bootstrap: no records");
    }
    auto v = parallel_map(n_boot, [&](int b) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(b)));
        std::vector<int> idx(n_records);
        for (auto &i : idx) {
            i = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(n_records)));
        }
        return stat(idx);
    });
    return mean_sample_std(v).second;
}

double bootstrap_errorbars(std::span<const MeasurementRecord> records, const Observable &o, int n_boot, uint64_t seed,
                           const RatioOptions &opts) {
    if (records.size() < 2) {
        throw std::invalid_argument("bootstrap_errorbars: need at least 2 records");
    }
    RatioOptions serial = opts;
    serial.estimate.parallel = false;
    return bootstrap_std(static_cast<int>(records.size()), n_boot, seed, [&](std::span<const int> idx) {
        std::vector<MeasurementRecord> pick;
        pick.reserve(idx.size());
        for (int i : idx) {
            pick.push_back(records[i]);
        }
        try {
            return mitigated_ratio(ShadowEnsemble(std::move(pick)), o, serial);
        } catch (const DegenerateDenominator &) {
            return kNaN;
        }
    });
}

double direct_expectation(std::span<const MeasurementRecord> records, const Observable &o,
                          const CalibrationMatrix *cal) {
    if (records.empty()) {
        throw std::invalid_argument("direct_expectation: no records");
    }
    return DirectTerms(records, o, cal)(iota_indices(records.size()));
}

Table run_table(const ExperimentConfig &cfg) {
    cfg.validate();
    set_dense_qubit_cap(cfg.dense_cap);
    return dispatch(cfg).table;
}

RunResult run(const ExperimentConfig &cfg, const RunOptions &opts) {
    cfg.validate();
    set_dense_qubit_cap(cfg.dense_cap);
    std::filesystem::create_directories(cfg.output_dir);
    const auto dir = std::filesystem::path(cfg.output_dir);
    const std::string manifest = (dir / (cfg.scenario + ".manifest.json")).string();
    RunResult res;
    try {
        if (cfg.scenario == "simulate-records") {
            auto rho = make_state(cfg, 0);
            OutcomeSampler sampler(rho, cfg.noise.p_det);
            auto settings = sample_settings(rho.n_qubits(), cfg.n_u[0], derive_seed(cfg.seed, 0));
            auto recs = sample_records(sampler, settings, cfg.n_s[0], derive_seed(cfg.seed, 1));
            write_records(cfg.records, recs);
            res.files.push_back(cfg.records);
        } else {
            Output out = dispatch(cfg);
            const std::string csv = (dir / (cfg.scenario + ".csv")).string();
            out.table.write(csv);
            res.files.push_back(csv);
            if (opts.plot && !out.series.empty()) {
                const std::string svg = (dir / (cfg.scenario + ".svg")).string();
                write_svg_plot(svg, out.title, out.xlabel, out.ylabel, out.series, out.log_x, out.log_y);
                res.files.push_back(svg);
            }
        }
    } catch (const std::exception &e) {
        write_manifest(manifest, cfg, res.files, e.what());
        throw;
    }
    write_manifest(manifest, cfg, res.files, "");
    res.files.push_back(manifest);
    return res;
}

}  // namespace shadow::workflow
