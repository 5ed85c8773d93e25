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
#include <span>
#include <string>
#include <vector>

#include "shadow/randmeas/records.hpp"
#include "shadow/workflow/config.hpp"

namespace shadow::workflow {

/// A CSV table held in memory. Cells are preformatted so output is byte-stable.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    void write(std::ostream &out) const;
    void write(const std::string &path) const;
};

/// Shortest round-trip decimal form of v ("%.17g"), "nan" for NaN, "" for an empty optional.
std::string fmt(double v);

struct RunOptions {
    bool plot = false;
};

struct RunResult {
    std::vector<std::string> files;  ///< written artifacts, manifest last
};

/// Validates cfg, runs its scenario, writes <output_dir>/<scenario>.csv (plus an SVG when
/// opts.plot and the scenario has a natural plot) and <output_dir>/<scenario>.manifest.json.
/// The manifest is also written when the scenario fails after validation; the error is then
/// rethrown.
RunResult run(const ExperimentConfig &cfg, const RunOptions &opts = {});

/// Table produced by a scenario without touching the filesystem (except for reading inputs).
Table run_table(const ExperimentConfig &cfg);

/// State i of the config's state spec (see StateSpec).
DensityMatrix make_state(const ExperimentConfig &cfg, int index = 0);

/// Sample std (n - 1) of stat over n_boot resamples of the record indices drawn with
/// replacement. Resample b uses derive_seed(seed, b). NaN statistics are skipped; NaN is
/// returned when fewer than two remain. Throws std::invalid_argument for n_boot < 2.
double bootstrap_std(int n_records, int n_boot, uint64_t seed,
                     const std::function<double(std::span<const int>)> &stat);

/// Bootstrap standard error of the mitigated ratio, settings resampled with replacement.
double bootstrap_errorbars(std::span<const MeasurementRecord> records, const Observable &o, int n_boot, uint64_t seed,
                           const RatioOptions &opts = {});

/// Direct estimate of <O>: for every Pauli term, the mean eigenvalue sign over the records whose
/// setting measures that term directly (basis equal to the letter on its support), weighted by
/// the term coefficient. With cal, each record's empirical distribution is first corrected by
/// the inverse readout confusion. NaN when some term is never measured directly.
double direct_expectation(std::span<const MeasurementRecord> records, const Observable &o,
                          const CalibrationMatrix *cal = nullptr);

/// Minimal SVG line/scatter plot used behind --plot.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
void write_svg_plot(const std::string &path, const std::string &title, const std::string &xlabel,
                    const std::string &ylabel, const std::vector<Series> &series, bool log_x, bool log_y);

}  // namespace shadow::workflow
