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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "shadow/common.hpp"

namespace shadow {

/// Delta^2 = c1 / N_U^2 * (1 + c2 / N_S^2).
struct MseModel {
    double c1 = 0;
    double c2 = 0;

    double predict(double n_u, double n_s) const;
};

struct GridPoint {
    int n_u = 0;
    int n_s = 0;
    double delta2 = 0;

    bool operator==(const GridPoint &) const = default;
};

/// Least squares of log10 Delta^2 against the model. For fixed c2 the optimal log10 c1 is the
/// mean residual, so only log10 c2 is searched (coarse scan plus golden section, fixed budget).
/// Throws std::invalid_argument on fewer than 4 points, a single N_U, a single N_S, or a
/// non-positive Delta^2.
MseModel fit_mse_model(std::span<const GridPoint> grid);

/// Sum of squared log10 residuals of a model on a grid.
double fit_residual(const MseModel &model, std::span<const GridPoint> grid);

struct ResourcePlan {
    int n_u = 0;
    int n_s = 0;
    double predicted_delta2 = 0;
    double budget = 0;
    double tau = 0;
    double time = 0;
};

/// N_U * (tau + N_S). Throws std::invalid_argument on non-positive N_U, N_S or negative tau.
double time_cost(double n_u, double n_s, double tau);

/// Exact integer search over N_S with N_U = floor(T / (tau + N_S)) >= 2; ties go to the smaller
/// N_S. Throws InfeasibleError if no N_S admits N_U >= 2.
ResourcePlan optimize_allocation(const MseModel &model, double budget, double tau);

/// Stationary point (c2 tau)^(1/3) of the continuous relaxation.
double continuous_optimal_shots(const MseModel &model, double tau);

/// Columns: n_u,n_s,delta2. Extra columns are ignored when reading, so MSE report CSVs
/// (with n_u, n_s, mean_delta2) are accepted too.
void write_grid_csv(std::ostream &out, std::span<const GridPoint> grid);
std::vector<GridPoint> read_grid_csv(std::istream &in);
std::vector<GridPoint> read_grid_csv(const std::string &path);

void write_plan_csv(std::ostream &out, const MseModel &model, std::span<const ResourcePlan> plans);

}  // namespace shadow
