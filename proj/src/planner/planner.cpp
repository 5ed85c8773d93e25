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

#include "shadow/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shadow {

namespace {

constexpr double kLogC2Min = -4.0;
constexpr double kLogC2Max = 8.0;
constexpr int kScanPoints = 241;
constexpr int kGoldenIters = 200;

/// Optimal log10 c1 for a given c2, and the resulting squared residual.
std::pair<double, double> profile(std::span<const GridPoint> grid, double log_c2) {
    const double c2 = std::pow(10.0, log_c2);
    std::vector<double> r(grid.size());
    double mean = 0;
    for (size_t i = 0; i < grid.size(); i++) {
        const auto &g = grid[i];
        r[i] = std::log10(g.delta2) + 2.0 * std::log10(static_cast<double>(g.n_u)) -
               std::log10(1.0 + c2 / (static_cast<double>(g.n_s) * g.n_s));
        mean += r[i];
    }
    mean /= static_cast<double>(grid.size());
    double ss = 0;
    for (double v : r) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, ss};
}

}  // namespace

double MseModel::predict(double n_u, double n_s) const { return c1 / (n_u * n_u) * (1.0 + c2 / (n_s * n_s)); }

MseModel fit_mse_model(std::span<const GridPoint> grid) {
    if (grid.size() < 4) {
        throw std::invalid_argument("fit_mse_model: needs at least 4 grid points, got " +
                                    std::to_string(grid.size()) + ".");
    }
    std::set<int> nus, nss;
    for (const auto &g : grid) {
        if (!(g.delta2 > 0) || !std::isfinite(g.delta2)) {
            throw std::invalid_argument("fit_mse_model: Delta^2 must be positive and finite.");
        }
        if (g.n_u < 1 || g.n_s < 1) {
            throw std::invalid_argument("fit_mse_model: N_U and N_S must be positive.");
        }
        nus.insert(g.n_u);
        nss.insert(g.n_s);
    }
    if (nus.size() < 2) {
        throw std::invalid_argument("fit_mse_model: degenerate grid, only one N_U value.");
    }
    if (nss.size() < 2) {
        throw std::invalid_argument("fit_mse_model: degenerate grid, only one N_S value.");
    }

    const double step = (kLogC2Max - kLogC2Min) / (kScanPoints - 1);
    int best = 0;
    double best_ss = profile(grid, kLogC2Min).second;
    for (int i = 1; i < kScanPoints; i++) {
        double ss = profile(grid, kLogC2Min + i * step).second;
        if (ss < best_ss) {
            best_ss = ss;
            best = i;
        }
    }
    double a = kLogC2Min + std::max(0, best - 1) * step;
    double b = kLogC2Min + std::min(kScanPoints - 1, best + 1) * step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = profile(grid, x1).second;
    double f2 = profile(grid, x2).second;
    for (int it = 0; it < kGoldenIters && b - a > 1e-15; it++) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = profile(grid, x1).second;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = profile(grid, x2).second;
        }
    }
    const double log_c2 = (a + b) / 2;
    MseModel m;
    m.c2 = std::pow(10.0, log_c2);
    m.c1 = std::pow(10.0, profile(grid, log_c2).first);
    return m;
}

double fit_residual(const MseModel &model, std::span<const GridPoint> grid) {
    double ss = 0;
    for (const auto &g : grid) {
        double d = std::log10(g.delta2) - std::log10(model.predict(g.n_u, g.n_s));
        ss += d * d;
    }
    return ss;
}

double time_cost(double n_u, double n_s, double tau) {
    if (!(n_u > 0) || !(n_s > 0) || !(tau >= 0)) {
        throw std::invalid_argument("time_cost: needs N_U > 0, N_S > 0 and tau >= 0.");
    }
    return n_u * (tau + n_s);
}

ResourcePlan optimize_allocation(const MseModel &model, double budget, double tau) {
    if (!(model.c1 > 0) || !(model.c2 > 0)) {
        throw std::invalid_argument("optimize_allocation: model coefficients must be positive.");
    }
    if (!(tau >= 0) || !std::isfinite(budget)) {
        throw std::invalid_argument("optimize_allocation: tau must be >= 0 and T finite.");
    }
    if (!(budget > tau + 1) || std::floor(budget / (tau + 1)) < 2) {
        throw InfeasibleError("Budget T = " + std::to_string(budget) + " cannot fund 2 settings at tau = " +
                              std::to_string(tau) + ".");
    }
    ResourcePlan plan;
    plan.budget = budget;
    plan.tau = tau;
    plan.predicted_delta2 = std::numeric_limits<double>::infinity();
    for (long long ns = 1;; ns++) {
        const double nu = std::floor(budget / (tau + static_cast<double>(ns)));
        if (nu < 2) {
            break;
        }
        // Delta^2 >= c1 / N_U^2 and N_U only shrinks as N_S grows, so nothing later can win.
        if (model.c1 / (nu * nu) >= plan.predicted_delta2) {
            break;
        }
        const double d = model.predict(nu, static_cast<double>(ns));
        if (d < plan.predicted_delta2) {
            plan.predicted_delta2 = d;
            plan.n_u = static_cast<int>(nu);
            plan.n_s = static_cast<int>(ns);
        }
    }
    plan.time = time_cost(plan.n_u, plan.n_s, tau);
    return plan;
}

double continuous_optimal_shots(const MseModel &model, double tau) { return std::cbrt(model.c2 * tau); }

void write_grid_csv(std::ostream &out, std::span<const GridPoint> grid) {
    out << "n_u,n_s,delta2\n" << std::setprecision(17);
    for (const auto &g : grid) {
        out << g.n_u << "," << g.n_s << "," << g.delta2 << "\n";
    }
}

std::vector<GridPoint> read_grid_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("Grid CSV is empty.");
    }
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            header.push_back(f);
        }
    }
    auto col = [&](std::initializer_list<const char *> names) -> int {
        for (const char *name : names) {
            auto it = std::find(header.begin(), header.end(), name);
            if (it != header.end()) {
                return static_cast<int>(it - header.begin());
            }
        }
        throw DataError("line 1: grid CSV lacks column '" + std::string(*names.begin()) + "'.");
    };
    const int cu = col({"n_u"});
    const int cs = col({"n_s"});
    const int cd = col({"delta2", "mean_delta2"});
    std::vector<GridPoint> grid;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string v;
        while (std::getline(ss, v, ',')) {
            f.push_back(v);
        }
        const int need = std::max({cu, cs, cd});
        if (static_cast<int>(f.size()) <= need) {
            throw DataError("line " + std::to_string(line_no) + ": too few fields.");
        }
        try {
            grid.push_back({std::stoi(f[cu]), std::stoi(f[cs]), std::stod(f[cd])});
        } catch (const std::exception &) {
            throw DataError("line " + std::to_string(line_no) + ": non-numeric field.");
        }
    }
    return grid;
}

std::vector<GridPoint> read_grid_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw DataError("Cannot open grid CSV " + path + ".");
    }
    return read_grid_csv(f);
}

void write_plan_csv(std::ostream &out, const MseModel &model, std::span<const ResourcePlan> plans) {
    out << "budget,tau,n_u,n_s,time,predicted_delta2,c1,c2,continuous_n_s\n" << std::setprecision(17);
    for (const auto &p : plans) {
        out << p.budget << "," << p.tau << "," << p.n_u << "," << p.n_s << "," << p.time << ","
            << p.predicted_delta2 << "," << model.c1 << "," << model.c2 << ","
            << continuous_optimal_shots(model, p.tau) << "\n";
    }
}

}  // namespace shadow
