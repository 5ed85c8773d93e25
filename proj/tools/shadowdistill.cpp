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

// shadowdistill: config-driven studies over classical-shadow estimates.
//
//   shadowdistill <scenario> --config cfg.json [--nu N ...] [--ns N ...] [--seed S] [--out DIR] [--plot]
//   shadowdistill run --config cfg.json          (scenario taken from the config)
//
// Exit codes: 0 ok, 2 config error, 3 data error, 4 infeasible budget, 1 anything else.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shadow/workflow/scenarios.hpp"

using namespace shadow;
using namespace shadow::workflow;

namespace {

struct Args {
    std::string config;
    std::vector<int> nu;
    std::vector<int> ns;
    std::optional<uint64_t> seed;
    std::string out;
    bool plot = false;
};

void add_options(CLI::App *sub, Args &a) {
    sub->add_option("--config", a.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--nu", a.nu, "Override the N_U grid axis (repeatable)");
    sub->add_option("--ns", a.ns, "Override the N_S grid axis (repeatable)");
    sub->add_option("--seed", a.seed, "Override the master seed");
    sub->add_option("--out", a.out, "Override the output directory");
    sub->add_flag("--plot", a.plot, "Also write an SVG plot where the scenario has one");
}

int run_command(const std::string &name, const Args &a) {
    ExperimentConfig cfg = ExperimentConfig::load(a.config);
    if (name != "run") {
        if (!cfg.scenario.empty() && cfg.scenario != name) {
            throw ConfigError("config field 'scenario': file says \"" + cfg.scenario + "\" but the subcommand is \"" +
                              name + "\"");
        }
        cfg.scenario = name;
    }
    if (!a.nu.empty()) {
        cfg.n_u = a.nu;
    }
    if (!a.ns.empty()) {
        cfg.n_s = a.ns;
    }
    if (a.seed) {
        cfg.seed = *a.seed;
    }
    if (!a.out.empty()) {
        cfg.output_dir = a.out;
    }
    auto res = run(cfg, RunOptions{a.plot});
    for (const auto &f : res.files) {
        std::cout << f << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Shadow-distillation studies: estimation, resampling, planning and bounds"};
    app.require_subcommand(1);
    Args args;
    std::vector<std::string> names = {"run"};
    for (const char *s : kScenarios) {
        names.emplace_back(s);
    }
    for (const auto &n : names) {
        auto *sub = app.add_subcommand(n, n == "run" ? "Run the scenario named in the config" : "Run " + n);
        add_options(sub, args);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run_command(name, args);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateDenominator &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError &e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
