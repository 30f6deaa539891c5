// Copyright 2026 The lgtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command line driver: optimize, vne-scan, simulate, report.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lgtsim/error.hpp"
#include "lgtsim/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kConvergence = 3, kMissing = 4 };

struct Common {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--config", c.config, "INI experiment configuration")->required();
    sub->add_option("--out", c.out, "output directory (overrides run.out)");
    sub->add_option("--seed", c.seed, "master seed (overrides run.seed)");
    sub->add_option("--jobs", c.jobs, "worker count (overrides run.jobs)");
}

lgtsim::ExperimentConfig load(const Common &c) {
    auto cfg = lgtsim::ExperimentConfig::load(c.config);
    if (c.out)
        cfg.out_dir = *c.out;
    if (c.seed)
        cfg.master_seed = *c.seed;
    if (c.jobs)
        cfg.jobs = *c.jobs;
    return cfg;
}

int run(const std::string &command, const Common &c) {
    const auto cfg = load(c);
    if (command == "optimize") {
        const auto s = lgtsim::cmd_optimize(cfg);
        std::printf("best %s cost %.3e, state infidelity %.3e, %d two-qubit gates, %d params\n",
                    s.best_optimizer.c_str(), s.best_cost, s.state_infidelity, s.c_two_qubit,
                    s.c_params);
    } else if (command == "vne-scan") {
        const auto scan = lgtsim::cmd_vne_scan(cfg);
        for (const auto &row : scan.rows)
            std::printf("l=%d %s\n", row.depth, row.pass ? "pass" : "fail");
        std::printf("minimum depth %d\n", scan.min_depth);
    } else if (command == "simulate") {
        const auto rows = lgtsim::cmd_simulate(cfg);
        std::printf("%zu rows written to %s\n", rows.size(),
                    (cfg.out_dir / "chi.csv").string().c_str());
    } else {
        for (const auto &r : lgtsim::cmd_report(cfg))
            std::printf("%-6s N=%d  %d two-qubit gates per step (%s)\n",
                        lgtsim::variant_name(r.variant).c_str(), r.n_sites, r.two_qubit,
                        r.source.c_str());
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Trotterized lattice gauge theory compiler and noisy simulator"};
    app.require_subcommand(1);
    Common common;
    for (const char *name : {"optimize", "vne-scan", "simulate", "report"})
        add_common(app.add_subcommand(name), common);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, common);
    } catch (const lgtsim::MissingArtifactError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMissing;
    } catch (const lgtsim::ConvergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConvergence;
    } catch (const lgtsim::ExhaustionError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConvergence;
    } catch (const lgtsim::DivergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConvergence;
    } catch (const lgtsim::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const lgtsim::IndexError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const lgtsim::CapacityError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
