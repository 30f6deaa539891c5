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
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgtsim/ansatz.hpp"
#include "lgtsim/error.hpp"
#include "lgtsim/experiment.hpp"

using namespace lgtsim;
namespace fs = std::filesystem;

namespace {

// Converged angles of the reduced hopping template for J dt = 0.4.
ParamVector reduced_angles() {
    ParamVector x(16);
    x << 1.5708027441375148, 4.712390095973678, 1.5708086561783461, 4.7123904047322842,
        4.7123920846189487, 1.570795276054878, 7.8539885891467938, 2.3415941893671857,
        4.7123968541995493, 5.4831839380058254, 4.7123870559797858, 4.7123860110416933,
        4.7123776611463839, 4.7123826625570402, 1.5707927269807027, 4.7123876210301043;
    return x;
}

CompiledSet compiled_fixture(double udt) {
    CompiledSet s;
    s.c_block = CompiledBlock{hopping_ansatz_reduced(), reduced_angles()};
    ParamVector b(2);
    b << udt, 0.0;
    s.b_block = CompiledBlock{bond_family(1), b};
    return s;
}

fs::path scratch_dir(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("lgtsim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char *kBase = R"([model]
n_sites = 2
J = 1.0
U = 2.0
dt = 0.4
n_steps = 3
chi_site = 1

[simulate]
variants = direct
gammas = 0
shots = 4000
seeds = 1, 2
)";

} // namespace

TEST(Config, ParsesEverySection) {
    const ExperimentConfig c = ExperimentConfig::from_string(std::string(kBase) + R"(
[optimize]
optimizers = ipg, adam, lbfgs
trials = 2
variant = vne

[vne]
l_max = 4
ensemble = haar

[mitigation]
variants = 4
sharpen = true

[run]
seed = 9
jobs = 2
)");
    EXPECT_EQ(c.n_sites, 2);
    EXPECT_DOUBLE_EQ(*c.J, 1.0);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2}));
    EXPECT_EQ(c.optimizers, (std::vector<std::string>{"ipg", "adam", "lbfgs"}));
    EXPECT_EQ(c.variant, Variant::Vne);
    EXPECT_EQ(c.vne.ensemble, InputEnsemble::Haar);
    EXPECT_EQ(c.mitigation.variants, 4);
    EXPECT_TRUE(c.mitigation.sharpen);
    EXPECT_EQ(c.master_seed, 9u);
    EXPECT_EQ(c.jobs, 2);
    EXPECT_NO_THROW(c.validate_for("simulate"));
    EXPECT_NO_THROW(c.validate_for("optimize"));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(ExperimentConfig::from_string("[model]\nn_site = 2\n"), ValidationError);
    EXPECT_THROW(ExperimentConfig::from_string("[model]\nn_sites = two\n"), ValidationError);
    EXPECT_THROW(ExperimentConfig::load("/nonexistent/config.ini"), ValidationError);
}

TEST(Config, PhysicsHasNoDefaults) {
    const ExperimentConfig c = ExperimentConfig::from_string("[model]\nn_sites = 2\n");
    EXPECT_THROW(c.validate_for("optimize"), ValidationError);
    EXPECT_THROW(c.validate_for("simulate"), ValidationError);
    EXPECT_THROW(c.trotter(Variant::Direct), ValidationError);
    EXPECT_NO_THROW(c.validate_for("report"));
    EXPECT_THROW(c.validate_for("dance"), ValidationError);
}

TEST(Config, SimulateGuards) {
    ExperimentConfig c = ExperimentConfig::from_string(kBase);
    c.n_sites = 10;
    EXPECT_THROW(c.validate_for("simulate"), CapacityError);
    c = ExperimentConfig::from_string(kBase);
    c.mitigation.charge_filter = true;
    EXPECT_THROW(c.validate_for("simulate"), ValidationError);
    c.bonds_in_x = true;
    EXPECT_NO_THROW(c.validate_for("simulate"));
}

TEST(Config, HashFollowsTextAndSeed) {
    ExperimentConfig a = ExperimentConfig::from_string(kBase);
    ExperimentConfig b = ExperimentConfig::from_string(kBase);
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    b.master_seed = 2;
    EXPECT_NE(a.hash(), b.hash());
    const ExperimentConfig c = ExperimentConfig::from_string(std::string(kBase) + "\n");
    EXPECT_NE(a.hash(), c.hash());
}

TEST(Artifact, RoundTripAndMissingFile) {
    const fs::path dir = scratch_dir("artifact");
    CompiledArtifact a;
    a.variant = Variant::Vne;
    a.J = 1.0;
    a.U = 2.0;
    a.dt = 0.4;
    a.blocks = compiled_fixture(0.8);
    a.c_cost = 1e-10;
    save_artifact(a, artifact_path(dir, Variant::Vne));
    const CompiledArtifact b = load_artifact(artifact_path(dir, Variant::Vne));
    EXPECT_EQ(b.variant, Variant::Vne);
    EXPECT_DOUBLE_EQ(b.dt, 0.4);
    ASSERT_TRUE(b.blocks.c_block && b.blocks.b_block);
    // Blocks come back bound: same gates, angles folded in.
    EXPECT_EQ(b.blocks.c_block->circuit.n_params(), 0);
    EXPECT_EQ(b.blocks.c_block->circuit.size(), a.blocks.c_block->circuit.size());
    EXPECT_LE((circuit_unitary(b.blocks.c_block->circuit) -
               circuit_unitary(a.blocks.c_block->circuit, a.blocks.c_block->params))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    EXPECT_THROW(load_artifact(artifact_path(dir, Variant::Gbo)), MissingArtifactError);
}

TEST(Report, TableCountsFromTemplates) {
    ExperimentConfig c = ExperimentConfig::from_string("[model]\nn_sites = 6\n");
    c.out_dir = scratch_dir("report");
    const auto rows = cmd_report(c);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].two_qubit, 84);
    EXPECT_EQ(rows[1].two_qubit, 72);
    EXPECT_EQ(rows[2].two_qubit, 54);
    const std::string csv = read_file(c.out_dir / "gate_cost.csv");
    EXPECT_NE(csv.find("variant,n_sites,two_qubit_per_step,per_site,source"), std::string::npos);
    EXPECT_NE(csv.find("vne,6,54,9,template"), std::string::npos);
}

TEST(Simulate, CompiledBlocksSatisfyFloor) {
    const CompiledSet s = compiled_fixture(0.8);
    const double f = std::pow(phase_insensitive_overlap(target_unitary_C(1.0, 0.4),
                                                         circuit_unitary(s.c_block->circuit,
                                                                         s.c_block->params)),
                              2);
    EXPECT_GE(f, kCompiledFidelityFloor);
    EXPECT_EQ(two_qubit_count(s.c_block->circuit), 4);
}

TEST(Simulate, NoiselessJobTracksOracle) {
    ExperimentConfig c = ExperimentConfig::from_string(kBase);
    const CompiledSet s = compiled_fixture(0.8);
    for (Variant v : {Variant::Direct, Variant::Gbo, Variant::Vne}) {
        const auto rows = simulate_job(c, v, 0.0, 1, &s);
        ASSERT_EQ(rows.size(), 4u);
        for (const ChiRow &r : rows) {
            EXPECT_NEAR(r.chi, r.oracle, 0.05);
            EXPECT_DOUBLE_EQ(r.discarded, 0.0);
            EXPECT_EQ(r.shots, 4000u);
        }
        EXPECT_DOUBLE_EQ(rows[2].t, 0.8);
    }
}

TEST(Simulate, NoisyJobIsDeterministicPerSeed) {
    ExperimentConfig c = ExperimentConfig::from_string(kBase);
    const auto a = simulate_job(c, Variant::Direct, 0.05, 3, nullptr);
    const auto b = simulate_job(c, Variant::Direct, 0.05, 3, nullptr);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].chi, b[k].chi);
        EXPECT_EQ(a[k].discarded, b[k].discarded);
    }
}

TEST(Simulate, CommandWritesCsvAndManifests) {
    ExperimentConfig c = ExperimentConfig::from_string(kBase);
    c.out_dir = scratch_dir("simulate");
    c.jobs = 2;
    const auto rows = cmd_simulate(c);
    EXPECT_EQ(rows.size(), 2u * 4u);
    const std::string csv = read_file(c.out_dir / "chi.csv");
    EXPECT_EQ(csv.rfind("step,t,chi,variant,gamma,seed,shots,discarded_frac,oracle", 0), 0u);
    EXPECT_TRUE(fs::exists(c.out_dir / "simulate_manifest.json"));
    EXPECT_TRUE(fs::exists(c.out_dir / "jobs"));
}

TEST(Simulate, CompiledVariantNeedsArtifact) {
    ExperimentConfig c = ExperimentConfig::from_string(kBase);
    c.out_dir = scratch_dir("simulate_missing");
    c.variants = {Variant::Gbo};
    EXPECT_THROW(cmd_simulate(c), MissingArtifactError);
}

TEST(Optimize, WritesHistoriesForIdentityTarget) {
    ExperimentConfig c = ExperimentConfig::from_string(std::string(kBase) + R"(
[optimize]
optimizers = ipg, adam
template = hopping_reduced
target = identity
trials = 2
iterations = 60
infidelity_samples = 50
)");
    c.out_dir = scratch_dir("optimize");
    const OptimizeSummary s = cmd_optimize(c);
    EXPECT_LE(s.best_cost, 1e-6);
    const std::string hist = read_file(c.out_dir / "cost_history.csv");
    EXPECT_EQ(hist.rfind("optimizer,trial,iter,cost", 0), 0u);
    EXPECT_TRUE(fs::exists(c.out_dir / "preconditioner.csv"));
    EXPECT_FALSE(fs::exists(artifact_path(c.out_dir, Variant::Gbo)));
}

TEST(VneScan, WritesDepthTable) {
    ExperimentConfig c = ExperimentConfig::from_string(std::string(kBase) + "[vne]\nl_max = 4\n");
    c.out_dir = scratch_dir("vne");
    const DepthScan d = cmd_vne_scan(c);
    EXPECT_EQ(d.min_depth, 3);
    const std::string csv = read_file(c.out_dir / "depth_table.csv");
    EXPECT_EQ(csv.rfind("depth,subset,ansatz_mean,target_mean,pass", 0), 0u);
}

TEST(ShippedConfigs, ValidateForTheirCommands) {
    const fs::path dir = fs::path(LGTSIM_SOURCE_DIR) / "configs";
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"fig2.ini", {"optimize"}},
        {"fig3.ini", {"vne-scan", "optimize"}},
        {"fig5.ini", {"simulate"}},
        {"table1.ini", {"report"}},
    };
    for (const auto &[file, commands] : cases) {
        const ExperimentConfig c = ExperimentConfig::load(dir / file);
        for (const std::string &cmd : commands)
            EXPECT_NO_THROW(c.validate_for(cmd)) << file << " " << cmd;
    }
}
