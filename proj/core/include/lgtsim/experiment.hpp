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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgtsim/lgtmodel.hpp"
#include "lgtsim/noiselab.hpp"
#include "lgtsim/vne.hpp"

namespace lgtsim {

/// Everything a reproduction target needs, read from an INI file.
/// Physics parameters have no defaults; a missing key is a validation error.
struct ExperimentConfig {
    // [model]
    int n_sites = 0;
    std::optional<double> J, U, dt;
    int n_steps = 0;
    int chi_site = 3; // 1-indexed i of chi_{i,i+1}

    // [simulate]
    std::vector<Variant> variants;
    std::optional<std::vector<double>> gammas;
    std::uint64_t shots = 1000;
    std::vector<std::uint64_t> seeds{1};
    int trajectories = 0;
    bool bonds_in_x = false;
    std::vector<double> qubit_flip;
    std::vector<double> qubit_gamma;

    // [optimize]
    std::vector<std::string> optimizers{"ipg"};
    std::string c_template = "hopping_full";
    std::string target = "C"; // C or identity
    int trials = 3;
    int iterations = 128;
    double threshold = 1e-6;
    int infidelity_samples = 1000;
    /// Variant the compiled artifact is stored for. vne also fits B.
    Variant variant = Variant::Gbo;
    /// Greedy two-qubit gate removal after the fit.
    bool compress = false;
    int compress_restarts = 30;

    // [vne]
    int l_max = 5;
    VneOptions vne;
    std::string vne_target = "C";   // C, B or identity
    std::string vne_family = "hopping"; // hopping or bond

    MitigationPlan mitigation;

    std::filesystem::path artifact_dir;
    std::filesystem::path out_dir = "out";
    std::uint64_t master_seed = 1;
    int jobs = 1;

    /// Raw file text, kept for the config hash.
    std::string source;

    static ExperimentConfig from_string(const std::string &ini_text);
    static ExperimentConfig load(const std::filesystem::path &path);

    TrotterConfig trotter(Variant v) const;
    /// Hex FNV-1a of the source text plus command-line overrides.
    std::string hash() const;
    /// Checks the fields the given command reads.
    void validate_for(const std::string &command) const;
};

/// Stored compiled subcircuits for one variant.
struct CompiledArtifact {
    Variant variant = Variant::Gbo;
    double J = 0.0, U = 0.0, dt = 0.0;
    CompiledSet blocks;
    double c_cost = 1.0;
    double c_state_infidelity = 1.0;
};

std::filesystem::path artifact_path(const std::filesystem::path &dir, Variant v);
void save_artifact(const CompiledArtifact &a, const std::filesystem::path &path);
/// Throws MissingArtifactError naming the optimize invocation when absent.
CompiledArtifact load_artifact(const std::filesystem::path &path);

struct OptimizeSummary {
    std::string best_optimizer;
    double best_cost = 1.0;
    double state_infidelity = 1.0;
    int c_two_qubit = 0;
    int c_params = 0;
    std::vector<std::filesystem::path> written;
};

/// Runs every configured optimizer on the hopping target, writes
/// cost_history.csv, preconditioner.csv, removed_gates.csv and the
/// compiled artifact. Throws ConvergenceError above threshold.
OptimizeSummary cmd_optimize(const ExperimentConfig &cfg);

/// Writes depth_table.csv and returns the scan.
DepthScan cmd_vne_scan(const ExperimentConfig &cfg);

struct ChiRow {
    int step = 0;
    double t = 0.0;
    double chi = 0.0;
    Variant variant = Variant::Direct;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    double discarded = 0.0;
    double oracle = 0.0;
};

/// Runs one (variant, gamma, seed) job and returns a row per step.
/// oracle holds the exact chi per step; computed when null.
std::vector<ChiRow> simulate_job(const ExperimentConfig &cfg, Variant variant, double gamma,
                                 std::uint64_t seed, const CompiledSet *compiled,
                                 const std::vector<double> *oracle = nullptr);

/// Fans jobs out over cfg.jobs workers and writes chi.csv plus manifests.
std::vector<ChiRow> cmd_simulate(const ExperimentConfig &cfg);

struct CostRow {
    Variant variant = Variant::Direct;
    int n_sites = 0;
    int two_qubit = 0;
    std::string source; // "artifact" or "template"
};

/// Table-I style two-qubit counts per Trotter step; writes gate_cost.csv.
std::vector<CostRow> cmd_report(const ExperimentConfig &cfg);

/// Two-qubit cost of one step built from the reference templates.
int template_step_cost(Variant v, int n_sites);

} // namespace lgtsim
