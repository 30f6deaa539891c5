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
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lgtsim/gateset.hpp"
#include "lgtsim/optimizers.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

/// Input states fed to the circuits while profiling.
enum class InputEnsemble {
    Basis,   // uniformly random computational basis state
    Product, // independent Haar state on every qubit
    Haar,    // Haar state on the whole register
};
std::string ensemble_name(InputEnsemble e);
InputEnsemble ensemble_from_name(const std::string &name);

struct VneOptions {
    int n_samples = 2000;
    double slack = 0.02; // bits
    InputEnsemble ensemble = InputEnsemble::Basis;
};

/// Mean subsystem entropies (bits) over sampled inputs.
struct EntropyProfile {
    std::vector<std::vector<int>> subsets;
    std::vector<double> mean;
    int n_samples = 0;
};

/// Nonempty proper subsets ordered by size, then lexicographically.
std::vector<std::vector<int>> canonical_subsets(int n_qubits);

StateVector draw_input(int n_qubits, InputEnsemble e, std::mt19937_64 &rng);

EntropyProfile entropy_profile_target(const CMatrix &u, int n_samples, std::mt19937_64 &rng,
                                      InputEnsemble e = InputEnsemble::Basis);

/// Each sample draws an input and a parameter vector uniform in [0, 2 pi)^d.
EntropyProfile entropy_profile_ansatz(const Circuit &ansatz, int n_samples,
                                      std::mt19937_64 &rng,
                                      InputEnsemble e = InputEnsemble::Basis);

/// True iff every ansatz subset mean >= target mean - slack.
bool expressibility_pass(const EntropyProfile &ansatz, const EntropyProfile &target,
                         double slack);

struct DepthScanRow {
    int depth = 0;
    EntropyProfile profile;
    bool pass = false;
};

struct DepthScan {
    EntropyProfile target;
    std::vector<DepthScanRow> rows;
    int min_depth = -1; // -1 when nothing passed
};

using TemplateFamily = std::function<Circuit(int)>;

/// Profiles depths 1..l_max without stopping early.
DepthScan depth_scan(const TemplateFamily &family, const CMatrix &target, int l_max,
                     const VneOptions &opts, std::uint64_t seed);

/// Smallest passing depth. Throws ExhaustionError if none up to l_max.
DepthScan min_depth_search(const TemplateFamily &family, const CMatrix &target, int l_max,
                           const VneOptions &opts, std::uint64_t seed);

struct RemovedGate {
    std::size_t position = 0; // index in the input circuit
    GateKind kind = GateKind::X;
    std::vector<int> targets;
    double angle = 0.0;
    bool accepted = false;
};

struct PruneResult {
    Circuit circuit;
    ParamVector params;
    std::vector<RemovedGate> ledger;
    double fidelity = 0.0;
};

/// Removes gates with 1 - |Tr G| / 2^k <= tol, keeping each removal only if
/// the fidelity against target stays >= floor.
PruneResult prune_identity_gates(const Circuit &circuit, const ParamVector &params,
                                 const CMatrix &target, double tol = 1e-4,
                                 double floor = 1.0 - 1e-5);

struct CompressOptions {
    OptimizerSpec optimizer;
    int restarts = 3;     // random restarts per candidate besides the warm start
    int iterations = 128;
    double threshold = 1e-6; // accepted cost
    bool two_qubit_only = true;
    std::uint64_t seed = 1;
};

struct CompressResult {
    Circuit circuit;
    ParamVector params;
    double cost = 1.0;
    std::vector<std::size_t> removed_positions; // positions in the evolving circuit
};

/// Greedy gate deletion with re-optimization after each candidate.
CompressResult greedy_compress(const Circuit &circuit, const ParamVector &params,
                               const CMatrix &target, const CompressOptions &opts);

} // namespace lgtsim
