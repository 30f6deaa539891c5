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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lgtsim/gateset.hpp"
#include "lgtsim/histogram.hpp"
#include "lgtsim/lgtmodel.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

struct NoiseConfig {
    /// Two-qubit depolarizing weight applied after every two-qubit gate.
    double gamma = 0.0;
    /// Optional per-qubit bit-flip probability after every two-qubit gate
    /// touching that qubit. Used to model qubit-dependent bias.
    std::vector<double> qubit_flip;
    /// Optional per-qubit depolarizing weight. A point on (a, b) fires with
    /// probability 1 - (1 - gamma)(1 - g_a)(1 - g_b).
    std::vector<double> qubit_gamma;
    /// Depolarizing weight of a noise point on (a, b).
    double pair_gamma(int a, int b) const;
    void validate() const;
    bool noiseless() const;
};

/// Where a depolarizing event can fire: after gate_index, on pair.
struct NoisePoint {
    std::size_t gate_index = 0;
    int a = 0;
    int b = 0;
};

/// XX/MS/CNOT give one point. An opaque gate of cost k gives k points that
/// cycle over its target pairs.
std::vector<NoisePoint> noise_points(const Circuit &bound);

/// One shot per trajectory. With gamma = 0 and no bias this is exactly
/// sample_shots on the noiseless output with the same generator.
ShotHistogram run_noisy(const Circuit &bound, const StateVector &initial,
                        const NoiseConfig &noise, std::uint64_t shots,
                        const std::vector<int> &x_basis_qubits, std::mt19937_64 &rng);

struct StepRunOptions {
    /// Trajectories shared by the shots of a step; 0 means one per shot.
    int trajectories = 0;
};

/// Repeats one step circuit and returns a histogram for every step count
/// 0..n_steps. Each trajectory carries independent errors through all
/// steps; shot s of every step is read from trajectory s mod T.
std::vector<ShotHistogram> run_noisy_steps(const Circuit &step, int n_steps,
                                           const StateVector &initial,
                                           const NoiseConfig &noise, std::uint64_t shots,
                                           const std::vector<int> &x_basis_qubits,
                                           std::mt19937_64 &rng,
                                           const StepRunOptions &opts = {});

struct FilterResult {
    ShotHistogram histogram;
    double discarded_fraction = 0.0;
};

/// Keeps outcomes with the expected number of occupied (bit 0) sites in
/// each sector. Throws NoDataError if nothing survives.
FilterResult postselect_spin(const ShotHistogram &h, const LatticeLayout &layout,
                             int n_up_expected, int n_down_expected);

/// Per-shot charges q_j from site Z and bond X outcomes.
std::vector<int> shot_charges(std::uint64_t outcome, const LatticeLayout &layout);
/// Charge signs of the initial state (all +1 for the domain wall).
std::vector<int> expected_charge_pattern(const LatticeLayout &layout);

/// Requires bonds measured in X and sites in Z.
FilterResult postselect_charge(const ShotHistogram &h, const LatticeLayout &layout,
                               const std::vector<int> &expected);

struct DebiasOptions {
    bool twirl = true;
    bool relabel = false;
};

/// An equivalent implementation. perm maps logical qubit -> physical qubit.
struct CircuitVariant {
    Circuit circuit;
    std::vector<int> perm;
};

/// Each multi-qubit gate is sandwiched by a random Pauli string drawn from
/// those commuting with it, so the variant is exactly equivalent.
/// Relabeling permutes the register; use permute_state/unpermute_histogram.
std::vector<CircuitVariant> debias_variants(const Circuit &bound, int m,
                                            std::mt19937_64 &rng,
                                            const DebiasOptions &opts = {});

StateVector permute_state(const StateVector &state, const std::vector<int> &perm);
ShotHistogram unpermute_histogram(const ShotHistogram &h, const std::vector<int> &perm);

enum class AggregateMode { Average, Sharpen };

/// Average sums counts. Sharpen drops, per variant, outcomes at or below
/// factor times the estimated noise floor, then keeps the outcomes that
/// survive in the largest number of variants.
ShotHistogram aggregate(const std::vector<ShotHistogram> &histograms, AggregateMode mode,
                        double sharpen_factor = 3.0);

struct MitigationPlan {
    bool spin_filter = true;
    bool charge_filter = false;
    int variants = 1;
    bool sharpen = false;
    double sharpen_factor = 3.0;
    bool relabel = false;
    void validate() const;
};

} // namespace lgtsim
