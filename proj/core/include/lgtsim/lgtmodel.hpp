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

#include <optional>
#include <string>
#include <vector>

#include "lgtsim/gateset.hpp"
#include "lgtsim/histogram.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

/// Sector-grouped layout: up sites 0..N-1, down sites N..2N-1,
/// bonds 2N..3N-1. Bond i links sites i and (i+1) mod N.
class LatticeLayout {
  public:
    explicit LatticeLayout(int n_sites);

    int n_sites() const noexcept { return n_; }
    int n_qubits() const noexcept { return 3 * n_; }
    int up_site(int i) const;
    int down_site(int i) const;
    /// Site qubit for spin sector sigma (0 = up, 1 = down).
    int site(int i, int sigma) const { return sigma == 0 ? up_site(i) : down_site(i); }
    int bond(int i) const;

    std::uint64_t up_mask() const;
    std::uint64_t down_mask() const;
    std::uint64_t bond_mask() const;

  private:
    int wrap(int i) const { return ((i % n_) + n_) % n_; }
    int n_;
};

enum class Variant { Direct, Gbo, Vne };
std::string variant_name(Variant v);
Variant variant_from_name(const std::string &name);

struct TrotterConfig {
    double J = 0.0;
    double U = 0.0;
    double dt = 0.0;
    int n_steps = 0;
    Variant variant = Variant::Direct;
    void validate() const;
};

/// exp(+i J dt Z_b (X_a X_c + Y_a Y_c)) on local qubits a=0, b=1, c=2.
CMatrix target_unitary_C(double J, double dt);
/// XX(U dt) on the two bond qubits.
CMatrix target_unitary_B(double U, double dt);

/// Converged local subcircuit: template plus angles.
struct CompiledBlock {
    Circuit circuit;
    ParamVector params;
};

struct CompiledSet {
    std::optional<CompiledBlock> c_block; // 3 local qubits
    std::optional<CompiledBlock> b_block; // 2 local qubits
};

/// Opaque-gate costs of the direct decomposition.
inline constexpr int kDirectCCost = 6;
inline constexpr int kDirectBCost = 2;
/// Minimum fidelity a compiled block must reach before it is spliced.
inline constexpr double kCompiledFidelityFloor = 1.0 - 1e-6;

/// One Trotter step: even-bond C (up), odd-bond C (up), even-bond C (down),
/// odd-bond C (down), then B on every site. Returned circuit is bound.
Circuit build_trotter_step(const LatticeLayout &layout, const TrotterConfig &config,
                           const CompiledSet *compiled = nullptr);

/// Domain wall in the site register, alternating |+-...> + |-+...> on bonds.
StateVector initial_state(const LatticeLayout &layout);

/// chi_{i,i+1} with i 1-indexed, from sampled site outcomes.
double magnetization_correlator(const ShotHistogram &histogram,
                                const LatticeLayout &layout, int i);
/// Same correlator from exact probabilities.
double magnetization_correlator(const StateVector &state, const LatticeLayout &layout,
                                int i);

/// Q_j = (-1)^(n_up + n_down) X_{bond(j-1)} X_{bond(j)}, exact expectation.
double charge_expectation(const StateVector &state, const LatticeLayout &layout, int j);
std::vector<double> charge_expectations(const StateVector &state,
                                        const LatticeLayout &layout);

/// Probability weight outside the given per-sector occupation counts.
double sector_leakage(const StateVector &state, const LatticeLayout &layout,
                      int n_up, int n_down);

/// Number of occupied sites (qubit value 0) per sector in the initial state.
int initial_up_count(const LatticeLayout &layout);
int initial_down_count(const LatticeLayout &layout);

/// Applies a bound circuit with gate fusion.
void apply_circuit(StateVector &state, const Circuit &bound_circuit);

/// Exact chi_{i,i+1} per step (step 0 included), direct variant.
std::vector<double> exact_evolution_oracle(const LatticeLayout &layout,
                                           const TrotterConfig &config, int i);

} // namespace lgtsim
