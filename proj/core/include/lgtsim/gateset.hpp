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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgtsim/linalg.hpp"

namespace lgtsim {

enum class GateKind {
    RX, RY, RZ, H, S, X, Y, Z, CNOT, XX, GPI, GPI2, MS,
    Unitary, // opaque matrix gate with a declared two-qubit cost
};

std::string_view kind_name(GateKind kind);
std::optional<GateKind> kind_from_name(std::string_view name);
int param_arity(GateKind kind);
/// Fixed target arity, or -1 for Unitary (1 to 3 targets).
int target_arity(GateKind kind);
bool is_native(GateKind kind);

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<double> params;
    std::vector<int> targets;
    /// Free-parameter index driving the gate angle, or -1 for a fixed gate.
    /// The angle is params[0], except MS where it is params[2] (theta).
    int slot = -1;
    /// Unitary kind only.
    std::shared_ptr<const CMatrix> matrix;
    int declared_cost = 0;
    std::string label;

    static Gate make(GateKind kind, std::vector<int> targets,
                     std::vector<double> params = {}, int slot = -1);
    static Gate unitary(CMatrix m, std::vector<int> targets, int two_qubit_cost,
                        std::string label = {});

    int angle_index() const { return kind == GateKind::MS ? 2 : 0; }
    /// Throws ValidationError on arity mismatch.
    void validate() const;
};

/// Matrix in the local basis of gate.targets (targets[0] = least significant).
CMatrix gate_matrix(const Gate &gate);
/// Same gate with its driving angle replaced.
CMatrix gate_matrix(const Gate &gate, double angle);

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    /// Number of free parameters d (largest slot + 1).
    int n_params() const noexcept { return n_params_; }

    /// Appends a gate. Throws IndexError for bad targets.
    Circuit &add(Gate g);
    Circuit &add(GateKind kind, std::vector<int> targets,
                 std::vector<double> params = {});
    /// Appends a gate whose angle is the next free parameter.
    Circuit &add_param(GateKind kind, std::vector<int> targets);

    /// Substitutes slot angles from x and returns a circuit without slots.
    Circuit bind(const ParamVector &x) const;
    /// Copy with every gate mapped onto new qubit labels.
    Circuit remapped(const std::vector<int> &qubit_map, int n_qubits) const;
    /// Copy without gate at position i. Later slots are renumbered.
    Circuit without(std::size_t i) const;

    void validate() const;

  private:
    int n_qubits_ = 0;
    int n_params_ = 0;
    std::vector<Gate> gates_;
};

/// Dense unitary, later gates multiply on the left. Guarded at 12 qubits.
CMatrix circuit_unitary(const Circuit &circuit, const ParamVector &params = {});

/// Lowers to {GPI, GPI2, MS}. Each XX becomes a single MS(0,0,theta).
Circuit lower_to_native(const Circuit &circuit, const ParamVector &params = {});

/// Gates with two targets count 1. Opaque Unitary gates count their
/// declared cost.
int two_qubit_count(const Circuit &circuit);

/// Gate-by-gate fusion into blocks touching at most max_qubits qubits.
struct FusedOp {
    std::vector<int> targets;
    CMatrix matrix;
};
std::vector<FusedOp> fuse(const Circuit &bound_circuit, int max_qubits = 3);

/// Text interchange: one gate per line, "KIND q0[,q1] [a0[,a1,a2]]".
std::string to_text(const Circuit &circuit, const ParamVector &params = {});
Circuit from_text(std::string_view text);

} // namespace lgtsim
