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

#include <random>

#include "lgtsim/gateset.hpp"

namespace lgtsim {

/// Unitary-matching objective: F = |Tr(C^dagger C_A(x))|^2 / 4^q.
class ObjectiveHandle {
  public:
    /// Throws ValidationError on a dimension mismatch and
    /// UnsupportedGateError if a slot drives a gate without an involutory
    /// generator (only RX, RY, RZ, XX and the MS angle qualify).
    ObjectiveHandle(CMatrix target, Circuit ansatz);

    int dim() const noexcept { return ansatz_.n_params(); }
    int n_qubits() const noexcept { return ansatz_.n_qubits(); }
    const CMatrix &target() const noexcept { return target_; }
    const Circuit &ansatz() const noexcept { return ansatz_; }

    /// Linear overlap t(x) = Tr(C^dagger C_A(x)) / 2^q.
    cplx overlap(const ParamVector &x) const;
    double fidelity(const ParamVector &x) const;
    double cost(const ParamVector &x) const;
    /// Gradient of the cost 1 - F via the two-point shift rule on t.
    Eigen::VectorXd gradient(const ParamVector &x) const;
    /// Hessian of the cost from nested shifts on t, symmetrized.
    Eigen::MatrixXd hessian(const ParamVector &x) const;

  private:
    void check(const ParamVector &x) const;
    std::vector<CMatrix> embedded(const ParamVector &x) const;
    CMatrix embed(const Gate &g, double angle) const;

    CMatrix target_;
    Circuit ansatz_;
    std::vector<int> slot_gate_; // slot -> gate position
    CMatrix target_adj_;
};

/// Mean of 1 - |<psi_A|psi_B>|^2 over n_samples Haar inputs.
double state_infidelity_check(const Circuit &circ_a, const Circuit &circ_b,
                              int n_samples, std::mt19937_64 &rng);

} // namespace lgtsim
