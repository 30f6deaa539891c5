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

#include <string>
#include <utility>
#include <vector>

#include "lgtsim/gateset.hpp"

namespace lgtsim {

using QubitPair = std::pair<int, int>;

/// Single-qubit rotation block placed on every qubit between entanglers.
enum class RotationBlock {
    XY,  // RX then RY
    XYX, // RX, RY, RX (complete Euler decomposition)
};

/// One rotation block on every qubit before each XX in xx_sequence and a
/// closing block after the last one. Every angle is a free parameter.
Circuit layered_template(int n_qubits, const std::vector<QubitPair> &xx_sequence,
                         RotationBlock block);

/// Three-qubit hopping ansatz with three layers of [RX, RY on all qubits,
/// XX(a,b), XX(a,c)] and a closing RX, RY layer: 30 parameters.
/// Local qubits: a = 0 (site i), b = 1 (bond), c = 2 (site i+1).
Circuit hopping_ansatz_full();

/// The full ansatz with the second-layer XX(a,b) removed: 5 entanglers,
/// 29 parameters.
Circuit hopping_ansatz_gbo();

/// Depth-l member of the entropy-scan family: one XX per layer, cycling
/// through (a,b), (b,c), (a,c), with RX, RY blocks on all qubits.
Circuit hopping_family(int l);

/// Depth-4 ansatz used for the compression stage: XX on (a,b), (a,c),
/// (a,c), (a,b) with complete Euler blocks.
Circuit hopping_ansatz_depth4();

/// Reduced hopping ansatz: XX on (a,b), (a,c), (a,c), (a,b) with 12
/// rotations, 16 parameters.
Circuit hopping_ansatz_reduced();

/// Bond-interaction family: l layers of [XX(0,1), RY(0)].
Circuit bond_family(int l);

/// Named lookup used by configuration files.
Circuit template_by_name(const std::string &name);

} // namespace lgtsim
