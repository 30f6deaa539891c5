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
#include "lgtsim/ansatz.hpp"

#include "lgtsim/error.hpp"

namespace lgtsim {

namespace {

void rotation_block(Circuit &c, RotationBlock block) {
    for (int q = 0; q < c.n_qubits(); ++q) {
        c.add_param(GateKind::RX, {q});
        c.add_param(GateKind::RY, {q});
        if (block == RotationBlock::XYX)
            c.add_param(GateKind::RX, {q});
    }
}

} // namespace

Circuit layered_template(int n_qubits, const std::vector<QubitPair> &xx_sequence,
                         RotationBlock block) {
    Circuit c(n_qubits);
    for (const auto &[a, b] : xx_sequence) {
        rotation_block(c, block);
        c.add_param(GateKind::XX, {a, b});
    }
    rotation_block(c, block);
    return c;
}

Circuit hopping_ansatz_full() {
    Circuit c(3);
    for (int layer = 0; layer < 3; ++layer) {
        rotation_block(c, RotationBlock::XY);
        c.add_param(GateKind::XX, {0, 1});
        c.add_param(GateKind::XX, {0, 2});
    }
    rotation_block(c, RotationBlock::XY);
    return c;
}

Circuit hopping_ansatz_gbo() {
    // Layer 2 XX(a,b) is the only entangler whose removal keeps an exact fit.
    Circuit full = hopping_ansatz_full();
    std::size_t seen = 0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        const Gate &g = full.gates()[i];
        if (g.kind == GateKind::XX && seen++ == 2)
            return full.without(i);
    }
    return full;
}

Circuit hopping_family(int l) {
    if (l < 0)
        throw ValidationError("hopping_family: depth must be >= 0");
    static const QubitPair cycle[3] = {{0, 1}, {1, 2}, {0, 2}};
    std::vector<QubitPair> seq;
    for (int k = 0; k < l; ++k)
        seq.push_back(cycle[k % 3]);
    return layered_template(3, seq, RotationBlock::XY);
}

Circuit hopping_ansatz_depth4() {
    return layered_template(3, {{0, 1}, {0, 2}, {0, 2}, {0, 1}}, RotationBlock::XYX);
}

Circuit hopping_ansatz_reduced() {
    // Survivor of greedy deletion from the depth-4 ansatz: the four
    // entanglers and the twelve rotations that every run keeps.
    Circuit c(3);
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::RY, {1});
    c.add_param(GateKind::XX, {0, 1});
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::RX, {2});
    c.add_param(GateKind::XX, {0, 2});
    c.add_param(GateKind::RX, {0});
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::RX, {0});
    c.add_param(GateKind::RY, {2});
    c.add_param(GateKind::XX, {0, 2});
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::XX, {0, 1});
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::RY, {1});
    c.add_param(GateKind::RX, {2});
    return c;
}

Circuit bond_family(int l) {
    if (l < 0)
        throw ValidationError("bond_family: depth must be >= 0");
    Circuit c(2);
    for (int k = 0; k < l; ++k) {
        c.add_param(GateKind::XX, {0, 1});
        c.add_param(GateKind::RY, {0});
    }
    return c;
}

Circuit template_by_name(const std::string &name) {
    if (name == "hopping_full")
        return hopping_ansatz_full();
    if (name == "hopping_gbo")
        return hopping_ansatz_gbo();
    if (name == "hopping_depth4")
        return hopping_ansatz_depth4();
    if (name == "hopping_reduced")
        return hopping_ansatz_reduced();
    if (name == "bond")
        return bond_family(1);
    throw ValidationError("unknown template '" + name + "'");
}

} // namespace lgtsim
