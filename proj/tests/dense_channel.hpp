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
#include <vector>

#include "lgtsim/gateset.hpp"
#include "lgtsim/noiselab.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim::testing {

// Embeds a local operator on the given targets of an n-qubit register.
inline CMatrix embed(const CMatrix &m, const std::vector<int> &targets, int n) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t col = 0; col < dim; ++col) {
        std::uint64_t lc = 0;
        for (std::size_t k = 0; k < targets.size(); ++k)
            lc |= ((col >> targets[k]) & 1U) << k;
        for (std::uint64_t lr = 0; lr < (std::uint64_t{1} << targets.size()); ++lr) {
            std::uint64_t row = col;
            for (std::size_t k = 0; k < targets.size(); ++k) {
                row &= ~(std::uint64_t{1} << targets[k]);
                row |= ((lr >> k) & 1U) << targets[k];
            }
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                m(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
        }
    }
    return out;
}

// Density-matrix reference: two-qubit depolarizing channel after every
// noise point, then optional per-qubit bit flips on the pair.
inline std::vector<double> dense_distribution(const Circuit &c, const StateVector &init,
                                       const NoiseConfig &noise,
                                       const std::vector<int> &x_qubits) {
    const int n = c.n_qubits();
    CVector psi(static_cast<Eigen::Index>(init.dim()));
    for (std::size_t i = 0; i < init.dim(); ++i)
        psi[static_cast<Eigen::Index>(i)] = init[i];
    CMatrix rho = psi * psi.adjoint();
    const auto pts = noise_points(c);
    std::size_t p = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate &g = c.gates()[i];
        const CMatrix u = embed(gate_matrix(g), g.targets, n);
        rho = u * rho * u.adjoint();
        for (; p < pts.size() && pts[p].gate_index == i; ++p) {
            CMatrix acc = CMatrix::Zero(rho.rows(), rho.cols());
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const CMatrix pp = embed(kron(pauli(b), pauli(a)), {pts[p].a, pts[p].b}, n);
                    acc += pp * rho * pp.adjoint();
                }
            const double g = noise.pair_gamma(pts[p].a, pts[p].b);
            rho = (1.0 - g) * rho + g / 16.0 * acc;
            for (int q : {pts[p].a, pts[p].b}) {
                if (static_cast<std::size_t>(q) >= noise.qubit_flip.size())
                    continue;
                const double f = noise.qubit_flip[static_cast<std::size_t>(q)];
                const CMatrix x = embed(pauli(1), {q}, n);
                rho = (1.0 - f) * rho + f * x * rho * x;
            }
        }
    }
    for (int q : x_qubits) {
        const CMatrix h = embed(gate_matrix(Gate::make(GateKind::H, {0})), {q}, n);
        rho = h * rho * h.adjoint();
    }
    std::vector<double> probs(static_cast<std::size_t>(rho.rows()));
    for (Eigen::Index k = 0; k < rho.rows(); ++k)
        probs[static_cast<std::size_t>(k)] = rho(k, k).real();
    return probs;
}

} // namespace lgtsim::testing
