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
#include <span>
#include <vector>

#include "lgtsim/histogram.hpp"
#include "lgtsim/linalg.hpp"

namespace lgtsim {

/// Dense statevector. Qubit 0 is the least significant bit of an index.
class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(int n_qubits);

    static StateVector from_amplitudes(std::vector<cplx> amplitudes);
    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return amp_.size(); }
    const std::vector<cplx> &amplitudes() const noexcept { return amp_; }
    std::vector<cplx> &amplitudes() noexcept { return amp_; }
    cplx operator[](std::size_t i) const { return amp_[i]; }

    double norm() const;
    void normalize();
    std::vector<double> probabilities() const;

    /// Validated application: distinct in-range targets, k in 1..3, unitary.
    void apply(const CMatrix &m, std::span<const int> targets);
    /// No checks. Used by the simulation hot paths.
    void apply_unchecked(const CMatrix &m, std::span<const int> targets);

  private:
    int n_;
    std::vector<cplx> amp_;
};

/// Contracts a 2^k x 2^k matrix into the target axes of a buffer of
/// 2^n_qubits amplitudes. targets[0] is the least significant local bit.
void apply_matrix_raw(cplx *data, int n_qubits, const CMatrix &m,
                      std::span<const int> targets);

StateVector apply_gate(StateVector state, const CMatrix &gate_matrix,
                       const std::vector<int> &targets);

/// Unitarily invariant random state (normalized complex Gaussian vector).
StateVector haar_random_state(int n_qubits, std::mt19937_64 &rng);

/// Uniformly random computational basis state.
StateVector random_basis_state(int n_qubits, std::mt19937_64 &rng);

cplx inner_product(const StateVector &a, const StateVector &b);
/// |<a|b>|^2
double state_fidelity(const StateVector &a, const StateVector &b);

struct DensityMatrix {
    CMatrix rho;
    int dim() const { return static_cast<int>(rho.rows()); }
    /// Throws ValidationError unless Hermitian, unit trace and PSD (1e-10).
    void validate() const;
};

DensityMatrix reduced_density(const StateVector &state, std::span<const int> keep);

/// Entropy in bits. Eigenvalues below 1e-12 are clamped to zero.
double von_neumann_entropy(const DensityMatrix &rho);

/// Purity Tr(rho^2).
double purity(const DensityMatrix &rho);

/// Multinomial sample via inverse-CDF lookup, one uniform per shot.
ShotHistogram sample_shots(const StateVector &state, std::uint64_t shots,
                           std::mt19937_64 &rng);

/// Draws outcomes from a probability table. Shared with the noise module.
std::vector<std::uint64_t> sample_outcomes(const std::vector<double> &probs,
                                           std::uint64_t shots,
                                           std::mt19937_64 &rng);

/// Expectation of a Pauli product. x_mask/z_mask select X and Z factors
/// (both bits set means Y).
double pauli_expectation(const StateVector &state, std::uint64_t x_mask,
                         std::uint64_t z_mask);

} // namespace lgtsim
