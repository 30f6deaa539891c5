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
#include "lgtsim/qstate.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "lgtsim/error.hpp"

namespace lgtsim {

namespace {

template <int K>
void apply_fixed(cplx *data, int n_qubits, const CMatrix &m, std::span<const int> targets) {
    constexpr int D = 1 << K;
    // Split real and imaginary parts: std::complex products go through the
    // slow NaN-aware library path otherwise.
    std::array<double, D * D> mre{}, mim{};
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) {
            mre[r * D + c] = m(r, c).real();
            mim[r * D + c] = m(r, c).imag();
        }

    std::array<int, K> sorted{};
    std::copy(targets.begin(), targets.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());

    std::array<std::size_t, D> offs{};
    for (int l = 0; l < D; ++l) {
        std::size_t o = 0;
        for (int j = 0; j < K; ++j)
            if ((l >> j) & 1)
                o |= std::size_t{1} << targets[j];
        offs[l] = o;
    }

    const std::size_t groups = std::size_t{1} << (n_qubits - K);
    std::array<double, D> ire{}, iim{};
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t base = g;
        for (int j = 0; j < K; ++j) {
            const std::size_t low = base & ((std::size_t{1} << sorted[j]) - 1);
            base = ((base >> sorted[j]) << (sorted[j] + 1)) | low;
        }
        for (int l = 0; l < D; ++l) {
            ire[l] = data[base + offs[l]].real();
            iim[l] = data[base + offs[l]].imag();
        }
        for (int r = 0; r < D; ++r) {
            double are = 0.0, aim = 0.0;
            for (int c = 0; c < D; ++c) {
                are += mre[r * D + c] * ire[c] - mim[r * D + c] * iim[c];
                aim += mre[r * D + c] * iim[c] + mim[r * D + c] * ire[c];
            }
            data[base + offs[r]] = cplx(are, aim);
        }
    }
}

void validate_targets(int n_qubits, std::span<const int> targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= n_qubits)
            throw IndexError("target qubit " + std::to_string(targets[i]) +
                             " out of range for " + std::to_string(n_qubits) +
                             " qubits");
        for (std::size_t j = 0; j < i; ++j)
            if (targets[i] == targets[j])
                throw IndexError("duplicate target qubit " + std::to_string(targets[i]));
    }
}

} // namespace

void apply_matrix_raw(cplx *data, int n_qubits, const CMatrix &m,
                      std::span<const int> targets) {
    switch (targets.size()) {
    case 1:
        apply_fixed<1>(data, n_qubits, m, targets);
        return;
    case 2:
        apply_fixed<2>(data, n_qubits, m, targets);
        return;
    case 3:
        apply_fixed<3>(data, n_qubits, m, targets);
        return;
    case 4:
        apply_fixed<4>(data, n_qubits, m, targets);
        return;
    default:
        throw ValidationError("apply_matrix_raw: supports 1 to 4 targets");
    }
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 30)
        throw ValidationError("StateVector: n_qubits must be in 1..30");
    amp_.assign(std::size_t{1} << n_qubits, cplx(0.0));
    amp_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
    const std::size_t len = amplitudes.size();
    if (len < 2 || !std::has_single_bit(len))
        throw ValidationError("from_amplitudes: length must be a power of two >= 2");
    StateVector s(std::countr_zero(len));
    s.amp_ = std::move(amplitudes);
    if (std::abs(s.norm() - 1.0) > 1e-10)
        throw ValidationError("from_amplitudes: state is not normalized");
    return s;
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim())
        throw IndexError("basis_state: index out of range");
    s.amp_[0] = 0.0;
    s.amp_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx &a : amp_)
        s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0)
        throw ValidationError("normalize: zero vector");
    for (cplx &a : amp_)
        a /= n;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amp_.size());
    for (std::size_t i = 0; i < amp_.size(); ++i)
        p[i] = std::norm(amp_[i]);
    return p;
}

void StateVector::apply(const CMatrix &m, std::span<const int> targets) {
    if (targets.empty() || targets.size() > 3)
        throw ValidationError("apply: gate must act on 1 to 3 qubits");
    validate_targets(n_, targets);
    const Eigen::Index d = Eigen::Index{1} << targets.size();
    if (m.rows() != d || m.cols() != d)
        throw ValidationError("apply: matrix size does not match target count");
    if (!is_unitary(m, 1e-8))
        throw ValidationError("apply: matrix is not unitary");
    apply_matrix_raw(amp_.data(), n_, m, targets);
}

void StateVector::apply_unchecked(const CMatrix &m, std::span<const int> targets) {
    apply_matrix_raw(amp_.data(), n_, m, targets);
}

StateVector apply_gate(StateVector state, const CMatrix &gate_matrix,
                       const std::vector<int> &targets) {
    state.apply(gate_matrix, targets);
    return state;
}

StateVector haar_random_state(int n_qubits, std::mt19937_64 &rng) {
    if (n_qubits < 1)
        throw ValidationError("haar_random_state: n_qubits must be >= 1");
    StateVector s(n_qubits);
    std::normal_distribution<double> g(0.0, 1.0);
    for (cplx &a : s.amplitudes()) {
        const double re = g(rng);
        const double im = g(rng);
        a = cplx(re, im);
    }
    s.normalize();
    return s;
}

StateVector random_basis_state(int n_qubits, std::mt19937_64 &rng) {
    StateVector s(n_qubits);
    std::uniform_int_distribution<std::uint64_t> pick(0, s.dim() - 1);
    return StateVector::basis_state(n_qubits, pick(rng));
}

cplx inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim())
        throw ValidationError("inner_product: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

double state_fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

void DensityMatrix::validate() const {
    if (!is_hermitian(rho, 1e-10))
        throw ValidationError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
        throw ValidationError("density matrix trace is not 1");
    const HermitianEigen e = jacobi_eigh(rho);
    if (e.values.minCoeff() < -1e-10)
        throw ValidationError("density matrix has a negative eigenvalue");
}

DensityMatrix reduced_density(const StateVector &state, std::span<const int> keep) {
    const int n = state.n_qubits();
    if (keep.empty() || static_cast<int>(keep.size()) >= n)
        throw ValidationError("reduced_density: keep must be a nonempty proper subset");
    validate_targets(n, keep);
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end())
            rest.push_back(q);

    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index dr = Eigen::Index{1} << rest.size();
    CMatrix m = CMatrix::Zero(dk, dr);
    for (std::size_t j = 0; j < state.dim(); ++j) {
        Eigen::Index a = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            a |= static_cast<Eigen::Index>((j >> keep[k]) & 1U) << k;
        Eigen::Index r = 0;
        for (std::size_t k = 0; k < rest.size(); ++k)
            r |= static_cast<Eigen::Index>((j >> rest[k]) & 1U) << k;
        m(a, r) = state[j];
    }
    return DensityMatrix{m * m.adjoint()};
}

double von_neumann_entropy(const DensityMatrix &rho) {
    if (!is_hermitian(rho.rho, 1e-10))
        throw ValidationError("von_neumann_entropy: input is not Hermitian");
    const HermitianEigen e = jacobi_eigh(rho.rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        const double l = e.values(k);
        if (l > 1e-12)
            s -= l * std::log2(l);
    }
    return std::max(s, 0.0);
}

double purity(const DensityMatrix &rho) {
    return (rho.rho * rho.rho).trace().real();
}

std::vector<std::uint64_t> sample_outcomes(const std::vector<double> &probs,
                                           std::uint64_t shots,
                                           std::mt19937_64 &rng) {
    if (shots == 0)
        throw ValidationError("sample: shots must be >= 1");
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    const double total = cdf.back();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::uint64_t> out(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double x = u(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        if (it == cdf.end())
            --it;
        out[s] = static_cast<std::uint64_t>(it - cdf.begin());
    }
    return out;
}

ShotHistogram sample_shots(const StateVector &state, std::uint64_t shots,
                           std::mt19937_64 &rng) {
    ShotHistogram h(state.n_qubits());
    for (std::uint64_t o : sample_outcomes(state.probabilities(), shots, rng))
        h.add(o);
    return h;
}

double pauli_expectation(const StateVector &state, std::uint64_t x_mask,
                         std::uint64_t z_mask) {
    const int ny = std::popcount(x_mask & z_mask);
    // Y = i X Z on each qubit where both masks are set.
    static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    cplx s = 0.0;
    for (std::size_t j = 0; j < state.dim(); ++j) {
        const double sign = (std::popcount(j & z_mask) & 1) ? -1.0 : 1.0;
        s += std::conj(state[j ^ x_mask]) * state[j] * sign;
    }
    return (s * ipow[ny % 4]).real();
}

} // namespace lgtsim
