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
#include "lgtsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lgtsim/error.hpp"

namespace lgtsim {

namespace {

double off_diagonal_norm(const CMatrix &a) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (r != c)
                s += std::norm(a(r, c));
    return std::sqrt(s);
}

} // namespace

HermitianEigen jacobi_eigh(const CMatrix &h, double tol, int max_sweeps) {
    const Eigen::Index n = h.rows();
    if (n != h.cols())
        throw ValidationError("jacobi_eigh: matrix is not square");
    CMatrix a = 0.5 * (h + h.adjoint());
    CMatrix v = CMatrix::Identity(n, n);
    const double scale = std::max(a.norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol * scale)
            break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag <= 1e-300)
                    continue;
                // Phase out a(p,q), then a real Jacobi rotation zeroes it.
                const cplx phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G restricted to (p,q): [[c, s], [-s conj(phase), c conj(phase)]]
                const cplx gpp = c;
                const cplx gpq = s;
                const cplx gqp = -s * std::conj(phase);
                const cplx gqq = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

CMatrix expi_hermitian(const CMatrix &h, double t) {
    const HermitianEigen e = jacobi_eigh(h);
    CVector phases(e.values.size());
    for (Eigen::Index k = 0; k < e.values.size(); ++k)
        phases(k) = std::polar(1.0, t * e.values(k));
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

bool is_unitary(const CMatrix &u, double tol) {
    if (u.rows() != u.cols())
        return false;
    const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMatrix &h, double tol) {
    if (h.rows() != h.cols())
        return false;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double phase_insensitive_overlap(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("phase_insensitive_overlap: dimension mismatch");
    return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

const CMatrix &pauli(int index) {
    static const CMatrix table[4] = {
        CMatrix::Identity(2, 2),
        (CMatrix(2, 2) << 0, 1, 1, 0).finished(),
        (CMatrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
        (CMatrix(2, 2) << 1, 0, 0, -1).finished(),
    };
    if (index < 0 || index > 3)
        throw IndexError("pauli: index must be in 0..3");
    return table[index];
}

CMatrix pauli_string(const std::vector<int> &paulis) {
    CMatrix out = CMatrix::Identity(1, 1);
    // Qubit 0 is the least significant bit, so it is the rightmost factor.
    for (int p : paulis)
        out = kron(pauli(p), out);
    return out;
}

} // namespace lgtsim
