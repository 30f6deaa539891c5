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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lgtsim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using ParamVector = Eigen::VectorXd;

struct HermitianEigen {
    Eigen::VectorXd values; // ascending
    CMatrix vectors;        // columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for small Hermitian matrices.
HermitianEigen jacobi_eigh(const CMatrix &h, double tol = 1e-15,
                           int max_sweeps = 64);

/// exp(i * t * h) for Hermitian h, via jacobi_eigh.
CMatrix expi_hermitian(const CMatrix &h, double t);

bool is_unitary(const CMatrix &u, double tol);
bool is_hermitian(const CMatrix &h, double tol);

/// |Tr(a^dagger b)| / dim. Equals 1 iff b = e^{i phi} a for unitaries.
double phase_insensitive_overlap(const CMatrix &a, const CMatrix &b);

CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Pauli matrices indexed 0=I, 1=X, 2=Y, 3=Z.
const CMatrix &pauli(int index);

/// Tensor product of single-qubit Paulis, paulis[k] acting on qubit k
/// (qubit 0 is the least significant bit).
CMatrix pauli_string(const std::vector<int> &paulis);

} // namespace lgtsim
