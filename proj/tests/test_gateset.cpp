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
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgtsim/error.hpp"
#include "lgtsim/gateset.hpp"
#include "lgtsim/qstate.hpp"

using namespace lgtsim;

namespace {

const cplx I1(0.0, 1.0);

CMatrix sigma(double phi) {
    CMatrix s(2, 2);
    s << 0.0, std::exp(-I1 * phi), std::exp(I1 * phi), 0.0;
    return s;
}

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

Circuit random_standard_circuit(int n, int length, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> ang(-4.0, 4.0);
    const GateKind kinds[] = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H,
                              GateKind::S,  GateKind::X,  GateKind::Y,  GateKind::Z,
                              GateKind::CNOT, GateKind::XX};
    Circuit c(n);
    for (int i = 0; i < length; ++i) {
        GateKind k = kinds[rng() % 10];
        if (n == 1 && (k == GateKind::CNOT || k == GateKind::XX))
            k = GateKind::RX;
        std::vector<int> t{static_cast<int>(rng() % n)};
        if (target_arity(k) == 2) {
            int b = static_cast<int>(rng() % (n - 1));
            if (b >= t[0])
                ++b;
            t.push_back(b);
        }
        std::vector<double> p;
        if (param_arity(k) == 1)
            p.push_back(ang(rng));
        c.add(k, t, p);
    }
    return c;
}

} // namespace

TEST(GateMatrix, EveryKindIsUnitary) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ang(-7.0, 7.0);
    for (int rep = 0; rep < 20; ++rep) {
        for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::S,
                           GateKind::X, GateKind::Y, GateKind::Z, GateKind::CNOT, GateKind::XX,
                           GateKind::GPI, GateKind::GPI2, GateKind::MS}) {
            std::vector<double> p;
            for (int i = 0; i < param_arity(k); ++i)
                p.push_back(ang(rng));
            std::vector<int> t{0};
            if (target_arity(k) == 2)
                t.push_back(1);
            const CMatrix u = gate_matrix(Gate::make(k, t, p));
            const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
            EXPECT_LE(max_abs(u.adjoint() * u - id), 1e-12) << kind_name(k);
        }
    }
}

TEST(GateMatrix, NativeDefinitions) {
    const CMatrix gpi0 = gate_matrix(Gate::make(GateKind::GPI, {0}, {0.0}));
    EXPECT_LE(max_abs(gpi0 - pauli(1)), 1e-15);
    for (double phi : {0.0, 0.3, 2.1}) {
        const CMatrix g2 = gate_matrix(Gate::make(GateKind::GPI2, {0}, {phi}));
        EXPECT_NEAR(std::abs(g2(0, 0) - M_SQRT1_2), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(g2(1, 1) - M_SQRT1_2), 0.0, 1e-15);
        const CMatrix ref = (CMatrix::Identity(2, 2) - I1 * sigma(phi)) / std::sqrt(2.0);
        EXPECT_LE(max_abs(g2 - ref), 1e-15);
        EXPECT_LE(max_abs(gate_matrix(Gate::make(GateKind::GPI, {0}, {phi})) - sigma(phi)), 1e-15);
    }
}

TEST(GateMatrix, XxIsMsWithZeroPhases) {
    for (double th : {0.0, 0.7, -2.3, 6.0}) {
        const CMatrix xx = gate_matrix(Gate::make(GateKind::XX, {0, 1}, {th}));
        const CMatrix ms = gate_matrix(Gate::make(GateKind::MS, {0, 1}, {0.0, 0.0, th}));
        EXPECT_EQ(xx, ms);
        const CMatrix ref = std::cos(th / 2) * CMatrix::Identity(4, 4) -
                            I1 * std::sin(th / 2) * kron(pauli(1), pauli(1));
        EXPECT_LE(max_abs(xx - ref), 1e-15);
    }
    EXPECT_LE(max_abs(gate_matrix(Gate::make(GateKind::XX, {0, 1}, {0.0})) -
                      CMatrix::Identity(4, 4)),
              0.0);
}

TEST(GateMatrix, MsMatchesClosedForm) {
    const double p0 = 0.4, p1 = -1.1, th = 0.9;
    const CMatrix ms = gate_matrix(Gate::make(GateKind::MS, {0, 1}, {p0, p1, th}));
    // phi0 acts on targets[0], the least significant (rightmost) factor.
    const CMatrix ref = std::cos(th / 2) * CMatrix::Identity(4, 4) -
                        I1 * std::sin(th / 2) * kron(sigma(p1), sigma(p0));
    EXPECT_LE(max_abs(ms - ref), 1e-14);
}

TEST(GateMatrix, RotationsMatchExponentials) {
    const double th = 1.3;
    for (int p = 1; p <= 3; ++p) {
        const GateKind k = p == 1 ? GateKind::RX : p == 2 ? GateKind::RY : GateKind::RZ;
        const CMatrix ref = std::cos(th / 2) * CMatrix::Identity(2, 2) - I1 * std::sin(th / 2) * pauli(p);
        EXPECT_LE(max_abs(gate_matrix(Gate::make(k, {0}, {th})) - ref), 1e-15);
    }
}

TEST(GateValidation, ArityMismatchThrows) {
    EXPECT_THROW(Gate::make(GateKind::RX, {0}, {0.1, 0.2}), ValidationError);
    EXPECT_THROW(Gate::make(GateKind::XX, {0}, {0.1}), ValidationError);
    EXPECT_THROW(Gate::make(GateKind::MS, {0, 1}, {0.1}), ValidationError);
    Circuit c(2);
    EXPECT_THROW(c.add(GateKind::X, {2}), IndexError);
}

TEST(CircuitUnitary, EmptyAndSingleRx) {
    EXPECT_LE(max_abs(circuit_unitary(Circuit(2)) - CMatrix::Identity(4, 4)), 0.0);
    Circuit c(1);
    c.add(GateKind::RX, {0}, {M_PI});
    EXPECT_LE(max_abs(circuit_unitary(c) - (-I1) * pauli(1)), 1e-15);
}

TEST(CircuitUnitary, LaterGatesMultiplyOnTheLeft) {
    Circuit c(1);
    c.add(GateKind::H, {0});
    c.add(GateKind::S, {0});
    const CMatrix h = gate_matrix(Gate::make(GateKind::H, {0}));
    const CMatrix s = gate_matrix(Gate::make(GateKind::S, {0}));
    EXPECT_LE(max_abs(circuit_unitary(c) - s * h), 1e-15);
}

TEST(CircuitUnitary, MatchesStatevectorColumns) {
    std::mt19937_64 rng(4);
    const Circuit c = random_standard_circuit(4, 30, rng);
    const CMatrix u = circuit_unitary(c);
    for (std::uint64_t col = 0; col < 16; col += 5) {
        StateVector s = StateVector::basis_state(4, col);
        for (const Gate &g : c.gates())
            s.apply(gate_matrix(g), g.targets);
        for (std::uint64_t r = 0; r < 16; ++r)
            EXPECT_NEAR(std::abs(s[r] - u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col))), 0.0, 1e-12);
    }
}

TEST(CircuitUnitary, CapacityGuard) {
    EXPECT_THROW(circuit_unitary(Circuit(13)), CapacityError);
}

TEST(Lowering, XxBecomesOneMs) {
    Circuit c(2);
    c.add(GateKind::XX, {0, 1}, {0.7});
    const Circuit low = lower_to_native(c);
    ASSERT_EQ(low.size(), 1u);
    EXPECT_EQ(low.gates()[0].kind, GateKind::MS);
    EXPECT_EQ(low.gates()[0].params, (std::vector<double>{0.0, 0.0, 0.7}));
}

TEST(Lowering, RxMatchesUpToPhase) {
    for (double th : {0.2, 1.9, -3.0}) {
        Circuit c(1);
        c.add(GateKind::RX, {0}, {th});
        const Circuit low = lower_to_native(c);
        for (const Gate &g : low.gates())
            EXPECT_TRUE(is_native(g.kind));
        EXPECT_NEAR(phase_insensitive_overlap(circuit_unitary(c), circuit_unitary(low)), 1.0, 1e-12);
    }
}

TEST(Lowering, IdentityCircuitHasNoMs) {
    EXPECT_EQ(two_qubit_count(lower_to_native(Circuit(3))), 0);
}

TEST(Lowering, RandomCircuitsStayEquivalent) {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 120; ++rep) {
        const int n = 1 + rep % 3;
        const Circuit c = random_standard_circuit(n, 12, rng);
        const Circuit low = lower_to_native(c);
        for (const Gate &g : low.gates())
            ASSERT_TRUE(is_native(g.kind));
        EXPECT_LE(two_qubit_count(low), two_qubit_count(c));
        EXPECT_NEAR(phase_insensitive_overlap(circuit_unitary(c), circuit_unitary(low)), 1.0, 1e-8);
    }
}

TEST(Lowering, ParameterizedCircuitBindsFirst) {
    Circuit c(2);
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::XX, {0, 1});
    ParamVector x(2);
    x << 0.4, 1.2;
    EXPECT_NEAR(phase_insensitive_overlap(circuit_unitary(c, x), circuit_unitary(lower_to_native(c, x))),
                1.0, 1e-12);
}

TEST(Lowering, OpaqueGateRejected) {
    Circuit c(2);
    c.add(Gate::unitary(CMatrix::Identity(4, 4), {0, 1}, 2));
    EXPECT_THROW(lower_to_native(c), LoweringError);
}

TEST(TwoQubitCount, CountsEntanglersAndDeclaredCosts) {
    Circuit c(3);
    c.add(GateKind::CNOT, {0, 1});
    c.add(GateKind::XX, {1, 2}, {0.1});
    c.add(GateKind::MS, {0, 2}, {0.0, 0.0, 0.2});
    c.add(GateKind::H, {0});
    c.add(Gate::unitary(CMatrix::Identity(8, 8), {0, 1, 2}, 6));
    EXPECT_EQ(two_qubit_count(c), 9);
}

TEST(CircuitEdits, BindAndWithoutRenumberSlots) {
    Circuit c(2);
    c.add_param(GateKind::RX, {0});
    c.add_param(GateKind::XX, {0, 1});
    c.add_param(GateKind::RY, {1});
    EXPECT_EQ(c.n_params(), 3);
    const Circuit d = c.without(1);
    EXPECT_EQ(d.n_params(), 2);
    EXPECT_EQ(d.gates()[1].slot, 1);
    ParamVector x(2);
    x << 0.5, 0.25;
    const Circuit b = d.bind(x);
    EXPECT_EQ(b.n_params(), 0);
    EXPECT_DOUBLE_EQ(b.gates()[1].params[0], 0.25);
    EXPECT_THROW(d.bind(ParamVector::Zero(3)), ValidationError);
}

TEST(Fusion, PreservesTheUnitary) {
    std::mt19937_64 rng(13);
    const Circuit c = random_standard_circuit(5, 60, rng);
    for (int m : {1, 2, 3}) {
        std::mt19937_64 rs(2);
        StateVector a = haar_random_state(5, rs);
        StateVector b = a;
        for (const Gate &g : c.gates())
            a.apply(gate_matrix(g), g.targets);
        for (const FusedOp &op : fuse(c, std::max(m, 2)))
            b.apply_unchecked(op.matrix, op.targets);
        EXPECT_NEAR(state_fidelity(a, b), 1.0, 1e-12);
    }
}

TEST(TextFormat, RoundTripKeepsAngles) {
    std::mt19937_64 rng(21);
    const Circuit c = random_standard_circuit(3, 25, rng);
    const std::string text = to_text(c);
    const Circuit back = from_text(text);
    ASSERT_EQ(back.size(), c.size());
    EXPECT_EQ(back.n_qubits(), 3);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back.gates()[i].kind, c.gates()[i].kind);
        EXPECT_EQ(back.gates()[i].targets, c.gates()[i].targets);
        EXPECT_EQ(back.gates()[i].params, c.gates()[i].params);
    }
}

TEST(TextFormat, CommentsAndErrors) {
    const Circuit c = from_text("# a comment\nMS 0,1 0.1,0.2,0.3  # trailing\n\nH 2\n");
    EXPECT_EQ(c.size(), 2u);
    EXPECT_EQ(c.n_qubits(), 3);
    EXPECT_THROW(from_text("FOO 0\n"), ValidationError);
    EXPECT_THROW(from_text("RX 0\n"), ValidationError);
    EXPECT_THROW(from_text("RX 0 abc\n"), ValidationError);
}
