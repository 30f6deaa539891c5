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
#include "lgtsim/objective.hpp"

#include <cmath>
#include <numbers>

#include "lgtsim/error.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
const double kShiftNorm = 2.0 * std::numbers::sqrt2;

bool has_involutory_generator(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
           k == GateKind::XX || k == GateKind::MS;
}

// Tr(a b) without forming the product.
cplx trace_product(const CMatrix &a, const CMatrix &b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

} // namespace

ObjectiveHandle::ObjectiveHandle(CMatrix target, Circuit ansatz)
    : target_(std::move(target)), ansatz_(std::move(ansatz)) {
    ansatz_.validate();
    if (ansatz_.n_qubits() > 6)
        throw CapacityError("ObjectiveHandle: ansatz limited to 6 qubits");
    const Eigen::Index d = Eigen::Index{1} << ansatz_.n_qubits();
    if (target_.rows() != d || target_.cols() != d)
        throw ValidationError("ObjectiveHandle: target dimension does not match ansatz");
    slot_gate_.assign(static_cast<std::size_t>(ansatz_.n_params()), -1);
    for (std::size_t k = 0; k < ansatz_.size(); ++k) {
        const Gate &g = ansatz_.gates()[k];
        if (g.slot < 0)
            continue;
        if (!has_involutory_generator(g.kind))
            throw UnsupportedGateError(std::string("gate ") + std::string(kind_name(g.kind)) +
                                       " has no involutory generator for the shift rule");
        slot_gate_[static_cast<std::size_t>(g.slot)] = static_cast<int>(k);
    }
    target_adj_ = target_.adjoint();
}

void ObjectiveHandle::check(const ParamVector &x) const {
    if (x.size() != dim())
        throw ValidationError("objective: expected " + std::to_string(dim()) +
                              " parameters, got " + std::to_string(x.size()));
    if (!x.allFinite())
        throw ValidationError("objective: non-finite parameter");
}

CMatrix ObjectiveHandle::embed(const Gate &g, double angle) const {
    const int n = ansatz_.n_qubits();
    const Eigen::Index d = Eigen::Index{1} << n;
    const CMatrix m = param_arity(g.kind) > 0 ? gate_matrix(g, angle) : gate_matrix(g);
    CMatrix e = CMatrix::Identity(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        apply_matrix_raw(e.col(c).data(), n, m, g.targets);
    return e;
}

std::vector<CMatrix> ObjectiveHandle::embedded(const ParamVector &x) const {
    std::vector<CMatrix> out;
    out.reserve(ansatz_.size());
    for (const Gate &g : ansatz_.gates()) {
        const double a = g.slot >= 0 ? x(g.slot)
                         : param_arity(g.kind) > 0
                             ? g.params[static_cast<std::size_t>(g.angle_index())]
                             : 0.0;
        out.push_back(embed(g, a));
    }
    return out;
}

cplx ObjectiveHandle::overlap(const ParamVector &x) const {
    check(x);
    const Eigen::Index d = target_.rows();
    CMatrix u = CMatrix::Identity(d, d);
    for (const CMatrix &g : embedded(x))
        u = g * u;
    return trace_product(target_adj_, u) / static_cast<double>(d);
}

double ObjectiveHandle::fidelity(const ParamVector &x) const {
    return std::min(1.0, std::norm(overlap(x)));
}

double ObjectiveHandle::cost(const ParamVector &x) const { return 1.0 - fidelity(x); }

namespace {

struct Chain {
    std::vector<CMatrix> gates;  // embedded, time order
    std::vector<CMatrix> prefix; // prefix[k] = G_{k-1} ... G_0
    std::vector<CMatrix> left;   // left[k] = C^dagger G_{n-1} ... G_{k+1}
};

Chain make_chain(std::vector<CMatrix> gates, const CMatrix &target_adj) {
    Chain c;
    const std::size_t n = gates.size();
    const Eigen::Index d = target_adj.rows();
    c.prefix.resize(n + 1);
    c.prefix[0] = CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < n; ++k)
        c.prefix[k + 1] = gates[k] * c.prefix[k];
    c.left.resize(n);
    CMatrix acc = target_adj;
    for (std::size_t k = n; k-- > 0;) {
        c.left[k] = acc;
        acc = acc * gates[k];
    }
    c.gates = std::move(gates);
    return c;
}

} // namespace

Eigen::VectorXd ObjectiveHandle::gradient(const ParamVector &x) const {
    check(x);
    const double dd = static_cast<double>(target_.rows());
    const Chain ch = make_chain(embedded(x), target_adj_);
    const cplx t = trace_product(ch.left.back(), ch.prefix.back()) / dd;
    Eigen::VectorXd g(dim());
    for (int s = 0; s < dim(); ++s) {
        const std::size_t k = static_cast<std::size_t>(slot_gate_[static_cast<std::size_t>(s)]);
        const Gate &gate = ansatz_.gates()[k];
        const CMatrix pl = ch.prefix[k] * ch.left[k];
        const cplx tp = trace_product(embed(gate, x(s) + kHalfPi), pl) / dd;
        const cplx tm = trace_product(embed(gate, x(s) - kHalfPi), pl) / dd;
        const cplx dt = (tp - tm) / kShiftNorm;
        g(s) = -2.0 * std::real(std::conj(t) * dt);
    }
    return g;
}

Eigen::MatrixXd ObjectiveHandle::hessian(const ParamVector &x) const {
    check(x);
    const int nd = dim();
    const double dd = static_cast<double>(target_.rows());
    const Chain ch = make_chain(embedded(x), target_adj_);
    const cplx t = trace_product(ch.left.back(), ch.prefix.back()) / dd;

    // First derivatives and pure second derivatives of t.
    Eigen::VectorXcd dt(nd);
    Eigen::MatrixXcd ddt = Eigen::MatrixXcd::Zero(nd, nd);
    for (int s = 0; s < nd; ++s) {
        const std::size_t k = static_cast<std::size_t>(slot_gate_[static_cast<std::size_t>(s)]);
        const Gate &gate = ansatz_.gates()[k];
        const CMatrix pl = ch.prefix[k] * ch.left[k];
        const cplx tp = trace_product(embed(gate, x(s) + kHalfPi), pl) / dd;
        const cplx tm = trace_product(embed(gate, x(s) - kHalfPi), pl) / dd;
        dt(s) = (tp - tm) / kShiftNorm;
        const cplx tpp = trace_product(embed(gate, x(s) + 2 * kHalfPi), pl) / dd;
        const cplx tmm = trace_product(embed(gate, x(s) - 2 * kHalfPi), pl) / dd;
        ddt(s, s) = (tpp - 2.0 * t + tmm) / 8.0;
    }

    // Mixed terms: walk forward from each shifted gate.
    const std::size_t n = ch.gates.size();
    for (int s1 = 0; s1 < nd; ++s1) {
        const std::size_t k = static_cast<std::size_t>(slot_gate_[static_cast<std::size_t>(s1)]);
        const Gate &gk = ansatz_.gates()[k];
        for (int sk = -1; sk <= 1; sk += 2) {
            CMatrix w = embed(gk, x(s1) + sk * kHalfPi) * ch.prefix[k];
            for (std::size_t l = k + 1; l < n; ++l) {
                const Gate &gl = ansatz_.gates()[l];
                if (gl.slot >= 0) {
                    const int s2 = gl.slot;
                    const CMatrix wl = w * ch.left[l];
                    const cplx vp = trace_product(embed(gl, x(s2) + kHalfPi), wl) / dd;
                    const cplx vm = trace_product(embed(gl, x(s2) - kHalfPi), wl) / dd;
                    const cplx contrib = static_cast<double>(sk) * (vp - vm) / 8.0;
                    ddt(s1, s2) += contrib;
                    ddt(s2, s1) += contrib;
                }
                w = ch.gates[l] * w;
            }
        }
    }

    Eigen::MatrixXd h(nd, nd);
    for (int a = 0; a < nd; ++a)
        for (int b = 0; b < nd; ++b)
            h(a, b) = -2.0 * std::real(std::conj(dt(a)) * dt(b) + std::conj(t) * ddt(a, b));
    return 0.5 * (h + h.transpose());
}

double state_infidelity_check(const Circuit &circ_a, const Circuit &circ_b, int n_samples,
                              std::mt19937_64 &rng) {
    if (n_samples <= 0)
        throw ValidationError("state_infidelity_check: n_samples must be >= 1");
    if (circ_a.n_qubits() != circ_b.n_qubits())
        throw ValidationError("state_infidelity_check: qubit counts differ");
    const auto ops_a = fuse(circ_a, 3);
    const auto ops_b = fuse(circ_b, 3);
    double acc = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        StateVector a = haar_random_state(circ_a.n_qubits(), rng);
        StateVector b = a;
        for (const FusedOp &op : ops_a)
            a.apply_unchecked(op.matrix, op.targets);
        for (const FusedOp &op : ops_b)
            b.apply_unchecked(op.matrix, op.targets);
        acc += 1.0 - state_fidelity(a, b);
    }
    return acc / n_samples;
}

} // namespace lgtsim
