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
#include "lgtsim/gateset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lgtsim/error.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

namespace {

using std::numbers::pi;
constexpr cplx I1{0.0, 1.0};

struct KindInfo {
    GateKind kind;
    std::string_view name;
    int params;
    int targets;
    bool native;
};

constexpr std::array<KindInfo, 14> kKinds{{
    {GateKind::RX, "RX", 1, 1, false},
    {GateKind::RY, "RY", 1, 1, false},
    {GateKind::RZ, "RZ", 1, 1, false},
    {GateKind::H, "H", 0, 1, false},
    {GateKind::S, "S", 0, 1, false},
    {GateKind::X, "X", 0, 1, false},
    {GateKind::Y, "Y", 0, 1, false},
    {GateKind::Z, "Z", 0, 1, false},
    {GateKind::CNOT, "CNOT", 0, 2, false},
    {GateKind::XX, "XX", 1, 2, false},
    {GateKind::GPI, "GPI", 1, 1, true},
    {GateKind::GPI2, "GPI2", 1, 1, true},
    {GateKind::MS, "MS", 3, 2, true},
    {GateKind::Unitary, "U", 0, -1, false},
}};

const KindInfo &info(GateKind k) {
    for (const auto &i : kKinds)
        if (i.kind == k)
            return i;
    throw ValidationError("unknown gate kind");
}

CMatrix sigma_phi(double phi) {
    CMatrix m(2, 2);
    m << 0.0, std::polar(1.0, -phi), std::polar(1.0, phi), 0.0;
    return m;
}

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CMatrix ms_matrix(double phi0, double phi1, double theta) {
    // phi0 acts on targets[0], the least significant local bit.
    const CMatrix s = kron(sigma_phi(phi1), sigma_phi(phi0));
    return std::cos(theta / 2) * CMatrix::Identity(4, 4) - I1 * std::sin(theta / 2) * s;
}

} // namespace

std::string_view kind_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> kind_from_name(std::string_view name) {
    for (const auto &i : kKinds)
        if (i.name == name)
            return i.kind;
    return std::nullopt;
}

int param_arity(GateKind kind) { return info(kind).params; }
int target_arity(GateKind kind) { return info(kind).targets; }
bool is_native(GateKind kind) { return info(kind).native; }

Gate Gate::make(GateKind kind, std::vector<int> targets, std::vector<double> params,
                int slot) {
    Gate g;
    g.kind = kind;
    g.targets = std::move(targets);
    g.params = std::move(params);
    if (g.params.empty())
        g.params.assign(static_cast<std::size_t>(param_arity(kind)), 0.0);
    g.slot = slot;
    g.validate();
    return g;
}

Gate Gate::unitary(CMatrix m, std::vector<int> targets, int two_qubit_cost,
                   std::string label) {
    Gate g;
    g.kind = GateKind::Unitary;
    g.targets = std::move(targets);
    g.matrix = std::make_shared<const CMatrix>(std::move(m));
    g.declared_cost = two_qubit_cost;
    g.label = std::move(label);
    g.validate();
    return g;
}

void Gate::validate() const {
    const KindInfo &i = info(kind);
    if (static_cast<int>(params.size()) != i.params)
        throw ValidationError(std::string("gate ") + std::string(i.name) +
                              ": wrong number of parameters");
    if (kind == GateKind::Unitary) {
        if (!matrix)
            throw ValidationError("unitary gate without a matrix");
        if (targets.empty() || targets.size() > 3)
            throw ValidationError("unitary gate must act on 1 to 3 qubits");
        const Eigen::Index d = Eigen::Index{1} << targets.size();
        if (matrix->rows() != d || matrix->cols() != d)
            throw ValidationError("unitary gate matrix size mismatch");
        if (declared_cost < 0)
            throw ValidationError("unitary gate cost must be >= 0");
    } else if (static_cast<int>(targets.size()) != i.targets) {
        throw ValidationError(std::string("gate ") + std::string(i.name) +
                              ": wrong number of targets");
    }
    if (slot >= 0 && param_arity(kind) == 0)
        throw ValidationError("a fixed gate cannot carry a parameter slot");
    for (std::size_t a = 0; a < targets.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (targets[a] == targets[b])
                throw IndexError("gate has duplicate targets");
}

CMatrix gate_matrix(const Gate &g, double angle) {
    Gate copy = g;
    if (param_arity(g.kind) > 0)
        copy.params[static_cast<std::size_t>(g.angle_index())] = angle;
    return gate_matrix(copy);
}

CMatrix gate_matrix(const Gate &g) {
    g.validate();
    const double t = g.params.empty() ? 0.0 : g.params[0];
    const double c = std::cos(t / 2);
    const double s = std::sin(t / 2);
    switch (g.kind) {
    case GateKind::RX:
        return mat2(c, -I1 * s, -I1 * s, c);
    case GateKind::RY:
        return mat2(c, -s, s, c);
    case GateKind::RZ:
        return mat2(std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2));
    case GateKind::H:
        return mat2(1.0, 1.0, 1.0, -1.0) / std::sqrt(2.0);
    case GateKind::S:
        return mat2(1.0, 0.0, 0.0, I1);
    case GateKind::X:
        return pauli(1);
    case GateKind::Y:
        return pauli(2);
    case GateKind::Z:
        return pauli(3);
    case GateKind::CNOT: {
        // targets[0] is the control (local bit 0).
        CMatrix m = CMatrix::Zero(4, 4);
        m(0, 0) = 1.0;
        m(2, 2) = 1.0;
        m(3, 1) = 1.0;
        m(1, 3) = 1.0;
        return m;
    }
    case GateKind::XX:
        return ms_matrix(0.0, 0.0, t);
    case GateKind::GPI:
        return sigma_phi(t);
    case GateKind::GPI2:
        return (CMatrix::Identity(2, 2) - I1 * sigma_phi(t)) / std::sqrt(2.0);
    case GateKind::MS:
        return ms_matrix(g.params[0], g.params[1], g.params[2]);
    case GateKind::Unitary:
        return *g.matrix;
    }
    throw ValidationError("gate_matrix: unknown kind");
}

Circuit &Circuit::add(Gate g) {
    g.validate();
    for (int q : g.targets)
        if (q < 0 || q >= n_qubits_)
            throw IndexError("gate target " + std::to_string(q) + " out of range for " +
                             std::to_string(n_qubits_) + " qubits");
    if (g.slot >= n_params_)
        n_params_ = g.slot + 1;
    gates_.push_back(std::move(g));
    return *this;
}

Circuit &Circuit::add(GateKind kind, std::vector<int> targets, std::vector<double> params) {
    return add(Gate::make(kind, std::move(targets), std::move(params)));
}

Circuit &Circuit::add_param(GateKind kind, std::vector<int> targets) {
    if (param_arity(kind) == 0)
        throw ValidationError("add_param: gate kind has no angle");
    return add(Gate::make(kind, std::move(targets), {}, n_params_));
}

Circuit Circuit::bind(const ParamVector &x) const {
    if (n_params_ > 0 && x.size() != n_params_)
        throw ValidationError("bind: expected " + std::to_string(n_params_) +
                              " parameters, got " + std::to_string(x.size()));
    Circuit out(n_qubits_);
    for (Gate g : gates_) {
        if (g.slot >= 0) {
            const double v = x(g.slot);
            if (!std::isfinite(v))
                throw ValidationError("bind: non-finite parameter");
            g.params[static_cast<std::size_t>(g.angle_index())] = v;
            g.slot = -1;
        }
        out.add(std::move(g));
    }
    return out;
}

Circuit Circuit::remapped(const std::vector<int> &qubit_map, int n_qubits) const {
    Circuit out(n_qubits);
    for (Gate g : gates_) {
        for (int &q : g.targets) {
            if (q >= static_cast<int>(qubit_map.size()))
                throw IndexError("remapped: qubit map too short");
            q = qubit_map[static_cast<std::size_t>(q)];
        }
        out.add(std::move(g));
    }
    out.n_params_ = n_params_;
    return out;
}

Circuit Circuit::without(std::size_t i) const {
    if (i >= gates_.size())
        throw IndexError("without: gate index out of range");
    const int removed_slot = gates_[i].slot;
    Circuit out(n_qubits_);
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        if (k == i)
            continue;
        Gate g = gates_[k];
        if (removed_slot >= 0 && g.slot > removed_slot)
            --g.slot;
        out.add(std::move(g));
    }
    out.n_params_ = removed_slot >= 0 ? n_params_ - 1 : n_params_;
    return out;
}

void Circuit::validate() const {
    std::vector<int> seen(static_cast<std::size_t>(n_params_), 0);
    for (const Gate &g : gates_) {
        g.validate();
        for (int q : g.targets)
            if (q < 0 || q >= n_qubits_)
                throw IndexError("circuit target out of range");
        if (g.slot >= n_params_)
            throw ValidationError("circuit slot exceeds parameter count");
        if (g.slot >= 0)
            ++seen[static_cast<std::size_t>(g.slot)];
    }
    for (int c : seen)
        if (c != 1)
            throw ValidationError("every parameter slot must drive exactly one gate");
}

CMatrix circuit_unitary(const Circuit &circuit, const ParamVector &params) {
    const int n = circuit.n_qubits();
    if (n > 12)
        throw CapacityError("circuit_unitary: dense construction limited to 12 qubits");
    if (circuit.n_params() > 0 && params.size() != circuit.n_params())
        throw ValidationError("circuit_unitary: parameter count mismatch");
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix u = CMatrix::Identity(dim, dim);
    for (const Gate &g : circuit.gates()) {
        const CMatrix m = g.slot >= 0 ? gate_matrix(g, params(g.slot)) : gate_matrix(g);
        for (Eigen::Index c = 0; c < dim; ++c)
            apply_matrix_raw(u.col(c).data(), n, m, g.targets);
    }
    return u;
}

namespace {

void emit_rz(Circuit &out, int q, double theta) {
    // GPI(a) GPI(b) = RZ(2(a - b))
    out.add(GateKind::GPI, {q}, {0.0});
    out.add(GateKind::GPI, {q}, {theta / 2});
}

void emit_rx(Circuit &out, int q, double theta) {
    out.add(GateKind::GPI2, {q}, {1.5 * pi});
    emit_rz(out, q, theta);
    out.add(GateKind::GPI2, {q}, {0.5 * pi});
}

void emit_ry(Circuit &out, int q, double theta) {
    out.add(GateKind::GPI2, {q}, {0.0});
    emit_rz(out, q, theta);
    out.add(GateKind::GPI2, {q}, {pi});
}

} // namespace

Circuit lower_to_native(const Circuit &circuit, const ParamVector &params) {
    const Circuit bound = circuit.n_params() > 0 ? circuit.bind(params) : circuit;
    Circuit out(circuit.n_qubits());
    for (const Gate &g : bound.gates()) {
        const int q = g.targets[0];
        const double t = g.params.empty() ? 0.0 : g.params[0];
        switch (g.kind) {
        case GateKind::RX:
            emit_rx(out, q, t);
            break;
        case GateKind::RY:
            emit_ry(out, q, t);
            break;
        case GateKind::RZ:
            emit_rz(out, q, t);
            break;
        case GateKind::H:
            out.add(GateKind::GPI2, {q}, {0.5 * pi});
            out.add(GateKind::GPI, {q}, {0.0});
            break;
        case GateKind::S:
            emit_rz(out, q, 0.5 * pi);
            break;
        case GateKind::X:
            out.add(GateKind::GPI, {q}, {0.0});
            break;
        case GateKind::Y:
            out.add(GateKind::GPI, {q}, {0.5 * pi});
            break;
        case GateKind::Z:
            out.add(GateKind::GPI, {q}, {0.0});
            out.add(GateKind::GPI, {q}, {0.5 * pi});
            break;
        case GateKind::CNOT: {
            const int c = g.targets[0];
            const int tq = g.targets[1];
            emit_ry(out, c, 0.5 * pi);
            out.add(GateKind::MS, {c, tq}, {0.0, 0.0, 0.5 * pi});
            emit_rx(out, c, -0.5 * pi);
            emit_rx(out, tq, -0.5 * pi);
            emit_ry(out, c, -0.5 * pi);
            break;
        }
        case GateKind::XX:
            out.add(GateKind::MS, g.targets, {0.0, 0.0, t});
            break;
        case GateKind::GPI:
        case GateKind::GPI2:
        case GateKind::MS:
            out.add(g);
            break;
        case GateKind::Unitary:
            throw LoweringError("lower_to_native: opaque unitary gates have no native form");
        }
    }
    return out;
}

int two_qubit_count(const Circuit &circuit) {
    int n = 0;
    for (const Gate &g : circuit.gates()) {
        if (g.kind == GateKind::Unitary)
            n += g.declared_cost;
        else if (g.targets.size() == 2)
            ++n;
    }
    return n;
}

std::vector<FusedOp> fuse(const Circuit &bound, int max_qubits) {
    if (max_qubits < 1 || max_qubits > 4)
        throw ValidationError("fuse: max_qubits must be in 1..4");
    std::vector<FusedOp> out;
    FusedOp cur;
    auto flush = [&] {
        if (!cur.targets.empty())
            out.push_back(std::move(cur));
        cur = FusedOp{};
    };
    for (const Gate &g : bound.gates()) {
        if (g.slot >= 0)
            throw ValidationError("fuse: circuit has unbound parameters");
        std::vector<int> uni = cur.targets;
        for (int q : g.targets)
            if (std::find(uni.begin(), uni.end(), q) == uni.end())
                uni.push_back(q);
        if (static_cast<int>(uni.size()) > max_qubits) {
            flush();
            uni = g.targets;
        }
        if (cur.targets.empty()) {
            cur.targets = uni;
            cur.matrix = CMatrix::Identity(Eigen::Index{1} << uni.size(),
                                           Eigen::Index{1} << uni.size());
        } else if (uni.size() > cur.targets.size()) {
            // New qubits take the higher local bits.
            const Eigen::Index extra = Eigen::Index{1} << (uni.size() - cur.targets.size());
            cur.matrix = kron(CMatrix::Identity(extra, extra), cur.matrix);
            cur.targets = uni;
        }
        std::vector<int> local;
        for (int q : g.targets)
            local.push_back(static_cast<int>(
                std::find(cur.targets.begin(), cur.targets.end(), q) - cur.targets.begin()));
        const CMatrix m = gate_matrix(g);
        const int nloc = static_cast<int>(cur.targets.size());
        for (Eigen::Index c = 0; c < cur.matrix.cols(); ++c)
            apply_matrix_raw(cur.matrix.col(c).data(), nloc, m, local);
    }
    flush();
    return out;
}

} // namespace lgtsim
