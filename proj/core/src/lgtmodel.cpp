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
#include "lgtsim/lgtmodel.hpp"

#include <bit>
#include <cmath>

#include "lgtsim/error.hpp"

namespace lgtsim {

LatticeLayout::LatticeLayout(int n_sites) : n_(n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw ValidationError("LatticeLayout: N must be even and >= 2");
    if (3 * n_sites > 30)
        throw CapacityError("LatticeLayout: 3N must not exceed 30 qubits");
}

int LatticeLayout::up_site(int i) const { return wrap(i); }
int LatticeLayout::down_site(int i) const { return n_ + wrap(i); }
int LatticeLayout::bond(int i) const { return 2 * n_ + wrap(i); }

std::uint64_t LatticeLayout::up_mask() const { return (std::uint64_t{1} << n_) - 1; }
std::uint64_t LatticeLayout::down_mask() const { return up_mask() << n_; }
std::uint64_t LatticeLayout::bond_mask() const { return up_mask() << (2 * n_); }

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::Direct:
        return "direct";
    case Variant::Gbo:
        return "gbo";
    case Variant::Vne:
        return "vne";
    }
    return "?";
}

Variant variant_from_name(const std::string &name) {
    if (name == "direct")
        return Variant::Direct;
    if (name == "gbo")
        return Variant::Gbo;
    if (name == "vne")
        return Variant::Vne;
    throw ValidationError("unknown variant '" + name + "' (expected direct, gbo or vne)");
}

void TrotterConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("TrotterConfig: dt must be > 0");
    if (n_steps < 0)
        throw ValidationError("TrotterConfig: n_steps must be >= 0");
    if (!std::isfinite(J) || !std::isfinite(U))
        throw ValidationError("TrotterConfig: J and U must be finite");
}

CMatrix target_unitary_C(double J, double dt) {
    // Pauli index per local qubit (a, b, c): 1 = X, 2 = Y, 3 = Z.
    const CMatrix gen = pauli_string({1, 3, 1}) + pauli_string({2, 3, 2});
    return expi_hermitian(gen, J * dt);
}

CMatrix target_unitary_B(double U, double dt) {
    return gate_matrix(Gate::make(GateKind::XX, {0, 1}, {U * dt}));
}

namespace {

void splice(Circuit &out, const CompiledBlock &block, const std::vector<int> &map) {
    const Circuit local = block.circuit.bind(block.params).remapped(map, out.n_qubits());
    for (const Gate &g : local.gates())
        out.add(g);
}

void check_block(const CompiledBlock &block, const CMatrix &target, const char *name) {
    const double f = std::pow(
        phase_insensitive_overlap(target, circuit_unitary(block.circuit, block.params)), 2);
    if (f < kCompiledFidelityFloor)
        throw ValidationError(std::string("compiled ") + name +
                              " block fails verification (fidelity " + std::to_string(f) +
                              ")");
}

} // namespace

Circuit build_trotter_step(const LatticeLayout &layout, const TrotterConfig &config,
                           const CompiledSet *compiled) {
    config.validate();
    const int n = layout.n_sites();
    const CMatrix c_mat = target_unitary_C(config.J, config.dt);
    const CMatrix b_mat = target_unitary_B(config.U, config.dt);

    const bool c_compiled = config.variant != Variant::Direct;
    const bool b_compiled = config.variant == Variant::Vne;
    if (c_compiled && (!compiled || !compiled->c_block))
        throw MissingArtifactError("variant " + variant_name(config.variant) +
                                   " needs a compiled C block");
    if (b_compiled && (!compiled || !compiled->b_block))
        throw MissingArtifactError("variant vne needs a compiled B block");
    if (c_compiled)
        check_block(*compiled->c_block, c_mat, "C");
    if (b_compiled)
        check_block(*compiled->b_block, b_mat, "B");

    Circuit step(layout.n_qubits());
    for (int sigma = 0; sigma < 2; ++sigma) {
        for (int parity = 0; parity < 2; ++parity) {
            for (int j = parity; j < n; j += 2) {
                const std::vector<int> map{layout.site(j, sigma), layout.bond(j),
                                           layout.site(j + 1, sigma)};
                if (c_compiled)
                    splice(step, *compiled->c_block, map);
                else
                    step.add(Gate::unitary(c_mat, map, kDirectCCost, "C"));
            }
        }
    }
    for (int j = 0; j < n; ++j) {
        const std::vector<int> map{layout.bond(j - 1), layout.bond(j)};
        if (b_compiled)
            splice(step, *compiled->b_block, map);
        else
            step.add(Gate::unitary(b_mat, map, kDirectBCost, "B"));
    }
    return step;
}

StateVector initial_state(const LatticeLayout &layout) {
    const int n = layout.n_sites();
    StateVector s(layout.n_qubits());
    std::uint64_t sites = 0;
    for (int i = 0; i < n; ++i) {
        if (i >= n / 2)
            sites |= std::uint64_t{1} << layout.up_site(i);
        else
            sites |= std::uint64_t{1} << layout.down_site(i);
    }
    std::uint64_t even = 0;
    for (int k = 0; k < n; k += 2)
        even |= std::uint64_t{1} << k;
    const std::uint64_t odd = ~even & ((std::uint64_t{1} << n) - 1);
    const double amp = std::pow(2.0, -0.5 * n) / std::sqrt(2.0);

    auto &a = s.amplitudes();
    a[0] = 0.0;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        // |+> on even bonds and |-> on odd ones, plus the swapped pattern.
        const double p1 = (std::popcount(b & odd) & 1) ? -1.0 : 1.0;
        const double p2 = (std::popcount(b & even) & 1) ? -1.0 : 1.0;
        a[sites | (b << layout.bond(0))] = amp * (p1 + p2);
    }
    return s;
}

namespace {

int check_site_index(const LatticeLayout &layout, int i) {
    if (i < 1 || i > layout.n_sites())
        throw IndexError("correlator site index must be in 1..N");
    return i - 1;
}

int spin(std::uint64_t outcome, const LatticeLayout &layout, int site) {
    const int nu = ((outcome >> layout.up_site(site)) & 1U) ? 0 : 1;
    const int nd = ((outcome >> layout.down_site(site)) & 1U) ? 0 : 1;
    return nu - nd;
}

struct Moments {
    double w = 0, a = 0, b = 0, ab = 0;
    void add(double weight, int sa, int sb) {
        w += weight;
        a += weight * sa;
        b += weight * sb;
        ab += weight * sa * sb;
    }
    double covariance() const { return ab / w - (a / w) * (b / w); }
};

} // namespace

double magnetization_correlator(const ShotHistogram &h, const LatticeLayout &layout, int i) {
    const int p = check_site_index(layout, i);
    if (h.n_qubits != layout.n_qubits())
        throw ValidationError("correlator: histogram width does not match layout");
    Moments m;
    for (const auto &[outcome, count] : h.counts)
        m.add(static_cast<double>(count), spin(outcome, layout, p),
              spin(outcome, layout, (p + 1) % layout.n_sites()));
    if (m.w == 0.0)
        throw NoDataError("correlator: histogram is empty");
    return m.covariance();
}

double magnetization_correlator(const StateVector &state, const LatticeLayout &layout,
                                int i) {
    const int p = check_site_index(layout, i);
    Moments m;
    for (std::uint64_t k = 0; k < state.dim(); ++k) {
        const double w = std::norm(state[k]);
        if (w > 0.0)
            m.add(w, spin(k, layout, p), spin(k, layout, (p + 1) % layout.n_sites()));
    }
    return m.covariance();
}

double charge_expectation(const StateVector &state, const LatticeLayout &layout, int j) {
    const std::uint64_t x = (std::uint64_t{1} << layout.bond(j - 1)) |
                            (std::uint64_t{1} << layout.bond(j));
    const std::uint64_t z = (std::uint64_t{1} << layout.up_site(j)) |
                            (std::uint64_t{1} << layout.down_site(j));
    // (-1)^(n_up + n_down) = Z_up Z_down because n = (1 + Z) / 2.
    return pauli_expectation(state, x, z);
}

std::vector<double> charge_expectations(const StateVector &state,
                                        const LatticeLayout &layout) {
    std::vector<double> q;
    for (int j = 0; j < layout.n_sites(); ++j)
        q.push_back(charge_expectation(state, layout, j));
    return q;
}

double sector_leakage(const StateVector &state, const LatticeLayout &layout, int n_up,
                      int n_down) {
    const int n = layout.n_sites();
    double leak = 0.0;
    for (std::uint64_t k = 0; k < state.dim(); ++k) {
        const int up = n - std::popcount(k & layout.up_mask());
        const int down = n - std::popcount(k & layout.down_mask());
        if (up != n_up || down != n_down)
            leak += std::norm(state[k]);
    }
    return leak;
}

int initial_up_count(const LatticeLayout &layout) { return layout.n_sites() / 2; }
int initial_down_count(const LatticeLayout &layout) { return layout.n_sites() / 2; }

void apply_circuit(StateVector &state, const Circuit &bound) {
    for (const FusedOp &op : fuse(bound, 3))
        state.apply_unchecked(op.matrix, op.targets);
}

std::vector<double> exact_evolution_oracle(const LatticeLayout &layout,
                                           const TrotterConfig &config, int i) {
    if (layout.n_sites() > 6)
        throw CapacityError("exact_evolution_oracle: limited to N <= 6");
    TrotterConfig direct = config;
    direct.variant = Variant::Direct;
    const auto ops = fuse(build_trotter_step(layout, direct), 3);
    StateVector s = initial_state(layout);
    std::vector<double> chi{magnetization_correlator(s, layout, i)};
    for (int step = 0; step < config.n_steps; ++step) {
        for (const FusedOp &op : ops)
            s.apply_unchecked(op.matrix, op.targets);
        chi.push_back(magnetization_correlator(s, layout, i));
    }
    return chi;
}

} // namespace lgtsim
