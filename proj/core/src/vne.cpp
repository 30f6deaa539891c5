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
#include "lgtsim/vne.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgtsim/error.hpp"
#include "lgtsim/qstate.hpp"

namespace lgtsim {

std::string ensemble_name(InputEnsemble e) {
    switch (e) {
    case InputEnsemble::Basis:
        return "basis";
    case InputEnsemble::Product:
        return "product";
    case InputEnsemble::Haar:
        return "haar";
    }
    return "?";
}

InputEnsemble ensemble_from_name(const std::string &name) {
    if (name == "basis")
        return InputEnsemble::Basis;
    if (name == "product")
        return InputEnsemble::Product;
    if (name == "haar")
        return InputEnsemble::Haar;
    throw ValidationError("unknown input ensemble '" + name + "'");
}

std::vector<std::vector<int>> canonical_subsets(int n) {
    std::vector<std::vector<int>> out;
    for (int size = 1; size < n; ++size) {
        std::vector<int> pick(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            pick[static_cast<std::size_t>(i)] = i;
        while (true) {
            out.push_back(pick);
            int i = size - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i)
                --i;
            if (i < 0)
                break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

StateVector draw_input(int n, InputEnsemble e, std::mt19937_64 &rng) {
    switch (e) {
    case InputEnsemble::Basis:
        return random_basis_state(n, rng);
    case InputEnsemble::Haar:
        return haar_random_state(n, rng);
    case InputEnsemble::Product: {
        std::vector<cplx> amp{1.0};
        for (int q = 0; q < n; ++q) {
            const StateVector one = haar_random_state(1, rng);
            std::vector<cplx> next(amp.size() * 2);
            for (std::size_t i = 0; i < amp.size(); ++i) {
                next[i] = amp[i] * one[0];
                next[i + amp.size()] = amp[i] * one[1];
            }
            amp = std::move(next);
        }
        return StateVector::from_amplitudes(std::move(amp));
    }
    }
    throw ValidationError("draw_input: unknown ensemble");
}

namespace {

void accumulate(EntropyProfile &p, const StateVector &s) {
    for (std::size_t k = 0; k < p.subsets.size(); ++k)
        p.mean[k] += von_neumann_entropy(reduced_density(s, p.subsets[k]));
}

EntropyProfile empty_profile(int n) {
    EntropyProfile p;
    p.subsets = canonical_subsets(n);
    p.mean.assign(p.subsets.size(), 0.0);
    return p;
}

void finish(EntropyProfile &p, int n_samples) {
    p.n_samples = n_samples;
    for (double &m : p.mean)
        m /= n_samples;
}

int qubits_of(const CMatrix &u) {
    int n = 0;
    while ((Eigen::Index{1} << n) < u.rows())
        ++n;
    if ((Eigen::Index{1} << n) != u.rows() || u.rows() != u.cols() || n < 2)
        throw ValidationError("entropy profile: target must be a 2^q x 2^q matrix, q >= 2");
    return n;
}

} // namespace

EntropyProfile entropy_profile_target(const CMatrix &u, int n_samples, std::mt19937_64 &rng,
                                      InputEnsemble e) {
    if (n_samples < 1)
        throw ValidationError("entropy profile: n_samples must be >= 1");
    const int n = qubits_of(u);
    EntropyProfile p = empty_profile(n);
    for (int s = 0; s < n_samples; ++s) {
        const StateVector in = draw_input(n, e, rng);
        const CVector v = u * Eigen::Map<const CVector>(in.amplitudes().data(),
                                                        static_cast<Eigen::Index>(in.dim()));
        accumulate(p, StateVector::from_amplitudes(std::vector<cplx>(v.data(), v.data() + v.size())));
    }
    finish(p, n_samples);
    return p;
}

EntropyProfile entropy_profile_ansatz(const Circuit &ansatz, int n_samples,
                                      std::mt19937_64 &rng, InputEnsemble e) {
    if (n_samples < 1)
        throw ValidationError("entropy profile: n_samples must be >= 1");
    const int n = ansatz.n_qubits();
    if (n < 2)
        throw ValidationError("entropy profile: ansatz needs at least 2 qubits");
    EntropyProfile p = empty_profile(n);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    ParamVector x(ansatz.n_params());
    for (int s = 0; s < n_samples; ++s) {
        StateVector st = draw_input(n, e, rng);
        for (Eigen::Index k = 0; k < x.size(); ++k)
            x(k) = angle(rng);
        for (const Gate &g : ansatz.gates()) {
            const CMatrix m = g.slot >= 0 ? gate_matrix(g, x(g.slot)) : gate_matrix(g);
            st.apply_unchecked(m, g.targets);
        }
        accumulate(p, st);
    }
    finish(p, n_samples);
    return p;
}

bool expressibility_pass(const EntropyProfile &ansatz, const EntropyProfile &target,
                         double slack) {
    if (ansatz.subsets != target.subsets)
        throw ValidationError("expressibility_pass: profiles use different subsets");
    for (std::size_t k = 0; k < ansatz.mean.size(); ++k)
        if (ansatz.mean[k] < target.mean[k] - slack)
            return false;
    return true;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x5eedU};
    return std::mt19937_64(seq);
}

} // namespace

DepthScan depth_scan(const TemplateFamily &family, const CMatrix &target, int l_max,
                     const VneOptions &opts, std::uint64_t seed) {
    if (l_max < 1)
        throw ValidationError("depth scan: l_max must be >= 1");
    DepthScan scan;
    auto trng = stream(seed, 0);
    scan.target = entropy_profile_target(target, opts.n_samples, trng, opts.ensemble);
    for (int l = 1; l <= l_max; ++l) {
        auto rng = stream(seed, l);
        DepthScanRow row;
        row.depth = l;
        row.profile = entropy_profile_ansatz(family(l), opts.n_samples, rng, opts.ensemble);
        row.pass = expressibility_pass(row.profile, scan.target, opts.slack);
        if (row.pass && scan.min_depth < 0)
            scan.min_depth = l;
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

DepthScan min_depth_search(const TemplateFamily &family, const CMatrix &target, int l_max,
                           const VneOptions &opts, std::uint64_t seed) {
    DepthScan scan;
    if (l_max < 1)
        throw ValidationError("min_depth_search: l_max must be >= 1");
    auto trng = stream(seed, 0);
    scan.target = entropy_profile_target(target, opts.n_samples, trng, opts.ensemble);
    for (int l = 1; l <= l_max; ++l) {
        auto rng = stream(seed, l);
        DepthScanRow row;
        row.depth = l;
        row.profile = entropy_profile_ansatz(family(l), opts.n_samples, rng, opts.ensemble);
        row.pass = expressibility_pass(row.profile, scan.target, opts.slack);
        scan.rows.push_back(row);
        if (row.pass) {
            scan.min_depth = l;
            return scan;
        }
    }
    throw ExhaustionError("min_depth_search: no depth up to " + std::to_string(l_max) +
                          " passed the entropy test");
}

namespace {

double identity_distance(const Gate &g, double angle) {
    const CMatrix m = param_arity(g.kind) > 0 ? gate_matrix(g, angle) : gate_matrix(g);
    return 1.0 - std::abs(m.trace()) / static_cast<double>(m.rows());
}

double gate_angle(const Gate &g, const ParamVector &params) {
    if (g.slot >= 0)
        return params(g.slot);
    return param_arity(g.kind) > 0 ? g.params[static_cast<std::size_t>(g.angle_index())] : 0.0;
}

ParamVector drop_slot(const ParamVector &x, int slot) {
    if (slot < 0)
        return x;
    ParamVector out(x.size() - 1);
    for (Eigen::Index k = 0, j = 0; k < x.size(); ++k)
        if (k != slot)
            out(j++) = x(k);
    return out;
}

double fidelity_of(const Circuit &c, const ParamVector &x, const CMatrix &target) {
    return std::pow(phase_insensitive_overlap(target, circuit_unitary(c, x)), 2);
}

} // namespace

PruneResult prune_identity_gates(const Circuit &circuit, const ParamVector &params,
                                 const CMatrix &target, double tol, double floor) {
    PruneResult r;
    r.circuit = circuit;
    r.params = params;
    r.fidelity = fidelity_of(circuit, params, target);
    // Walk the original positions while tracking the shrinking circuit.
    std::size_t offset = 0;
    for (std::size_t pos = 0; pos < circuit.size(); ++pos) {
        const std::size_t cur = pos - offset;
        const Gate &g = r.circuit.gates()[cur];
        const double angle = gate_angle(g, r.params);
        if (identity_distance(g, angle) > tol)
            continue;
        RemovedGate entry{pos, g.kind, g.targets, angle, false};
        Circuit cand = r.circuit.without(cur);
        ParamVector cx = drop_slot(r.params, g.slot);
        const double f = fidelity_of(cand, cx, target);
        if (f >= floor) {
            entry.accepted = true;
            r.circuit = std::move(cand);
            r.params = std::move(cx);
            r.fidelity = f;
            ++offset;
        }
        r.ledger.push_back(std::move(entry));
    }
    return r;
}

CompressResult greedy_compress(const Circuit &circuit, const ParamVector &params,
                               const CMatrix &target, const CompressOptions &opts) {
    CompressResult res;
    res.circuit = circuit;
    res.params = params;
    res.cost = 1.0 - fidelity_of(circuit, params, target);
    std::uint64_t attempt = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < res.circuit.size(); ++k) {
            const Gate &g = res.circuit.gates()[k];
            if (opts.two_qubit_only && g.targets.size() != 2)
                continue;
            if (g.slot < 0 && g.targets.size() != 2)
                continue;
            order.push_back(k);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const Gate &ga = res.circuit.gates()[a];
            const Gate &gb = res.circuit.gates()[b];
            return identity_distance(ga, gate_angle(ga, res.params)) <
                   identity_distance(gb, gate_angle(gb, res.params));
        });
        for (std::size_t k : order) {
            const Gate &g = res.circuit.gates()[k];
            Circuit cand = res.circuit.without(k);
            const ParamVector warm = drop_slot(res.params, g.slot);
            const UnitaryCost f(ObjectiveHandle(target, cand));
            TrialRecord best = run_optimizer(opts.optimizer, f, warm, opts.iterations);
            for (int r = 0; r < opts.restarts && best.final_cost() > opts.threshold; ++r) {
                const auto x0 =
                    random_initial_point(f.dim(), trial_seed(opts.seed, static_cast<int>(attempt++)));
                TrialRecord t = run_optimizer(opts.optimizer, f, x0, opts.iterations);
                if (t.final_cost() < best.final_cost())
                    best = std::move(t);
            }
            if (best.final_cost() <= opts.threshold) {
                res.circuit = std::move(cand);
                res.params = best.x_final;
                res.cost = best.final_cost();
                res.removed_positions.push_back(k);
                changed = true;
                break;
            }
        }
    }
    return res;
}

} // namespace lgtsim
