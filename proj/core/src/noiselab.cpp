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
#include "lgtsim/noiselab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "lgtsim/error.hpp"

namespace lgtsim {

void NoiseConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw ValidationError("noise: gamma must lie in [0, 1]");
    for (double p : qubit_flip)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("noise: flip probabilities must lie in [0, 1]");
    for (double g : qubit_gamma)
        if (!(g >= 0.0 && g <= 1.0))
            throw ValidationError("noise: per-qubit gamma must lie in [0, 1]");
}

double NoiseConfig::pair_gamma(int a, int b) const {
    auto g = [&](int q) {
        return static_cast<std::size_t>(q) < qubit_gamma.size()
                   ? qubit_gamma[static_cast<std::size_t>(q)]
                   : 0.0;
    };
    return 1.0 - (1.0 - gamma) * (1.0 - g(a)) * (1.0 - g(b));
}

bool NoiseConfig::noiseless() const {
    auto zero = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double p) { return p == 0.0; });
    };
    return gamma == 0.0 && zero(qubit_flip) && zero(qubit_gamma);
}

void MitigationPlan::validate() const {
    if (variants < 1)
        throw ValidationError("mitigation: variants must be >= 1");
    if (sharpen && variants < 3)
        throw ValidationError("mitigation: sharpening needs at least 3 variants");
    if (!(sharpen_factor > 0.0))
        throw ValidationError("mitigation: sharpen factor must be > 0");
}

std::vector<NoisePoint> noise_points(const Circuit &bound) {
    std::vector<NoisePoint> pts;
    for (std::size_t i = 0; i < bound.size(); ++i) {
        const Gate &g = bound.gates()[i];
        if (g.kind == GateKind::Unitary) {
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t a = 0; a < g.targets.size(); ++a)
                for (std::size_t b = a + 1; b < g.targets.size(); ++b)
                    pairs.emplace_back(g.targets[a], g.targets[b]);
            if (pairs.empty())
                continue;
            for (int k = 0; k < g.declared_cost; ++k) {
                const auto &p = pairs[static_cast<std::size_t>(k) % pairs.size()];
                pts.push_back({i, p.first, p.second});
            }
        } else if (g.targets.size() == 2) {
            pts.push_back({i, g.targets[0], g.targets[1]});
        }
    }
    return pts;
}

namespace {

struct Event {
    int step;
    std::size_t point;
    int pa; // Pauli index on the first qubit of the pair (0..3)
    int pb;
};

std::vector<Event> draw_events(const NoiseConfig &noise, const std::vector<NoisePoint> &pts,
                               int n_steps, std::mt19937_64 &rng) {
    std::vector<Event> ev;
    const std::size_t per_step = pts.size();
    const std::size_t total = per_step * static_cast<std::size_t>(n_steps);
    if (total == 0)
        return ev;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> pauli16(0, 15);
    if (noise.qubit_flip.empty() && noise.qubit_gamma.empty()) {
        if (noise.gamma <= 0.0)
            return ev;
        // Geometric skipping between depolarizing events.
        const double log_keep = std::log1p(-noise.gamma);
        std::size_t pos = 0;
        while (true) {
            if (noise.gamma < 1.0) {
                const double skip = std::floor(std::log1p(-u(rng)) / log_keep);
                if (skip >= static_cast<double>(total - pos))
                    break;
                pos += static_cast<std::size_t>(skip);
            }
            if (pos >= total)
                break;
            const int code = pauli16(rng);
            if (code != 0)
                ev.push_back({static_cast<int>(pos / per_step), pos % per_step, code & 3, code >> 2});
            ++pos;
        }
        return ev;
    }
    for (std::size_t pos = 0; pos < total; ++pos) {
        const NoisePoint &p = pts[pos % per_step];
        int pa = 0, pb = 0;
        const double g = noise.pair_gamma(p.a, p.b);
        if (g > 0.0 && u(rng) < g) {
            const int code = pauli16(rng);
            pa = code & 3;
            pb = code >> 2;
        }
        auto flip = [&](int q) {
            return static_cast<std::size_t>(q) < noise.qubit_flip.size() &&
                   u(rng) < noise.qubit_flip[static_cast<std::size_t>(q)];
        };
        // X multiplies into the drawn Pauli: X * P maps I<->X and Y<->Z.
        if (flip(p.a))
            pa ^= 1;
        if (flip(p.b))
            pb ^= 1;
        if (pa != 0 || pb != 0)
            ev.push_back({static_cast<int>(pos / per_step), pos % per_step, pa, pb});
    }
    return ev;
}

GateKind pauli_kind(int p) {
    switch (p) {
    case 1:
        return GateKind::X;
    case 2:
        return GateKind::Y;
    default:
        return GateKind::Z;
    }
}

Circuit with_errors(const Circuit &step, const std::vector<NoisePoint> &pts,
                    const std::vector<const Event *> &events) {
    Circuit out(step.n_qubits());
    std::size_t e = 0;
    for (std::size_t i = 0; i < step.size(); ++i) {
        out.add(step.gates()[i]);
        while (e < events.size() && pts[events[e]->point].gate_index == i) {
            const NoisePoint &p = pts[events[e]->point];
            if (events[e]->pa)
                out.add(pauli_kind(events[e]->pa), {p.a});
            if (events[e]->pb)
                out.add(pauli_kind(events[e]->pb), {p.b});
            ++e;
        }
    }
    return out;
}

const CMatrix &hadamard() {
    static const CMatrix h = gate_matrix(Gate::make(GateKind::H, {0}));
    return h;
}

std::vector<double> measured_cdf(const StateVector &s, const std::vector<int> &x_qubits) {
    std::vector<double> cdf;
    if (x_qubits.empty()) {
        cdf = s.probabilities();
    } else {
        StateVector c = s;
        for (int q : x_qubits) {
            const int t[1] = {q};
            c.apply_unchecked(hadamard(), t);
        }
        cdf = c.probabilities();
    }
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    return cdf;
}

std::uint64_t lookup(const std::vector<double> &cdf, double u) {
    const double x = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    if (it == cdf.end())
        --it;
    return static_cast<std::uint64_t>(it - cdf.begin());
}

ShotHistogram empty_histogram(int n, const std::vector<int> &x_qubits) {
    ShotHistogram h(n);
    for (int q : x_qubits) {
        if (q < 0 || q >= n)
            throw IndexError("measurement basis qubit out of range");
        h.basis[static_cast<std::size_t>(q)] = 'X';
    }
    return h;
}

std::mt19937_64 derived(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x6e015eU};
    return std::mt19937_64(seq);
}

void apply_ops(StateVector &s, const std::vector<FusedOp> &ops) {
    for (const FusedOp &op : ops)
        s.apply_unchecked(op.matrix, op.targets);
}

} // namespace

std::vector<ShotHistogram> run_noisy_steps(const Circuit &step, int n_steps,
                                           const StateVector &initial,
                                           const NoiseConfig &noise, std::uint64_t shots,
                                           const std::vector<int> &x_qubits,
                                           std::mt19937_64 &rng, const StepRunOptions &opts) {
    noise.validate();
    if (shots == 0)
        throw ValidationError("run_noisy: shots must be >= 1");
    if (n_steps < 0)
        throw ValidationError("run_noisy: n_steps must be >= 0");
    if (step.n_qubits() != initial.n_qubits())
        throw ValidationError("run_noisy: circuit and state sizes differ");
    const int n = step.n_qubits();
    const std::uint64_t n_traj =
        opts.trajectories > 0 ? std::min<std::uint64_t>(shots, static_cast<std::uint64_t>(opts.trajectories))
                              : shots;
    const std::uint64_t sample_seed = rng();
    const std::uint64_t noise_seed = rng();

    const std::vector<FusedOp> clean_ops = fuse(step, 3);
    const std::vector<NoisePoint> pts = noise_points(step);

    // Noiseless states at every step boundary.
    std::vector<StateVector> clean{initial};
    std::vector<std::vector<double>> clean_cdf{measured_cdf(initial, x_qubits)};
    for (int k = 0; k < n_steps; ++k) {
        StateVector s = clean.back();
        apply_ops(s, clean_ops);
        clean_cdf.push_back(measured_cdf(s, x_qubits));
        clean.push_back(std::move(s));
    }

    // One uniform per shot and step, shared by every noise realization.
    std::vector<std::vector<double>> uni(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) {
        auto r = derived(sample_seed, k);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        uni[static_cast<std::size_t>(k)].resize(shots);
        for (auto &v : uni[static_cast<std::size_t>(k)])
            v = u(r);
    }

    std::vector<ShotHistogram> hist(static_cast<std::size_t>(n_steps) + 1,
                                    empty_histogram(n, x_qubits));
    std::mt19937_64 noise_rng(noise_seed);
    for (std::uint64_t tau = 0; tau < n_traj; ++tau) {
        const std::vector<Event> ev = draw_events(noise, pts, n_steps, noise_rng);
        const int first = ev.empty() ? n_steps : ev.front().step;
        for (int c = 0; c <= std::min(first, n_steps); ++c)
            for (std::uint64_t s = tau; s < shots; s += n_traj)
                hist[static_cast<std::size_t>(c)].add(
                    lookup(clean_cdf[static_cast<std::size_t>(c)], uni[static_cast<std::size_t>(c)][s]));
        if (ev.empty())
            continue;
        StateVector state = clean[static_cast<std::size_t>(first)];
        std::size_t e = 0;
        for (int k = first; k < n_steps; ++k) {
            std::vector<const Event *> here;
            while (e < ev.size() && ev[e].step == k)
                here.push_back(&ev[e++]);
            if (here.empty())
                apply_ops(state, clean_ops);
            else
                apply_ops(state, fuse(with_errors(step, pts, here), 3));
            const std::vector<double> cdf = measured_cdf(state, x_qubits);
            for (std::uint64_t s = tau; s < shots; s += n_traj)
                hist[static_cast<std::size_t>(k + 1)].add(
                    lookup(cdf, uni[static_cast<std::size_t>(k + 1)][s]));
        }
    }
    return hist;
}

ShotHistogram run_noisy(const Circuit &bound, const StateVector &initial,
                        const NoiseConfig &noise, std::uint64_t shots,
                        const std::vector<int> &x_qubits, std::mt19937_64 &rng) {
    noise.validate();
    if (noise.noiseless()) {
        StateVector s = initial;
        apply_ops(s, fuse(bound, 3));
        for (int q : x_qubits) {
            const int t[1] = {q};
            s.apply_unchecked(hadamard(), t);
        }
        ShotHistogram h = sample_shots(s, shots, rng);
        for (int q : x_qubits)
            h.basis[static_cast<std::size_t>(q)] = 'X';
        return h;
    }
    return run_noisy_steps(bound, 1, initial, noise, shots, x_qubits, rng).back();
}

FilterResult postselect_spin(const ShotHistogram &h, const LatticeLayout &layout,
                             int n_up_expected, int n_down_expected) {
    if (h.n_qubits != layout.n_qubits())
        throw ValidationError("postselect_spin: histogram width does not match layout");
    for (int i = 0; i < layout.n_sites(); ++i)
        if (h.basis[static_cast<std::size_t>(layout.up_site(i))] != 'Z' ||
            h.basis[static_cast<std::size_t>(layout.down_site(i))] != 'Z')
            throw ValidationError("postselect_spin: site qubits must be measured in Z");
    const int n = layout.n_sites();
    FilterResult r{ShotHistogram(h.n_qubits), 0.0};
    r.histogram.basis = h.basis;
    std::uint64_t kept = 0, total = 0;
    for (const auto &[o, c] : h.counts) {
        total += c;
        const int up = n - std::popcount(o & layout.up_mask());
        const int down = n - std::popcount(o & layout.down_mask());
        if (up == n_up_expected && down == n_down_expected) {
            r.histogram.add(o, c);
            kept += c;
        }
    }
    if (kept == 0)
        throw NoDataError("postselect_spin: every shot was discarded");
    r.discarded_fraction = static_cast<double>(total - kept) / static_cast<double>(total);
    return r;
}

std::vector<int> shot_charges(std::uint64_t o, const LatticeLayout &layout) {
    std::vector<int> q;
    for (int j = 0; j < layout.n_sites(); ++j) {
        const int occ = (((o >> layout.up_site(j)) & 1U) ? 0 : 1) +
                        (((o >> layout.down_site(j)) & 1U) ? 0 : 1);
        const int x1 = ((o >> layout.bond(j - 1)) & 1U) ? -1 : 1;
        const int x2 = ((o >> layout.bond(j)) & 1U) ? -1 : 1;
        q.push_back((occ % 2 ? -1 : 1) * x1 * x2);
    }
    return q;
}

std::vector<int> expected_charge_pattern(const LatticeLayout &layout) {
    std::vector<int> p;
    for (double v : charge_expectations(initial_state(layout), layout))
        p.push_back(v >= 0.0 ? 1 : -1);
    return p;
}

FilterResult postselect_charge(const ShotHistogram &h, const LatticeLayout &layout,
                               const std::vector<int> &expected) {
    if (h.n_qubits != layout.n_qubits())
        throw ValidationError("postselect_charge: histogram width does not match layout");
    for (int i = 0; i < layout.n_sites(); ++i) {
        if (h.basis[static_cast<std::size_t>(layout.bond(i))] != 'X')
            throw ValidationError("postselect_charge: bond qubits must be measured in X");
        if (h.basis[static_cast<std::size_t>(layout.up_site(i))] != 'Z' ||
            h.basis[static_cast<std::size_t>(layout.down_site(i))] != 'Z')
            throw ValidationError("postselect_charge: site qubits must be measured in Z");
    }
    if (static_cast<int>(expected.size()) != layout.n_sites())
        throw ValidationError("postselect_charge: expected pattern has wrong length");
    FilterResult r{ShotHistogram(h.n_qubits), 0.0};
    r.histogram.basis = h.basis;
    std::uint64_t kept = 0, total = 0;
    for (const auto &[o, c] : h.counts) {
        total += c;
        if (shot_charges(o, layout) == expected) {
            r.histogram.add(o, c);
            kept += c;
        }
    }
    if (kept == 0)
        throw NoDataError("postselect_charge: every shot was discarded");
    r.discarded_fraction = static_cast<double>(total - kept) / static_cast<double>(total);
    return r;
}

namespace {

// Pauli strings P (index digits base 4, digit k on local qubit k) with
// P G P = G up to a phase.
std::vector<int> commuting_paulis(const CMatrix &g, int k) {
    std::vector<int> out;
    const int count = 1 << (2 * k);
    for (int code = 0; code < count; ++code) {
        std::vector<int> digits;
        for (int q = 0; q < k; ++q)
            digits.push_back((code >> (2 * q)) & 3);
        const CMatrix p = pauli_string(digits);
        if (phase_insensitive_overlap(g, p * g * p) > 1.0 - 1e-9)
            out.push_back(code);
    }
    return out;
}

void add_pauli_layer(Circuit &c, const std::vector<int> &targets, int code) {
    for (std::size_t q = 0; q < targets.size(); ++q) {
        const int p = (code >> (2 * q)) & 3;
        if (p)
            c.add(pauli_kind(p), {targets[q]});
    }
}

} // namespace

std::vector<CircuitVariant> debias_variants(const Circuit &bound, int m, std::mt19937_64 &rng,
                                            const DebiasOptions &opts) {
    if (m < 1)
        throw ValidationError("debias_variants: M must be >= 1");
    const int n = bound.n_qubits();
    std::vector<std::vector<int>> choices(bound.size());
    if (opts.twirl)
        for (std::size_t i = 0; i < bound.size(); ++i)
            if (bound.gates()[i].targets.size() >= 2)
                choices[i] = commuting_paulis(gate_matrix(bound.gates()[i]),
                                              static_cast<int>(bound.gates()[i].targets.size()));
    std::vector<CircuitVariant> out;
    for (int v = 0; v < m; ++v) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        if (opts.relabel)
            std::shuffle(perm.begin(), perm.end(), rng);
        Circuit c(n);
        for (std::size_t i = 0; i < bound.size(); ++i) {
            const Gate &g = bound.gates()[i];
            if (choices[i].empty()) {
                c.add(g);
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(0, choices[i].size() - 1);
            const int code = choices[i][pick(rng)];
            add_pauli_layer(c, g.targets, code);
            c.add(g);
            add_pauli_layer(c, g.targets, code);
        }
        out.push_back({c.remapped(perm, n), perm});
    }
    return out;
}

StateVector permute_state(const StateVector &state, const std::vector<int> &perm) {
    const int n = state.n_qubits();
    if (static_cast<int>(perm.size()) != n)
        throw ValidationError("permute_state: permutation size mismatch");
    std::vector<cplx> amp(state.dim());
    for (std::uint64_t j = 0; j < state.dim(); ++j) {
        std::uint64_t p = 0;
        for (int q = 0; q < n; ++q)
            if ((j >> q) & 1U)
                p |= std::uint64_t{1} << perm[static_cast<std::size_t>(q)];
        amp[p] = state[j];
    }
    return StateVector::from_amplitudes(std::move(amp));
}

ShotHistogram unpermute_histogram(const ShotHistogram &h, const std::vector<int> &perm) {
    if (static_cast<int>(perm.size()) != h.n_qubits)
        throw ValidationError("unpermute_histogram: permutation size mismatch");
    ShotHistogram out(h.n_qubits);
    for (int q = 0; q < h.n_qubits; ++q)
        out.basis[static_cast<std::size_t>(q)] = h.basis[static_cast<std::size_t>(perm[static_cast<std::size_t>(q)])];
    for (const auto &[o, c] : h.counts) {
        std::uint64_t l = 0;
        for (int q = 0; q < h.n_qubits; ++q)
            if ((o >> perm[static_cast<std::size_t>(q)]) & 1U)
                l |= std::uint64_t{1} << q;
        out.add(l, c);
    }
    return out;
}

ShotHistogram aggregate(const std::vector<ShotHistogram> &hs, AggregateMode mode,
                        double factor) {
    if (hs.empty())
        throw ValidationError("aggregate: no histograms");
    for (const auto &h : hs)
        if (h.n_qubits != hs.front().n_qubits || h.basis != hs.front().basis)
            throw ValidationError("aggregate: histograms differ in width or basis");
    ShotHistogram out(hs.front().n_qubits);
    out.basis = hs.front().basis;
    if (mode == AggregateMode::Average) {
        for (const auto &h : hs)
            for (const auto &[o, c] : h.counts)
                out.add(o, c);
        return out;
    }
    if (hs.size() < 3)
        throw ValidationError("aggregate: sharpening needs at least 3 histograms");
    const double others = std::ldexp(1.0, hs.front().n_qubits) - 1.0;
    std::map<std::uint64_t, int> score;
    std::vector<std::set<std::uint64_t>> survivors(hs.size());
    for (std::size_t v = 0; v < hs.size(); ++v) {
        const auto f = hs[v].frequencies();
        double top = 0.0;
        for (const auto &[o, p] : f)
            top = std::max(top, p);
        const double floor = (1.0 - top) / others;
        for (const auto &[o, p] : f) {
            if (p > factor * floor) {
                survivors[v].insert(o);
                ++score[o];
            }
        }
    }
    int best = 0;
    for (const auto &[o, s] : score)
        best = std::max(best, s);
    for (std::size_t v = 0; v < hs.size(); ++v)
        for (std::uint64_t o : survivors[v])
            if (score[o] == best)
                out.add(o, hs[v].counts.at(o));
    return out;
}

} // namespace lgtsim
