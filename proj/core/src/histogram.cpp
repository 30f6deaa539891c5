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
#include "lgtsim/histogram.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "lgtsim/error.hpp"

namespace lgtsim {

ShotHistogram::ShotHistogram(int n, char default_basis)
    : n_qubits(n), basis(static_cast<std::size_t>(n), default_basis) {}

std::uint64_t ShotHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto &[k, c] : counts)
        t += c;
    return t;
}

void ShotHistogram::add(std::uint64_t outcome, std::uint64_t count) {
    if (n_qubits < 64 && (outcome >> n_qubits) != 0)
        throw IndexError("histogram outcome out of range");
    counts[outcome] += count;
}

std::map<std::uint64_t, double> ShotHistogram::frequencies() const {
    std::map<std::uint64_t, double> f;
    const double t = static_cast<double>(total());
    if (t == 0.0)
        return f;
    for (const auto &[k, c] : counts)
        f[k] = static_cast<double>(c) / t;
    return f;
}

std::string ShotHistogram::bitstring(std::uint64_t outcome) const {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if ((outcome >> q) & 1U)
            s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
    return s;
}

std::uint64_t ShotHistogram::parse_bitstring(const std::string &bits) const {
    if (static_cast<int>(bits.size()) != n_qubits)
        throw ValidationError("bitstring length does not match n_qubits");
    std::uint64_t v = 0;
    for (int q = 0; q < n_qubits; ++q) {
        const char c = bits[static_cast<std::size_t>(n_qubits - 1 - q)];
        if (c == '1')
            v |= std::uint64_t{1} << q;
        else if (c != '0')
            throw ValidationError("bitstring contains a character other than 0/1");
    }
    return v;
}

std::string ShotHistogram::to_json() const {
    nlohmann::ordered_json j;
    j["n_qubits"] = n_qubits;
    nlohmann::json b = nlohmann::json::array();
    for (char c : basis)
        b.push_back(std::string(1, c));
    j["basis"] = b;
    nlohmann::ordered_json cj = nlohmann::ordered_json::object();
    for (const auto &[k, c] : counts)
        cj[bitstring(k)] = c;
    j["counts"] = cj;
    return j.dump();
}

ShotHistogram ShotHistogram::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("histogram JSON: ") + e.what());
    }
    ShotHistogram h(j.at("n_qubits").get<int>());
    const auto &b = j.at("basis");
    if (static_cast<int>(b.size()) != h.n_qubits)
        throw ValidationError("histogram JSON: basis length mismatch");
    for (std::size_t q = 0; q < b.size(); ++q) {
        const std::string s = b[q].get<std::string>();
        if (s != "Z" && s != "X")
            throw ValidationError("histogram JSON: basis entries must be Z or X");
        h.basis[q] = s[0];
    }
    for (const auto &[k, v] : j.at("counts").items())
        h.add(h.parse_bitstring(k), v.get<std::uint64_t>());
    return h;
}

double total_variation(const ShotHistogram &a, const ShotHistogram &b) {
    const auto fa = a.frequencies();
    const auto fb = b.frequencies();
    std::set<std::uint64_t> keys;
    for (const auto &[k, v] : fa)
        keys.insert(k);
    for (const auto &[k, v] : fb)
        keys.insert(k);
    double s = 0.0;
    for (std::uint64_t k : keys) {
        const auto ia = fa.find(k);
        const auto ib = fb.find(k);
        s += std::abs((ia == fa.end() ? 0.0 : ia->second) -
                      (ib == fb.end() ? 0.0 : ib->second));
    }
    return 0.5 * s;
}

double total_variation(const ShotHistogram &a, const std::vector<double> &probs) {
    const auto fa = a.frequencies();
    double s = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const auto it = fa.find(k);
        s += std::abs((it == fa.end() ? 0.0 : it->second) - probs[k]);
    }
    return 0.5 * s;
}

} // namespace lgtsim
