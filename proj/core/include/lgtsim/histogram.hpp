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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lgtsim {

/// Outcome counts keyed by basis-state index (qubit 0 is the LSB).
struct ShotHistogram {
    int n_qubits = 0;
    std::vector<char> basis; // 'Z' or 'X' per qubit
    std::map<std::uint64_t, std::uint64_t> counts;

    ShotHistogram() = default;
    ShotHistogram(int n, char default_basis = 'Z');

    std::uint64_t total() const;
    bool empty() const { return total() == 0; }
    void add(std::uint64_t outcome, std::uint64_t count = 1);

    /// Probability estimates, keyed like counts.
    std::map<std::uint64_t, double> frequencies() const;

    /// Most significant qubit first (qubit n-1 leftmost).
    std::string bitstring(std::uint64_t outcome) const;
    std::uint64_t parse_bitstring(const std::string &bits) const;

    std::string to_json() const;
    static ShotHistogram from_json(const std::string &text);
};

/// Total-variation distance between two normalized histograms.
double total_variation(const ShotHistogram &a, const ShotHistogram &b);
/// Total-variation distance against an exact distribution over 2^n outcomes.
double total_variation(const ShotHistogram &a, const std::vector<double> &probs);

} // namespace lgtsim
