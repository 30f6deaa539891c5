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

#include "lgtsim/ansatz.hpp"
#include "lgtsim/error.hpp"
#include "lgtsim/lgtmodel.hpp"
#include "lgtsim/vne.hpp"

using namespace lgtsim;

namespace {

double h2(double p) {
    if (p <= 0.0 || p >= 1.0)
        return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

} // namespace

TEST(Subsets, CanonicalOrder) {
    const auto s = canonical_subsets(3);
    const std::vector<std::vector<int>> want{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
    EXPECT_EQ(s, want);
    EXPECT_EQ(canonical_subsets(4).size(), 14u);
}

TEST(Ensembles, NamesRoundTrip) {
    for (InputEnsemble e : {InputEnsemble::Basis, InputEnsemble::Product, InputEnsemble::Haar})
        EXPECT_EQ(ensemble_from_name(ensemble_name(e)), e);
    EXPECT_THROW(ensemble_from_name("gaussian"), ValidationError);
}

TEST(EntropyProfile, IdentityOnProductInputsIsZero) {
    std::mt19937_64 rng(1);
    for (InputEnsemble e : {InputEnsemble::Basis, InputEnsemble::Product}) {
        const EntropyProfile p = entropy_profile_target(CMatrix::Identity(8, 8), 100, rng, e);
        for (double m : p.mean)
            EXPECT_NEAR(m, 0.0, 1e-9);
    }
}

TEST(EntropyProfile, HaarInputsMatchPageFormula) {
    // Mean entanglement of one qubit against two: sum_{k=5}^{8} 1/k - 1/8 nats.
    const double page = (1.0 / 5 + 1.0 / 6 + 1.0 / 7 + 1.0 / 8 - 1.0 / 8) / std::log(2.0);
    std::mt19937_64 rng(2);
    const EntropyProfile p =
        entropy_profile_target(CMatrix::Identity(8, 8), 6000, rng, InputEnsemble::Haar);
    for (double m : p.mean)
        EXPECT_NEAR(m, page, 0.02);
}

TEST(EntropyProfile, HoppingOnBasisInputsIsAnalytic) {
    // Half the basis inputs have a != c and rotate by 2 J dt within {|10>, |01>}.
    const double jdt = 0.4;
    const double s_site = 0.5 * h2(std::pow(std::cos(2 * jdt), 2));
    std::mt19937_64 rng(3);
    const EntropyProfile p = entropy_profile_target(target_unitary_C(1.0, jdt), 8000, rng);
    const std::vector<double> want{s_site, 0.0, s_site, s_site, 0.0, s_site};
    for (std::size_t k = 0; k < want.size(); ++k)
        EXPECT_NEAR(p.mean[k], want[k], 0.02) << k;
    EXPECT_EQ(p.n_samples, 8000);
}

TEST(Expressibility, SlackComparison) {
    EntropyProfile t, a;
    t.mean = {0.5, 0.2};
    a.mean = {0.49, 0.3};
    EXPECT_TRUE(expressibility_pass(a, t, 0.02));
    a.mean = {0.47, 0.3};
    EXPECT_FALSE(expressibility_pass(a, t, 0.02));
}

TEST(DepthScan, HoppingFamilyNeedsThreeLayers) {
    const DepthScan scan =
        min_depth_search(hopping_family, target_unitary_C(1.0, 0.4), 5, VneOptions{}, 1);
    EXPECT_EQ(scan.min_depth, 3);
    ASSERT_EQ(scan.rows.size(), 3u);
    EXPECT_FALSE(scan.rows[0].pass);
    EXPECT_FALSE(scan.rows[1].pass);
    EXPECT_TRUE(scan.rows[2].pass);
}

TEST(DepthScan, ExhaustionWhenNothingPasses) {
    auto single = [](int) {
        Circuit c(3);
        c.add_param(GateKind::RX, {0});
        return c;
    };
    EXPECT_THROW(min_depth_search(single, target_unitary_C(1.0, 0.4), 2, VneOptions{}, 1),
                 ExhaustionError);
    const DepthScan scan = depth_scan(single, target_unitary_C(1.0, 0.4), 2, VneOptions{}, 1);
    EXPECT_EQ(scan.min_depth, -1);
    EXPECT_EQ(scan.rows.size(), 2u);
}

TEST(Prune, RemovesNearIdentityGatesOnly) {
    Circuit c(2);
    c.add_param(GateKind::RX, {0});
    c.add_param(GateKind::XX, {0, 1});
    c.add_param(GateKind::RY, {1});
    ParamVector x(3);
    x << 1e-3, 0.8, 2 * M_PI;
    const PruneResult r = prune_identity_gates(c, x, target_unitary_B(1.0, 0.8));
    ASSERT_EQ(r.circuit.size(), 1u);
    EXPECT_EQ(r.circuit.gates()[0].kind, GateKind::XX);
    ASSERT_EQ(r.ledger.size(), 2u);
    EXPECT_EQ(r.ledger[0].position, 0u);
    EXPECT_EQ(r.ledger[1].position, 2u);
    EXPECT_TRUE(r.ledger[0].accepted && r.ledger[1].accepted);
    EXPECT_GE(r.fidelity, 1.0 - 1e-6);
}

TEST(Prune, RejectsRemovalThatCostsFidelity) {
    Circuit c(1);
    c.add_param(GateKind::RX, {0});
    ParamVector x(1);
    x << 0.02;
    const CMatrix target = gate_matrix(Gate::make(GateKind::RX, {0}, {0.02}));
    const PruneResult r = prune_identity_gates(c, x, target, 1e-4, 1.0 - 1e-6);
    EXPECT_EQ(r.circuit.size(), 1u);
    ASSERT_EQ(r.ledger.size(), 1u);
    EXPECT_FALSE(r.ledger[0].accepted);
}

TEST(Compress, DropsRedundantEntangler) {
    Circuit c(2);
    c.add_param(GateKind::XX, {0, 1});
    c.add_param(GateKind::RY, {0});
    c.add_param(GateKind::XX, {0, 1});
    ParamVector x(3);
    x << 0.5, 0.0, 0.3;
    CompressOptions opts;
    opts.optimizer = OptimizerSpec::from_name("ipg");
    const CompressResult r = greedy_compress(c, x, target_unitary_B(1.0, 0.8), opts);
    EXPECT_EQ(two_qubit_count(r.circuit), 1);
    EXPECT_LE(r.cost, 1e-6);
    EXPECT_EQ(r.removed_positions.size(), 1u);
}
