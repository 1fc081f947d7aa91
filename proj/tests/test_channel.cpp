// Copyright 2026 The flagbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "flagbayes/channel.hpp"
#include "flagbayes/gadget.hpp"
#include "flagbayes/io.hpp"
#include "support.hpp"

using namespace flagbayes;
using flagbayes::support::test_rng;

namespace {

PauliOperator P(const char* s) { return PauliOperator::from_string(s); }

CompatibleSet set_of(std::vector<const char*> ps, std::vector<int> outcomes) {
    std::vector<PauliOperator> layers;
    for (auto s : ps) layers.push_back(P(s));
    return compatible_set(layers, outcomes);
}

std::vector<std::size_t> idx(std::initializer_list<std::size_t> v) { return v; }

}  // namespace

TEST(CompatibleSet, Examples) {
    EXPECT_EQ(set_of({"Z"}, {+1}).indices(), idx({0, 3}));
    EXPECT_EQ(set_of({"X", "Z"}, {+1, -1}).indices(), idx({1}));
    // maximal CNOT stack, every outcome -1: only YY anticommutes with all four
    auto layers = maximal_rights(2);
    std::vector<int> all_minus(4, -1);
    EXPECT_EQ(compatible_set(layers, all_minus).indices(), idx({P("YY").index().value}));
}

TEST(CompatibleSet, SizeHalvesPerIndependentLayer) {
    auto rng = test_rng(10);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + t % 3;
        std::size_t l = 1 + t % (2 * n);
        std::vector<PauliOperator> layers;
        while (layers.size() < l) {
            auto r = support::random_pauli(n, rng, false);
            if (r.is_identity()) continue;
            layers.push_back(r);
            if (gf2_rank(layers) != layers.size()) layers.pop_back();
        }
        std::vector<int> outcomes(l);
        for (auto& b : outcomes) b = (rng() & 1u) ? 1 : -1;
        auto g = compatible_set(layers, outcomes);
        EXPECT_EQ(g.size(), std::size_t{1} << (2 * n - l));
        for (auto i : g.indices()) {
            auto p = PauliOperator::from_index(n, PauliIndex{i});
            for (std::size_t q = 0; q < l; ++q) EXPECT_EQ(commutes(p, layers[q]), outcomes[q]);
        }
    }
}

TEST(CompatibleSet, ContradictionAndValidation) {
    EXPECT_THROW(set_of({"X", "X"}, {+1, -1}), ContradictionError);
    EXPECT_EQ(set_of({"X", "X"}, {-1, -1}).indices(), idx({2, 3}));
    EXPECT_THROW(set_of({"II"}, {+1}), std::invalid_argument);
    EXPECT_THROW(set_of({"X"}, {0}), std::invalid_argument);
    EXPECT_THROW(set_of({"X", "Z"}, {+1}), std::invalid_argument);
}

TEST(Channel, OutcomeProbability) {
    auto uniform = PauliChannel::uniform(2);
    for (const auto& row : outcome_table(maximal_rights(2))) {
        EXPECT_DOUBLE_EQ(outcome_probability(uniform, row.set), 1.0 / 16.0);
    }
    EXPECT_DOUBLE_EQ(outcome_probability(uniform, CompatibleSet::full(2)), 1.0);
    PauliChannel ch(1, {0.9, 0.1, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(outcome_probability(ch, set_of({"Z"}, {+1})), 0.9);
}

TEST(Channel, PostSelection) {
    PauliChannel ch(1, {0.6, 0.2, 0.1, 0.1});
    auto [post, norm] = post_selected_channel(ch, set_of({"Z"}, {+1}));
    EXPECT_NEAR(norm, 0.7, 1e-15);
    EXPECT_NEAR(post.rates()[0], 6.0 / 7.0, 1e-15);
    EXPECT_EQ(post.rates()[1], 0.0);
    EXPECT_EQ(post.rates()[2], 0.0);
    EXPECT_NEAR(post.rates()[3], 1.0 / 7.0, 1e-15);

    auto [same, one] = post_selected_channel(ch, CompatibleSet::full(1));
    EXPECT_EQ(same.rates(), ch.rates());
    EXPECT_EQ(one, 1.0);

    auto [det, w] = post_selected_channel(ch, CompatibleSet::singleton(1, PauliIndex{1}));
    EXPECT_EQ(det.rates(), (std::vector<double>{0, 1, 0, 0}));
    EXPECT_DOUBLE_EQ(w, 0.2);

    PauliChannel clean(1, {1.0, 0.0, 0.0, 0.0});
    EXPECT_THROW(post_selected_channel(clean, set_of({"Z"}, {-1})), ImpossibleOutcomeError);
}

TEST(Channel, Validation) {
    EXPECT_THROW(PauliChannel(1, {0.5, 0.5}), DimensionError);
    EXPECT_THROW(PauliChannel(1, {1.1, -0.1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(PauliChannel(1, {0, 0, 0, 0}), std::invalid_argument);
    EXPECT_THROW(PauliChannel(5, std::vector<double>(1024, 1.0 / 1024)), DimensionError);
    PauliChannel off(1, {1, 1, 1, 1});
    EXPECT_EQ(off.rates(), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
    EXPECT_DOUBLE_EQ(off.adjustment(), 3.0);
    std::vector<double> r{0.1, 0.2, 0.3, 0.4};
    EXPECT_EQ(PauliChannel(1, r).rates(), r);  // within tolerance: untouched
}

TEST(Channel, SamplerMatchesRates) {
    auto rng = test_rng(11);
    auto rates = support::random_rates(16, rng);
    rates[5] = 0.0;
    PauliChannel ch(2, rates);
    const int n = 200000;
    std::vector<int> counts(16, 0);
    for (int t = 0; t < n; ++t) ++counts[sample_error(ch, rng).value];
    EXPECT_EQ(counts[5], 0);
    for (std::size_t i = 0; i < 16; ++i) {
        double p = ch.rates()[i];
        double sigma = std::sqrt(n * p * (1 - p));
        EXPECT_LE(std::abs(counts[i] - n * p), 5 * sigma + 1e-9) << i;
    }
}

TEST(Gadget, StackValidation) {
    auto cx = CliffordGate::cnot();
    EXPECT_THROW(GadgetLayer::for_gate(cx, P("II")), std::invalid_argument);
    EXPECT_THROW(GadgetLayer::for_gate(cx, P("X")), DimensionError);
    EXPECT_THROW(GadgetLayer::for_gate(cx, P("iXI")), std::invalid_argument);
    std::vector<PauliOperator> five(5, P("XI"));
    EXPECT_THROW(GadgetStack::from_rights(cx, five), std::invalid_argument);
    EXPECT_THROW(GadgetStack(cx, {GadgetLayer{P("XI"), P("XI")}}), std::invalid_argument);
    auto stack = maximal_stack(cx);
    EXPECT_EQ(stack.size(), 4u);
    EXPECT_EQ(stack.rights(), (std::vector<PauliOperator>{P("XI"), P("ZI"), P("IX"), P("IZ")}));
}

TEST(Gadget, MaximalTableSinglesOutEveryPauli) {
    for (std::size_t n = 1; n <= 3; ++n) {
        auto table = outcome_table(maximal_rights(n));
        EXPECT_EQ(table.size(), pauli_count(n));
        std::set<std::size_t> seen;
        for (const auto& row : table) {
            ASSERT_EQ(row.set.size(), 1u);
            seen.insert(row.set.indices().front());
            EXPECT_EQ(pattern_number(row.outcomes), &row - table.data());
        }
        EXPECT_EQ(seen.size(), pauli_count(n));
    }
}

TEST(Gadget, DependentLayersLeaveImpossiblePatternsEmpty) {
    auto table = outcome_table(std::vector<PauliOperator>{P("XI"), P("XI")});
    EXPECT_EQ(table[0].set.size(), 8u);
    EXPECT_EQ(table[1].set.size(), 0u);
    EXPECT_EQ(table[2].set.size(), 0u);
    EXPECT_EQ(table[3].set.size(), 8u);
}

TEST(Gadget, RandomSingleLayerIsUniform) {
    auto rng = test_rng(12);
    auto cx = CliffordGate::cnot();
    const int n = 150000;
    std::vector<int> counts(16, 0);
    for (int t = 0; t < n; ++t) {
        auto layer = random_single_layer(cx, rng);
        EXPECT_EQ(layer.l, derive_left(cx, layer.r));
        ++counts[layer.r.index().value];
    }
    EXPECT_EQ(counts[0], 0);
    double p = 1.0 / 15.0, sigma = std::sqrt(n * p * (1 - p));
    for (std::size_t i = 1; i < 16; ++i) EXPECT_LE(std::abs(counts[i] - n * p), 5 * sigma);
}

TEST(Tables, SingleQubitMaximalMatchesFixture) {
    EXPECT_EQ(io::outcome_table_csv(maximal_rights(1)), support::read_fixture("table1.csv"));
}

TEST(Tables, CnotMaximalMatchesFixture) {
    EXPECT_EQ(io::outcome_table_csv(maximal_rights(2)), support::read_fixture("table2.csv"));
}

TEST(Tables, CnotSingleLayerMatchesFixture) {
    EXPECT_EQ(io::single_layer_table_csv(CliffordGate::cnot()), support::read_fixture("table3.csv"));
}
