#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace infunc;
using infunc::testing::brute_force_class_count;

namespace {

NetworkGraph mod4_star() {
    return NetworkGraph(GraphKind::DirectedTree, 3, {{2, 1}, {3, 1}}, {4, 4, 4});
}

NetworkGraph and_chain() { return NetworkGraph(GraphKind::DirectedTree, 3, {{3, 2}, {2, 1}}); }

NetworkGraph example1() { return NetworkGraph(GraphKind::DirectedTree, 3, {{2, 1}, {3, 1}}, {1, 2, 2}); }

JointDistribution example1_support() {
    std::vector<Rational> probs(4, Rational(0));
    probs[0] = make_rational(1, 2);
    probs[3] = make_rational(1, 2);
    return JointDistribution({1, 2, 2}, probs);
}

TreeEncoderSet example1_encoders(bool v2_separates) {
    TreeEncoderSet enc;
    enc.encoders.resize(3);
    enc.encoders[1] = NodeEncoder{v2_separates ? 2u : 1u, [v2_separates](Letter x, std::span<const std::size_t>) {
                                      return v2_separates ? std::size_t{x} : std::size_t{0};
                                  }};
    enc.encoders[2] = NodeEncoder{1, [](Letter, std::span<const std::size_t>) { return std::size_t{0}; }};
    return enc;
}

}  // namespace

TEST(EdgeAlphabet, ModFourStar) {
    const auto f = builtin::parity({4, 4, 4}, 4);
    const auto g = mod4_star();
    const auto a = edge_alphabet(f, g, 2);
    EXPECT_EQ(a.size(), 4u);
    EXPECT_EQ(a.single_shot_bits(), 2u);
}

TEST(EdgeAlphabet, AndChain) {
    const auto f = builtin::logical_and({2, 2, 2});
    const auto g = and_chain();
    EXPECT_EQ(edge_alphabet(f, g, 3).size(), 2u);
    EXPECT_EQ(edge_alphabet(f, g, 2).size(), 2u);
}

TEST(EdgeAlphabet, ConstantNeedsNothing) {
    const auto f = builtin::constant({3, 3, 3});
    const NetworkGraph g(GraphKind::DirectedTree, 3, {{3, 2}, {2, 1}}, {3, 3, 3});
    const TreeCode code(f, g);
    for (double r : code.worst_case_rates()) EXPECT_EQ(r, 0.0);
}

TEST(EdgeAlphabet, MatchesBruteForceClassCount) {
    const auto f = builtin::sum_threshold({2, 3, 2, 2}, 3);
    const NetworkGraph g(GraphKind::DirectedTree, 4, {{2, 1}, {3, 2}, {4, 2}}, {2, 3, 2, 2});
    for (NodeId v = 2; v <= 4; ++v)
        EXPECT_EQ(edge_alphabet(f, g, v).size(), brute_force_class_count(f, descendant_set(g, v)));
}

TEST(RunTreeComputation, ModFourStarExhaustive) {
    const auto f = builtin::parity({4, 4, 4}, 4);
    const auto g = mod4_star();
    const TreeCode code(f, g);
    std::vector<std::vector<Letter>> seqs(3);
    Tuple t(3, 0);
    do {
        for (std::size_t i = 0; i < 3; ++i) seqs[i].push_back(t[i]);
    } while (f.space().next(t));
    const auto run = run_tree_computation(code, Block(seqs));
    EXPECT_TRUE(run.zero_error);
    EXPECT_EQ(run.transcript.bits_on_edge(0), 128u);
}

TEST(RunTreeComputation, ConstantSendsNothing) {
    const auto f = builtin::constant({2, 2, 2}, 1);
    const auto g = and_chain();
    const TreeCode code(f, g);
    std::mt19937_64 rng(5);
    const auto run = run_tree_computation(code, random_block({2, 2, 2}, 16, rng));
    EXPECT_TRUE(run.zero_error);
    EXPECT_EQ(run.transcript.total_bits(), 0u);
}

TEST(RunTreeComputation, RandomFiveNodeTrees) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<std::size_t> sizes(5, 2);
        const auto g = infunc::testing::random_directed_tree(5, sizes, rng);
        const auto f = infunc::testing::random_function(sizes, 2, rng);
        const TreeCode code(f, g);
        const auto run = run_tree_computation(code, random_block(sizes, 64, rng));
        EXPECT_TRUE(run.zero_error);
        for (NodeId v = 2; v <= 5; ++v) {
            const auto e = g.out_edges(v).front();
            EXPECT_LE(run.transcript.bits_on_edge(e), ceil_block_log2(code.alphabet(v).size(), 64));
        }
    }
}

TEST(CutFeasibility, OptimalEncodersHaveNoViolations) {
    const auto f = builtin::parity({4, 4, 4}, 4);
    const auto g = mod4_star();
    const TreeCode code(f, g);
    EXPECT_TRUE(tree_cut_feasibility_check(f, g, code.encoders(), JointDistribution::uniform({4, 4, 4})).empty());
}

TEST(CutFeasibility, ConstantLeavesViolateTheJointCut) {
    const auto v = tree_cut_feasibility_check(builtin::identity({1, 2, 2}), example1(), example1_encoders(false),
                                              example1_support());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].cut.source_side, (std::vector<NodeId>{2, 3}));
}

TEST(CutFeasibility, OneSeparatingLeafSuffices) {
    EXPECT_TRUE(tree_cut_feasibility_check(builtin::identity({1, 2, 2}), example1(), example1_encoders(true),
                                           example1_support())
                    .empty());
}

TEST(CutFeasibility, DegenerateEncoderFailsUnderFullSupport) {
    const auto v = tree_cut_feasibility_check(builtin::identity({1, 2, 2}), example1(), example1_encoders(true),
                                              JointDistribution::uniform({1, 2, 2}));
    EXPECT_FALSE(v.empty());
}

TEST(TreeAverageRates, ModFourStarUniform) {
    const auto f = builtin::parity({4, 4, 4}, 4);
    const auto g = mod4_star();
    const TreeCode code(f, g);
    for (const auto& e : tree_average_rates(code, JointDistribution::uniform({4, 4, 4}))) {
        EXPECT_NEAR(e.entropy, 2.0, 1e-12);
        EXPECT_EQ(e.expected_length, Rational(2));
    }
}

TEST(TreeAverageRates, ConstantIsZero) {
    const auto f = builtin::constant({2, 2, 2});
    const auto g = and_chain();
    const TreeCode code(f, g);
    for (const auto& e : tree_average_rates(code, JointDistribution::uniform({2, 2, 2})))
        EXPECT_EQ(e.entropy, 0.0);
}

TEST(TreeAverageRates, AndChain) {
    const auto f = builtin::logical_and({2, 2, 2});
    const auto g = and_chain();
    const TreeCode code(f, g);
    const auto edges = tree_average_rates(code, JointDistribution::uniform({2, 2, 2}));
    ASSERT_EQ(edges.size(), 2u);
    for (const auto& e : edges) {
        auto q = e.distribution;
        std::sort(q.begin(), q.end());
        if (e.node == 3) {
            EXPECT_EQ(q, (std::vector<Rational>{make_rational(1, 2), make_rational(1, 2)}));
            EXPECT_NEAR(e.entropy, 1.0, 1e-12);
        } else {
            EXPECT_EQ(e.node, 2u);
            EXPECT_EQ(q, (std::vector<Rational>{make_rational(1, 4), make_rational(3, 4)}));
            EXPECT_NEAR(e.entropy, 0.8112781244591328, 1e-12);
        }
    }
}

TEST(TreeAverageRates, RejectsZeroProbabilities) {
    const auto f = builtin::identity({1, 2, 2});
    const auto g = example1();
    const TreeCode code(f, g);
    EXPECT_THROW(tree_average_rates(code, example1_support()), Error);
}

TEST(TreeCode, RejectsNonTree) {
    const NetworkGraph dag(GraphKind::Dag, 3, {{2, 1}, {3, 1}, {3, 2}});
    EXPECT_THROW(TreeCode(builtin::logical_and({2, 2, 2}), dag), Error);
}
