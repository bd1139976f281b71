#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace infunc;
using infunc::testing::all_labeled_trees;

namespace {

NetworkGraph path(std::size_t n, std::vector<std::size_t> sizes = {}) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) edges.push_back({v, v + 1});
    return NetworkGraph(GraphKind::UndirectedTree, n, edges, std::move(sizes));
}

NetworkGraph star(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId v = 2; v <= n; ++v) edges.push_back({1, v});
    return NetworkGraph(GraphKind::UndirectedTree, n, edges);
}

std::vector<Block> single_instances(const NetworkGraph& g) {
    std::vector<Block> out;
    ProductSpace space(g.alphabet_sizes());
    Tuple x(g.node_count(), 0);
    do {
        std::vector<std::vector<Letter>> seqs;
        for (auto v : x) seqs.push_back({v});
        out.emplace_back(seqs);
    } while (space.next(x));
    return out;
}

}  // namespace

TEST(EdgeComplexities, PathOfFiveMiddleEdge) {
    const auto g = path(5);
    const auto profiles = edge_complexities(g, 2);
    // Edge (2,3): sides {1,2} and {3,4,5}.
    EXPECT_EQ(profiles[1].complexity.argument, 5u);
    EXPECT_EQ(std::min(profiles[1].l_side, profiles[1].l_rest), 2u);
}

TEST(EdgeComplexities, StarLeafEdgeIsOrLike) {
    const auto g = star(4);
    for (const auto& p : edge_complexities(g, 1)) EXPECT_EQ(p.complexity.argument, 3u);
}

TEST(EdgeComplexities, NonBinaryPair) {
    const NetworkGraph g(GraphKind::UndirectedTree, 2, {{1, 2}}, {4, 5});
    EXPECT_EQ(edge_complexities(g, 5)[0].complexity.argument, 7u);
}

TEST(EdgeComplexities, RejectsBadThetaAndGraphs) {
    EXPECT_THROW(edge_complexities(path(3), 5), Error);
    const NetworkGraph dag(GraphKind::Dag, 2, {{2, 1}});
    EXPECT_THROW(edge_complexities(dag, 1), Error);
}

TEST(TreeProtocol, PathOfThreeExhaustive) {
    const auto g = path(3);
    for (NodeId root = 1; root <= 3; ++root)
        for (const auto& b : single_instances(g)) EXPECT_TRUE(run_tree_protocol(g, 2, root, b).zero_error);
}

TEST(TreeProtocol, StarAndAtFourHundred) {
    const auto g = star(5);
    std::mt19937_64 rng(21);
    const auto profiles = edge_complexities(g, 5);
    for (const auto& p : profiles) EXPECT_EQ(p.complexity.argument, 3u);
    for (int s = 0; s < 5; ++s) {
        const auto run = run_tree_protocol(g, 5, weighted_centroid(g), random_block(g.alphabet_sizes(), 400, rng));
        ASSERT_TRUE(run.zero_error);
        for (std::size_t e = 0; e < g.edges().size(); ++e) ASSERT_LE(run.transcript.bits_on_edge(e), 634u);
    }
}

TEST(TreeProtocol, ZeroThresholdIsFree) {
    const auto g = path(4);
    std::mt19937_64 rng(22);
    const auto run = run_tree_protocol(g, 0, 2, random_block(g.alphabet_sizes(), 30, rng));
    EXPECT_TRUE(run.zero_error);
    EXPECT_EQ(run.transcript.total_bits(), 0u);
}

TEST(TreeProtocol, EveryNodeDecodes) {
    const auto g = path(4, {2, 3, 2, 3});
    std::mt19937_64 rng(23);
    const auto run = run_tree_protocol(g, 4, 2, random_block(g.alphabet_sizes(), 50, rng));
    EXPECT_TRUE(run.zero_error);
    for (const auto& d : run.decoded) EXPECT_EQ(d, run.expected);
}

TEST(TreeProtocol, RootInvariance) {
    for (const auto& edges : all_labeled_trees(4)) {
        const NetworkGraph g(GraphKind::UndirectedTree, 4, edges, {2, 3, 2, 2});
        for (std::int64_t t = 0; t <= 6; ++t) {
            const auto profiles = edge_complexities(g, t);
            for (NodeId root = 1; root <= 4; ++root) {
                for (const auto& b : single_instances(g)) {
                    const auto run = run_tree_protocol(g, t, root, b);
                    ASSERT_TRUE(run.zero_error);
                    for (const auto& p : profiles) ASSERT_EQ(run.edge_budget[p.edge], p.complexity.block_bits(1));
                }
            }
        }
    }
}

TEST(TreeIntervalProtocol, PathOfFourLeafEdge) {
    const auto g = path(4);
    const auto profiles = interval_edge_complexities(g, 1, 2);
    EXPECT_EQ(profiles[0].complexity.argument, 4u);
    EXPECT_EQ(profiles[0].complexity.block_bits(1), 2u);
}

TEST(TreeIntervalProtocol, RejectsUpperEndAboveHalfCapacity) {
    const auto g = path(4);
    std::mt19937_64 rng(24);
    const auto blk = random_block(g.alphabet_sizes(), 20, rng);
    EXPECT_THROW(run_tree_interval_protocol(g, 0, 3, weighted_centroid(g), blk), Error);
    EXPECT_TRUE(run_tree_interval_protocol(g, 0, 2, weighted_centroid(g), blk).zero_error);
}

TEST(TreeIntervalProtocol, FourNodeTreesExhaustive) {
    for (const auto& edges : all_labeled_trees(4)) {
        const NetworkGraph g(GraphKind::UndirectedTree, 4, edges);
        const NodeId root = weighted_centroid(g);
        for (std::int64_t b = 0; 2 * b <= 4; ++b)
            for (std::int64_t a = 0; a <= b; ++a)
                for (const auto& blk : single_instances(g))
                    ASSERT_TRUE(run_tree_interval_protocol(g, a, b, root, blk).zero_error);
    }
}

TEST(TreeIntervalProtocol, RejectsUnbalancedRoot) {
    const auto g = path(5);
    std::mt19937_64 rng(25);
    EXPECT_THROW(run_tree_interval_protocol(g, 1, 2, 1, random_block(g.alphabet_sizes(), 5, rng)), Error);
}

TEST(WeightedCentroid, BalancesCapacity) {
    const auto g = path(5);
    EXPECT_EQ(weighted_centroid(g), 3u);
    const auto sched = schedule(g, 3);
    for (NodeId v = 1; v <= 5; ++v)
        if (v != 3) EXPECT_LE(2 * sched.subtree_capacity[v], 5u);
}

TEST(EdgeOptimality, AllSmallBinaryTrees) {
    for (std::size_t n = 2; n <= 5; ++n)
        for (const auto& edges : all_labeled_trees(n)) {
            const NetworkGraph g(GraphKind::UndirectedTree, n, edges);
            for (std::int64_t t = 0; t <= static_cast<std::int64_t>(n) + 1; ++t)
                for (const auto& r : verify_edge_optimality(g, t)) ASSERT_TRUE(r.match);
        }
}

TEST(EdgeOptimality, TwoNodeTreeIsTheTwoNodeTheorem) {
    for (std::size_t m1 = 1; m1 <= 3; ++m1)
        for (std::size_t m2 = 1; m2 <= 3; ++m2) {
            const NetworkGraph g(GraphKind::UndirectedTree, 2, {{1, 2}}, {m1 + 1, m2 + 1});
            for (std::int64_t t = 0; t <= static_cast<std::int64_t>(m1 + m2) + 1; ++t) {
                const auto r = verify_edge_optimality(g, t);
                ASSERT_EQ(r.size(), 1u);
                EXPECT_EQ(r[0].complexity, threshold_complexity(ThresholdSpec(m1, m2, t)));
                EXPECT_TRUE(r[0].match);
            }
        }
}

TEST(EdgeOptimality, NonBinaryPath) {
    const auto g = path(3, {3, 4, 3});
    for (std::int64_t t = 0; t <= 8; ++t)
        for (const auto& r : verify_edge_optimality(g, t)) EXPECT_TRUE(r.match);
}
