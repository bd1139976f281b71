#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace infunc;

TEST(OptimalPartition, AndSeparatesBothLetters) {
    const auto p = optimal_partition(builtin::logical_and({2, 2}), 0);
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.classes(), (std::vector<std::vector<Letter>>{{0}, {1}}));
}

TEST(OptimalPartition, ConstantHasOneClass) {
    const auto f = builtin::constant({3, 4}, 1);
    for (std::size_t side : {0u, 1u}) {
        const auto p = optimal_partition(f, side);
        EXPECT_EQ(p.size(), 1u);
        EXPECT_EQ(ceil_log2(BigInt(p.size())), 0u);
    }
}

TEST(OptimalPartition, SumModFourIsSingletons) {
    EXPECT_EQ(optimal_partition(builtin::parity({4, 4}, 4), 0).size(), 4u);
}

TEST(OptimalPartition, MaxOnThreeLetters) {
    EXPECT_EQ(optimal_partition(builtin::maximum({3, 3}), 0).size(), 3u);
}

TEST(OptimalPartition, ThresholdMergesSaturatedLetters) {
    // x in {2,3} always reaches theta = 2.
    const auto p = optimal_partition(builtin::sum_threshold({4, 4}, 2), 0);
    EXPECT_EQ(p.classes(), (std::vector<std::vector<Letter>>{{0}, {1}, {2, 3}}));
}

TEST(SupportedPartition, FullSupportAnd) {
    const auto rel = optimal_partition_supported(builtin::logical_and({2, 2}), 0, JointDistribution::uniform({2, 2}));
    EXPECT_TRUE(rel.transitive);
    ASSERT_TRUE(rel.partition);
    EXPECT_EQ(rel.partition->size(), 2u);
}

TEST(SupportedPartition, DiagonalSupportNeedsNoBits) {
    const JointDistribution p({2, 2}, {make_rational(1, 2), 0, 0, make_rational(1, 2)});
    const auto rel = optimal_partition_supported(builtin::identity({2, 2}), 0, p);
    EXPECT_TRUE(rel.related[0][1]);
    EXPECT_TRUE(rel.transitive);
    ASSERT_TRUE(rel.partition);
    EXPECT_EQ(rel.partition->size(), 1u);
}

TEST(SupportedPartition, PartialSupportCanBreakTransitivity) {
    // x=0 and x=2 differ at y=1; x=1 is only supported at y=0 where all agree.
    const auto f = FunctionTable({3, 2}, 2, {0, 0, 0, 0, 0, 1});
    const Rational q = make_rational(1, 5);
    const JointDistribution p({3, 2}, {q, q, q, 0, q, q});
    const auto rel = optimal_partition_supported(f, 0, p);
    EXPECT_TRUE(rel.related[0][1]);
    EXPECT_TRUE(rel.related[1][2]);
    EXPECT_FALSE(rel.related[0][2]);
    EXPECT_FALSE(rel.transitive);
    EXPECT_FALSE(rel.partition);
}

TEST(Huffman, Dyadic) {
    const std::vector<Rational> q{make_rational(1, 2), make_rational(1, 4), make_rational(1, 4)};
    const auto code = huffman_code(q);
    EXPECT_EQ(code.lengths, (std::vector<std::size_t>{1, 2, 2}));
    EXPECT_EQ(code.expected_length(q), make_rational(3, 2));
    EXPECT_NEAR(entropy_bits(q), 1.5, 1e-12);
    EXPECT_TRUE(code.prefix_free());
}

TEST(Huffman, SingleSymbol) {
    const std::vector<Rational> q{Rational(1)};
    const auto code = huffman_code(q);
    EXPECT_LE(code.expected_length(q), 1);
}

TEST(Huffman, NonDyadic) {
    const std::vector<Rational> q{make_rational(2, 5), make_rational(3, 10), make_rational(3, 10)};
    const auto code = huffman_code(q);
    EXPECT_EQ(code.expected_length(q), make_rational(8, 5));
    const double h = entropy_bits(q);
    EXPECT_NEAR(h, 1.5709505944546687, 1e-9);
    EXPECT_LE(h, 1.6);
    EXPECT_LE(1.6, h + 1);
}

TEST(Huffman, RejectsBadInput) {
    EXPECT_THROW(huffman_code({}), Error);
    EXPECT_THROW(huffman_code({make_rational(1, 2)}), Error);
}

TEST(BlockPartition, Examples) {
    const auto a = block_partition(builtin::logical_and({2, 2}), 0, 2);
    EXPECT_EQ(a.block_classes, BigInt(4));
    EXPECT_DOUBLE_EQ(a.rate, 1.0);

    // Three classes on side 0.
    const auto f = builtin::sum_threshold({4, 4}, 2);
    const auto b = block_partition(f, 0, 5);
    EXPECT_EQ(b.single_classes, 3u);
    EXPECT_EQ(b.block_classes, BigInt(243));
    EXPECT_EQ(b.block_bits, 8u);
    EXPECT_DOUBLE_EQ(b.rate, 1.6);

    const auto c = block_partition(builtin::constant({3, 3}), 1, 9);
    EXPECT_EQ(c.block_classes, BigInt(1));
    EXPECT_DOUBLE_EQ(c.rate, 0.0);
}

TEST(InducedDistribution, SumsClassMass) {
    const auto f = builtin::sum_threshold({4, 2}, 2);
    const auto part = optimal_partition(f, 0);
    const auto q = induced_distribution(part, 0, JointDistribution::uniform({4, 2}));
    EXPECT_EQ(q, (std::vector<Rational>{make_rational(1, 4), make_rational(1, 4), make_rational(1, 2)}));
}
