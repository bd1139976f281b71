#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace infunc;

namespace {

std::vector<Letter> random_seq(std::size_t n, std::size_t q, std::mt19937_64& rng) {
    std::vector<Letter> x(n);
    for (auto& v : x) v = static_cast<Letter>(rng() % q);
    return x;
}

}  // namespace

TEST(AndProtocol, SingleInstanceWorstCaseIsTwoBits) {
    std::size_t worst = 0;
    for (Letter a = 0; a < 2; ++a)
        for (Letter b = 0; b < 2; ++b) {
            const auto run = and_protocol(1, std::vector<Letter>{a}, std::vector<Letter>{b});
            EXPECT_TRUE(run.zero_error);
            worst = std::max(worst, run.total_bits());
        }
    EXPECT_EQ(worst, 2u);
}

TEST(AndProtocol, AllZeroBlock) {
    const std::vector<Letter> zeros(100, 0);
    std::mt19937_64 rng(9);
    const auto run = and_protocol(100, zeros, random_seq(100, 2, rng));
    EXPECT_EQ(run.speaker_bits, 159u);
    EXPECT_EQ(run.reply_bits, 0u);
    EXPECT_TRUE(run.zero_error);
}

TEST(AndProtocol, RandomBlocksStayWithinBound) {
    std::mt19937_64 rng(10);
    for (int s = 0; s < 1000; ++s) {
        const auto run = and_protocol(100, random_seq(100, 2, rng), random_seq(100, 2, rng));
        ASSERT_TRUE(run.zero_error);
        ASSERT_LE(run.total_bits(), 159u);
    }
}

TEST(ThresholdComplexity, Examples) {
    EXPECT_EQ(threshold_complexity(ThresholdSpec(1, 1, 2)).argument, 3u);
    for (std::uint64_t m = 1; m <= 4; ++m) EXPECT_EQ(threshold_complexity(ThresholdSpec(m, m + 1, 1)).argument, 3u);
    EXPECT_EQ(threshold_complexity(ThresholdSpec(2, 5, 4)).argument, 6u);
    EXPECT_EQ(threshold_complexity(ThresholdSpec(3, 3, 0)).argument, 1u);
    EXPECT_EQ(threshold_complexity(ThresholdSpec(3, 3, 7)).argument, 1u);
}

TEST(ThresholdSpec, Validation) {
    EXPECT_THROW(ThresholdSpec(1, 1, -1), Error);
    EXPECT_THROW(ThresholdSpec(1, 1, 4), Error);
    EXPECT_THROW(IntervalSpec(2, 2, 3, 1), Error);
}

TEST(ThresholdCodebook, CaseSingleAmbiguousTier) {
    // m1 = m2 = 3, theta = 2: classes {0}, {1} ambiguous, {2,3} always one.
    const auto book = threshold_codebook(ThresholdSpec(3, 3, 2), 1, 0);
    EXPECT_EQ(book.symbol_count(), 3u);
    EXPECT_EQ(book.worst_case_total(), 3u);
    const std::vector<std::size_t> lengths{2, 2, 3};
    for (std::uint32_t c = 0; c < 3; ++c) EXPECT_EQ(book.length_of(std::vector<std::uint32_t>{c}), lengths[c]);
    EXPECT_EQ(book.kraft_sum(), make_rational(5, 8));
}

TEST(ThresholdCodebook, CaseUpperTail) {
    // m1 = m2 = 2, theta = 4: {0,1} never reach, {2} ambiguous.
    const auto scheme = threshold_scheme(ThresholdSpec(2, 2, 4), 0);
    EXPECT_EQ(scheme.reduced_size(), 2u);
    EXPECT_EQ(scheme.ambiguous(), 1u);
    EXPECT_EQ(scheme.always_zero(), 1u);
    EXPECT_EQ(scheme.rate().argument, 3u);
    EXPECT_EQ(scheme.codebook(1).worst_case_total(), 2u);
}

TEST(ThresholdCodebook, RateApproachesComplexity) {
    const ThresholdSpec s(2, 5, 4);
    const double c = threshold_complexity(s).value();
    for (std::size_t n : {1u, 7u, 50u, 300u}) {
        const auto book = threshold_codebook(s, n, 0);
        const double per = static_cast<double>(book.worst_case_total()) / static_cast<double>(n);
        EXPECT_GE(per, c - 1e-12);
        EXPECT_LE(per, c + 1.0 / static_cast<double>(n) + 1e-12);
    }
}

TEST(ThresholdProtocol, AndAtThousand) {
    const ThresholdSpec s(1, 1, 2);
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
        const auto run = run_threshold_protocol(s, 1000, random_seq(1000, 2, rng), random_seq(1000, 2, rng), k % 2);
        ASSERT_TRUE(run.zero_error);
        ASSERT_LE(run.total_bits(), 1585u);
    }
}

TEST(ThresholdProtocol, CaseTwoFiveFour) {
    const ThresholdSpec s(2, 5, 4);
    std::mt19937_64 rng(13);
    for (int k = 0; k < 20; ++k) {
        const auto run = run_threshold_protocol(s, 500, random_seq(500, 3, rng), random_seq(500, 6, rng), k % 2);
        ASSERT_TRUE(run.zero_error);
        ASSERT_LE(run.total_bits(), 1293u);
    }
}

TEST(ThresholdProtocol, UnambiguousBlockHasNoReply) {
    // theta = 2 with m1 = 3: letters 2 and 3 always reach the threshold.
    const ThresholdSpec s(3, 3, 2);
    const std::vector<Letter> x1(40, 3);
    std::mt19937_64 rng(14);
    const auto run = run_threshold_protocol(s, 40, x1, random_seq(40, 4, rng), 0);
    EXPECT_EQ(run.reply_bits, 0u);
    EXPECT_TRUE(run.zero_error);
}

TEST(ThresholdClip, ClippedLetterGivesSameValue) {
    for (std::uint64_t ms = 0; ms <= 5; ++ms)
        for (std::uint64_t ml = 0; ml <= 5; ++ml)
            for (std::int64_t t = 0; t <= static_cast<std::int64_t>(ms + ml) + 1; ++t) {
                const auto clip = threshold_clip(ms, ml, t);
                for (std::int64_t x = 0; x <= static_cast<std::int64_t>(ms); ++x)
                    for (std::int64_t y = 0; y <= static_cast<std::int64_t>(ml); ++y)
                        ASSERT_EQ(x + y >= t, static_cast<std::int64_t>(clip.apply(x)) + y >= t);
            }
}

TEST(FoolingSet, ThresholdExamples) {
    const auto z = fooling_bound_threshold(ThresholdSpec(1, 1, 2));
    EXPECT_EQ(z.size(), 3u);
    EXPECT_TRUE(z.verified);
    EXPECT_TRUE(verify_block_fooling_set(builtin::sum_threshold({2, 2}, 2), z.columns, 4));
    EXPECT_EQ(fooling_bound_threshold(ThresholdSpec(3, 3, 2)).size(), 5u);
    EXPECT_EQ(fooling_bound_threshold(ThresholdSpec(2, 5, 4)).size(), 6u);
}

TEST(FoolingSet, RejectsNonFoolingColumns) {
    const auto f = builtin::logical_and({2, 2});
    // (0,0) and (0,1) both give 0 and the crossed entries also give 0.
    EXPECT_FALSE(verify_fooling_set(f, {{0, 0}, {0, 1}}));
    EXPECT_TRUE(verify_fooling_set(f, {{0, 1}, {1, 0}, {1, 1}}));
}

TEST(IntervalBounds, Example) {
    const auto b = interval_bounds(IntervalSpec(4, 4, 2, 3));
    EXPECT_EQ(b.lower.argument, 7u);
    EXPECT_EQ(b.upper.argument, 9u);
    EXPECT_TRUE(b.fooling.verified);
    EXPECT_LE(b.gap(), 1.0);
}

TEST(IntervalBounds, BandFunctions) {
    for (std::int64_t t = 0; t <= 4; ++t) {
        const auto b = interval_bounds(IntervalSpec(4, 4, t, t));
        EXPECT_TRUE(b.fooling.verified);
        EXPECT_LE(b.lower, b.upper);
        EXPECT_LE(b.gap(), 1.0 + 1e-12);
    }
}

TEST(IntervalBounds, LowerIntervalIsAComplementedThreshold) {
    for (std::uint64_t m1 = 1; m1 <= 4; ++m1)
        for (std::uint64_t m2 = m1; m2 <= 4; ++m2)
            for (std::int64_t b = 0; 2 * b <= static_cast<std::int64_t>(m1 + m2); ++b) {
                const IntervalSpec s(m1, m2, 0, b);
                const auto w = interval_scheme(s).rate();
                EXPECT_EQ(w, threshold_complexity(ThresholdSpec(m1, m2, b + 1)));
            }
}

TEST(IntervalBounds, RequiresLowerHalf) { EXPECT_THROW(interval_bounds(IntervalSpec(2, 2, 0, 3)), Error); }

TEST(IntervalProtocol, Example) {
    const IntervalSpec s(4, 4, 2, 3);
    std::mt19937_64 rng(15);
    for (int k = 0; k < 1000; ++k) {
        const auto run = run_interval_protocol(s, 200, random_seq(200, 5, rng), random_seq(200, 5, rng));
        ASSERT_TRUE(run.zero_error);
        ASSERT_LE(run.total_bits(), 634u);
    }
}

TEST(IntervalProtocol, ConstantFunctionIsFree) {
    const IntervalSpec s(2, 3, 0, 5);
    const auto scheme = interval_scheme(s);
    EXPECT_EQ(scheme.rate().argument, 1u);
    std::mt19937_64 rng(16);
    const auto run = run_interval_protocol(s, 30, random_seq(30, 3, rng), random_seq(30, 4, rng));
    EXPECT_EQ(run.total_bits(), 0u);
    EXPECT_TRUE(run.zero_error);
}

TEST(IntervalProtocol, SingleInstanceSweep) {
    for (std::uint64_t m1 = 1; m1 <= 3; ++m1)
        for (std::uint64_t m2 = 1; m2 <= 3; ++m2)
            for (std::int64_t b = 0; b <= static_cast<std::int64_t>(m1 + m2); ++b)
                for (std::int64_t a = 0; a <= b; ++a) {
                    const IntervalSpec s(m1, m2, a, b);
                    for (Letter x = 0; x <= m1; ++x)
                        for (Letter y = 0; y <= m2; ++y)
                            ASSERT_TRUE(
                                run_interval_protocol(s, 1, std::vector<Letter>{x}, std::vector<Letter>{y}).zero_error);
                }
}

TEST(GeneralSeparation, ReproducesThresholdAndInterval) {
    const ThresholdSpec t(2, 3, 3);
    EXPECT_EQ(general_separation_coding(t.function()).rate(), threshold_complexity(t));
    const IntervalSpec iv(3, 4, 1, 2);
    EXPECT_EQ(general_separation_coding(iv.function()).rate(), interval_bounds(iv).upper);
}

TEST(GeneralSeparation, ParityOfSum) {
    const auto f = builtin::parity({2, 2}, 2);
    const auto scheme = general_separation_coding(f);
    EXPECT_EQ(scheme.ambiguous(), 2u);
    EXPECT_EQ(scheme.always_zero() + scheme.always_one(), 0u);
    EXPECT_EQ(scheme.rate().argument, 4u);
    std::mt19937_64 rng(17);
    const auto book = scheme.codebook(64);
    for (int k = 0; k < 50; ++k) {
        const auto run = run_two_node(scheme, book, random_seq(64, 2, rng), random_seq(64, 2, rng));
        ASSERT_TRUE(run.zero_error);
        ASSERT_LE(run.total_bits(), 128u);
    }
}

TEST(GeneralSeparation, RejectsNonSumFunctions) {
    EXPECT_THROW(general_separation_coding(builtin::maximum({3, 3})), Error);
    EXPECT_THROW(general_separation_coding(builtin::parity({3, 3}, 3)), Error);
    EXPECT_THROW(general_separation_coding(builtin::logical_and({2, 2, 2})), Error);
}

TEST(PrefixCodebook, RejectsBadShapes) {
    EXPECT_THROW(PrefixCodebook({}, 3), Error);
    EXPECT_THROW(PrefixCodebook({true}, 0), Error);
}
