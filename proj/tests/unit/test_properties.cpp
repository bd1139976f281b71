#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace infunc;
using namespace infunc::testing;

namespace {

std::vector<std::vector<std::uint32_t>> all_sequences(std::size_t k, std::size_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    ProductSpace s(std::vector<std::size_t>(n, k));
    Tuple t(n, 0);
    do {
        out.emplace_back(t.begin(), t.end());
    } while (s.next(t));
    return out;
}

NetworkGraph random_dag(std::size_t n, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    for (NodeId v = 2; v <= n; ++v) {
        std::vector<NodeId> targets;
        for (NodeId u = 1; u < v; ++u)
            if (rng() % 2 == 0) targets.push_back(u);
        if (targets.empty()) targets.push_back(1 + rng() % (v - 1));
        if (targets.size() > 2) targets.resize(2);
        for (auto u : targets) edges.push_back({v, u});
    }
    return NetworkGraph(GraphKind::Dag, n, edges, std::vector<std::size_t>(n, 2));
}

}  // namespace

TEST(Property, CodebooksAreExactPrefixCodes) {
    for (std::size_t k = 1; k <= 4; ++k)
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            std::vector<bool> amb(k);
            for (std::size_t i = 0; i < k; ++i) amb[i] = (mask >> i) & 1u;
            for (std::size_t n = 1; n <= 4; ++n) {
                const PrefixCodebook book(amb, n);
                std::vector<std::string> words;
                for (const auto& seq : all_sequences(k, n)) {
                    const auto word = book.encode(seq);
                    ASSERT_EQ(word.size(), book.worst_case_total() - book.ambiguous_in(seq));
                    BitReader r(word);
                    ASSERT_EQ(book.decode(r), seq);
                    ASSERT_EQ(r.remaining(), 0u);
                    words.push_back(word.str());
                }
                std::sort(words.begin(), words.end());
                for (std::size_t i = 1; i < words.size(); ++i)
                    ASSERT_NE(words[i].rfind(words[i - 1], 0), 0u) << "prefix clash";
                const BigInt num = boost::multiprecision::pow(BigInt(book.weight()), static_cast<unsigned>(n));
                const BigInt den = BigInt(1) << book.worst_case_total();
                ASSERT_EQ(book.kraft_sum(), Rational(num, den));
                ASSERT_TRUE(book.kraft_identity());
            }
        }
}

TEST(Property, LargeBlockCodebookRoundTrip) {
    std::mt19937_64 rng(41);
    const PrefixCodebook book({true, false, true, true, false}, 300);
    for (int s = 0; s < 20; ++s) {
        std::vector<std::uint32_t> seq(300);
        for (auto& x : seq) x = static_cast<std::uint32_t>(rng() % 5);
        const auto word = book.encode(seq);
        BitReader r(word);
        ASSERT_EQ(book.decode(r), seq);
        ASSERT_LE(word.size(), ceil_block_log2(8, 300));
    }
}

TEST(Property, HuffmanEntropySandwich) {
    std::mt19937_64 rng(42);
    for (int s = 0; s < 1000; ++s) {
        const auto q = random_distribution(1 + rng() % 12, rng);
        const auto code = huffman_code(q);
        ASSERT_TRUE(code.prefix_free());
        ASSERT_LE(code.kraft_sum(), 1);
        const double h = entropy_bits(q);
        const double e = to_double(code.expected_length(q));
        ASSERT_LE(h, e + 1e-12);
        ASSERT_LE(e, h + 1 + 1e-12);
    }
}

TEST(Property, OptimalPartitionIsCoarsestFeasible) {
    std::mt19937_64 rng(43);
    for (int s = 0; s < 60; ++s) {
        const std::vector<std::size_t> sizes{1 + rng() % 4, 1 + rng() % 4};
        const auto f = random_function(sizes, 1 + rng() % 3, rng);
        for (std::size_t side : {0u, 1u}) {
            const auto part = optimal_partition(f, side);
            const std::size_t q = sizes[side];
            std::size_t best = q;
            ProductSpace encoders(std::vector<std::size_t>(q, q));
            Tuple e(q, 0);
            do {
                bool feasible = true;
                for (Letter a = 0; a < q && feasible; ++a)
                    for (Letter b = a + 1; b < q && feasible; ++b)
                        if (e[a] == e[b]) feasible = signature(f, side, a) == signature(f, side, b);
                if (!feasible) continue;
                for (Letter a = 0; a < q; ++a)
                    for (Letter b = 0; b < q; ++b)
                        if (e[a] == e[b]) ASSERT_EQ(part.class_of(a), part.class_of(b));
                best = std::min(best, std::set<Letter>(e.begin(), e.end()).size());
            } while (encoders.next(e));
            ASSERT_EQ(best, part.size());
        }
    }
}

TEST(Property, TreeCodingIsBottomUpConsistent) {
    std::mt19937_64 rng(44);
    for (int s = 0; s < 80; ++s) {
        const std::size_t n = 2 + rng() % 4;
        std::vector<std::size_t> sizes(n);
        for (auto& x : sizes) x = 1 + rng() % 3;
        const auto g = random_directed_tree(n, sizes, rng);
        const auto f = random_function(sizes, 1 + rng() % 3, rng);
        const TreeCode code(f, g);
        std::vector<std::vector<Letter>> seqs(n);
        Tuple t(n, 0);
        do {
            for (std::size_t i = 0; i < n; ++i) seqs[i].push_back(t[i]);
        } while (f.space().next(t));
        ASSERT_TRUE(run_tree_computation(code, Block(seqs)).zero_error);
        for (NodeId v = 2; v <= n; ++v)
            ASSERT_EQ(code.alphabet(v).size(), brute_force_class_count(f, descendant_set(g, v)));
    }
}

TEST(Property, ThresholdSymmetries) {
    for (std::uint64_t m1 = 0; m1 <= 6; ++m1)
        for (std::uint64_t m2 = 0; m2 <= 6; ++m2)
            for (std::int64_t t = 0; t <= static_cast<std::int64_t>(m1 + m2) + 1; ++t) {
                const auto c = threshold_complexity(ThresholdSpec(m1, m2, t));
                ASSERT_EQ(c, threshold_complexity(ThresholdSpec(m2, m1, t)));
                ASSERT_EQ(c, threshold_complexity(ThresholdSpec(m1, m2, static_cast<std::int64_t>(m1 + m2) + 1 - t)));
                ASSERT_EQ(c, threshold_scheme(ThresholdSpec(m1, m2, t), 0).rate());
                ASSERT_EQ(c, threshold_scheme(ThresholdSpec(m1, m2, t), 1).rate());
            }
}

TEST(Property, DagBoundsAreConsistent) {
    std::mt19937_64 rng(45);
    for (int s = 0; s < 40; ++s) {
        const std::size_t n = 3 + rng() % 4;
        const auto g = random_dag(n, rng);
        const auto f = random_function(g.alphabet_sizes(), 2, rng);
        const auto worst = dag_outer_bound(f, g);
        const auto avg = dag_outer_bound_average(f, g, JointDistribution::uniform(g.alphabet_sizes()));
        ASSERT_EQ(worst.cuts.size(), (std::size_t{1} << (n - 1)) - 1);
        for (std::size_t i = 0; i < worst.cuts.size(); ++i) {
            ASSERT_EQ(worst.cuts[i].cut.source_side, avg.cuts[i].cut.source_side);
            ASSERT_LE(avg.cuts[i].bound, worst.cuts[i].bound + 1e-9);
            ASSERT_EQ(worst.cuts[i].conditioning, upstream_of(g, worst.cuts[i].cut.source_side));
            ASSERT_EQ(*worst.cuts[i].classes, brute_force_conditional_class_count(f, worst.cuts[i].cut.source_side,
                                                                                  worst.cuts[i].conditioning));
        }
        for (const auto& p : tree_achievable_points(f, g)) ASSERT_TRUE(check_rate_point(worst, p.rates).satisfied);
    }
}

TEST(Property, TradeoffCertificateAgainstGrid) {
    std::mt19937_64 rng(46);
    for (int s = 0; s < 15; ++s) {
        const std::size_t n = 3;
        std::vector<std::size_t> sizes(n);
        for (auto& x : sizes) x = 2 + rng() % 2;
        const auto g = complete_graph(n, sizes);
        const std::int64_t theta = 1 + static_cast<std::int64_t>(rng() % 4);
        const auto stars = star_schemes(g, theta);
        const auto a = scheme_matrix(stars, g.edges().size());
        std::vector<Rational> r;
        for (std::size_t e = 0; e < g.edges().size(); ++e) r.push_back(make_rational(1 + rng() % 8, 4));
        const auto res = tradeoff_lp(a, r);
        ASSERT_EQ(res.status, LpStatus::Optimal);
        ASSERT_TRUE(res.certificate);
        ASSERT_TRUE(res.program.satisfied_by([&] {
            auto x = res.lambda;
            x.push_back(res.t_star);
            return x;
        }()));
        const double grid = grid_search_tradeoff(a, r, 120);
        ASSERT_LE(to_double(res.t_star), grid + 1e-9);
    }
}

TEST(Property, SplitAggregationOnRandomDags) {
    std::mt19937_64 rng(47);
    for (int s = 0; s < 30; ++s) {
        const std::size_t n = 3 + rng() % 4;
        auto g0 = random_dag(n, rng);
        const NetworkGraph g(GraphKind::Dag, n, g0.edges(), std::vector<std::size_t>(n, 3));
        for (auto kind : {Aggregate::Parity, Aggregate::Max, Aggregate::Min}) {
            const SplitAggregation agg{kind, 3};
            const auto run = simulate_split_aggregation(agg, g, random_block(g.alphabet_sizes(), 25, rng));
            ASSERT_TRUE(run.zero_error);
            ASSERT_TRUE(check_rate_point(dag_outer_bound(agg.function(g), g), run.transcript.rates()).satisfied);
        }
    }
}
