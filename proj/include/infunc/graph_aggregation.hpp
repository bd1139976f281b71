#pragma once

// Sum-threshold computation on general undirected graphs: cut-set lower
// bounds, time-sharing over spanning trees (stars on complete graphs), and the
// linear program that scales a target rate vector until some mixture fits.

#include "infunc/core.hpp"
#include "infunc/dag_rate_region.hpp"
#include "infunc/lp.hpp"
#include "infunc/transcript.hpp"
#include "infunc/tree_protocol.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

namespace infunc {

struct GraphCutBound {
    Cut cut;                 // source_side = A_F (never holds node 1), crossing = F
    std::uint64_t l_side = 0;
    std::uint64_t l_rest = 0;
    std::uint64_t m = 0;     // min(l_A, l_{V\A})
    Log2Rate bound;

    /// Bits per instance each crossing edge must carry under a symmetric rate.
    double per_edge() const { return bound.value() / static_cast<double>(cut.crossing.size()); }
};

inline std::uint64_t total_capacity(const NetworkGraph& g) {
    const auto l = capacities(g);
    std::uint64_t s = 0;
    for (auto x : l) s += x;
    return s;
}

inline void require_undirected(const NetworkGraph& g) {
    if (g.directed()) throw Error("expected an undirected graph");
}

inline std::vector<GraphCutBound> graph_cut_bounds(const NetworkGraph& g, std::int64_t theta,
                                                   std::size_t cut_cap = kDefaultCutCap) {
    require_undirected(g);
    const auto l = capacities(g);
    const auto total = total_capacity(g);
    if (theta < 0 || theta > static_cast<std::int64_t>(total) + 1)
        throw Error("threshold must satisfy 0 <= theta <= l_V + 1");
    std::vector<GraphCutBound> out;
    for (auto& cut : enumerate_cuts(g, 1, cut_cap)) {
        GraphCutBound b;
        b.l_side = capacity_of(l, cut.source_side);
        b.l_rest = total - b.l_side;
        b.m = std::min(b.l_side, b.l_rest);
        b.bound = threshold_complexity(ThresholdSpec(b.l_side, b.l_rest, theta));
        b.cut = std::move(cut);
        out.push_back(std::move(b));
    }
    return out;
}

/// R_cut: the smallest symmetric per-edge rate meeting every cut bound.
inline double symmetric_cut_rate(const std::vector<GraphCutBound>& cuts) {
    double r = 0.0;
    for (const auto& c : cuts)
        if (!c.cut.crossing.empty()) r = std::max(r, c.per_edge());
    return r;
}

inline bool is_complete(const NetworkGraph& g) {
    const auto n = g.node_count();
    if (g.edges().size() != n * (n - 1) / 2) return false;
    for (NodeId i = 1; i <= n; ++i)
        for (NodeId j = i + 1; j <= n; ++j)
            if (!g.edge_index(i, j)) return false;
    return true;
}

inline void require_complete(const NetworkGraph& g) {
    require_undirected(g);
    if (!is_complete(g)) throw Error("expected a complete graph; supply spanning trees instead");
}

inline NetworkGraph complete_graph(std::size_t n, std::vector<std::size_t> alphabet_sizes = {}) {
    std::vector<Edge> edges;
    for (NodeId i = 1; i <= n; ++i)
        for (NodeId j = i + 1; j <= n; ++j) edges.push_back({i, j});
    return NetworkGraph(GraphKind::UndirectedGeneral, n, std::move(edges), std::move(alphabet_sizes));
}

/// A spanning tree of g used as one time-sharing component.
struct TreeScheme {
    std::vector<std::size_t> edges;      // indices into g.edges()
    NodeId center = 0;                   // star center, 0 otherwise
    std::vector<Log2Rate> per_edge;      // one per edge of g; log2(1) off the tree

    RateVector rates() const {
        RateVector r;
        for (const auto& x : per_edge) r.push_back(x.value());
        return r;
    }
};

inline NetworkGraph subtree_graph(const NetworkGraph& g, const std::vector<std::size_t>& edges) {
    std::vector<Edge> e;
    for (auto i : edges) {
        if (i >= g.edges().size()) throw Error("tree edge index out of range");
        e.push_back(g.edges()[i]);
    }
    if (e.size() + 1 != g.node_count()) throw Error("a spanning tree needs exactly n-1 edges");
    NetworkGraph t(GraphKind::UndirectedTree, g.node_count(), std::move(e), g.alphabet_sizes());
    return t;
}

inline TreeScheme make_tree_scheme(const NetworkGraph& g, std::vector<std::size_t> edges, std::int64_t theta) {
    require_undirected(g);
    TreeScheme s;
    s.edges = std::move(edges);
    const auto tree = subtree_graph(g, s.edges);
    const auto profiles = edge_complexities(tree, theta);
    s.per_edge.assign(g.edges().size(), Log2Rate{1});
    for (const auto& p : profiles) s.per_edge[s.edges[p.edge]] = p.complexity;
    return s;
}

inline std::vector<TreeScheme> star_schemes(const NetworkGraph& g, std::int64_t theta) {
    require_complete(g);
    std::vector<TreeScheme> out;
    for (NodeId c = 1; c <= g.node_count(); ++c) {
        std::vector<std::size_t> edges;
        for (NodeId j = 1; j <= g.node_count(); ++j)
            if (j != c) edges.push_back(*g.edge_index(c, j));
        auto s = make_tree_scheme(g, std::move(edges), theta);
        s.center = c;
        out.push_back(std::move(s));
    }
    return out;
}

struct StarRates {
    RateVector per_edge;
    double r_ach = 0.0;  // max over edges
};

/// Uniform time-sharing over the n stars: edge (i,j) carries (c_i + c_j) / n.
inline StarRates star_aggregation_rates(const NetworkGraph& g, std::int64_t theta) {
    const auto stars = star_schemes(g, theta);
    StarRates r;
    r.per_edge.assign(g.edges().size(), 0.0);
    const double n = static_cast<double>(g.node_count());
    for (const auto& s : stars)
        for (auto e : s.edges) r.per_edge[e] += s.per_edge[e].value() / n;
    for (double x : r.per_edge) r.r_ach = std::max(r.r_ach, x);
    return r;
}

struct RatioReport {
    double r_ach = 0.0;
    double r_cut = 0.0;
    double ratio = 1.0;
    double limit = 1.0;  // 2(1 - 1/n)
    bool within = true;
};

inline RatioReport ratio_check(const NetworkGraph& g, std::int64_t theta, std::size_t cut_cap = kDefaultCutCap) {
    require_complete(g);
    RatioReport r;
    r.r_ach = star_aggregation_rates(g, theta).r_ach;
    r.r_cut = symmetric_cut_rate(graph_cut_bounds(g, theta, cut_cap));
    const double n = static_cast<double>(g.node_count());
    r.limit = 2.0 * (1.0 - 1.0 / n);
    if (r.r_cut > 0.0) r.ratio = r.r_ach / r.r_cut;
    else r.ratio = r.r_ach > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    r.within = r.ratio <= r.limit + kRateTolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Tradeoff LP: minimize t subject to A lambda <= t r, sum(lambda) >= 1, lambda, t >= 0.

struct TradeoffResult {
    LpStatus status = LpStatus::Infeasible;
    Rational t_star;
    std::vector<Rational> lambda;
    Rational lambda_sum;
    bool certificate = false;  // constraints re-checked exactly
    LinearProgram program;
};

/// a[e][i]: bits per instance scheme i sends over edge e.
inline std::vector<std::vector<Rational>> scheme_matrix(const std::vector<TreeScheme>& schemes, std::size_t edges) {
    std::vector<std::vector<Rational>> a(edges, std::vector<Rational>(schemes.size(), Rational(0)));
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (schemes[i].per_edge.size() != edges) throw Error("scheme does not match graph edges");
        for (std::size_t e = 0; e < edges; ++e) a[e][i] = exact_rational(schemes[i].per_edge[e].value());
    }
    return a;
}

inline TradeoffResult tradeoff_lp(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& r) {
    if (a.empty() || a.front().empty()) throw Error("tradeoff LP needs a non-empty scheme set");
    if (a.size() != r.size()) throw Error("rate vector must have one entry per edge");
    const std::size_t k = a.front().size();
    for (const auto& x : r)
        if (x < 0) throw Error("target rates must be non-negative");
    TradeoffResult out;
    LinearProgram lp(k + 1);  // lambda_1..lambda_k, t
    lp.objective[k] = 1;
    for (std::size_t e = 0; e < a.size(); ++e) {
        if (a[e].size() != k) throw Error("scheme matrix rows have different lengths");
        std::vector<Rational> row(a[e]);
        row.push_back(-r[e]);
        lp.add_row(std::move(row), Relation::LessEqual, Rational(0));
    }
    std::vector<Rational> norm(k, Rational(1));
    norm.push_back(0);
    lp.add_row(std::move(norm), Relation::GreaterEqual, Rational(1));
    const auto sol = solve_lp(lp);
    out.status = sol.status;
    if (sol.status == LpStatus::Optimal) {
        out.t_star = sol.x[k];
        out.lambda.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
        out.lambda_sum = 0;
        for (const auto& x : out.lambda) out.lambda_sum += x;
        out.certificate = lp.satisfied_by(sol.x);
    }
    out.program = std::move(lp);
    return out;
}

inline TradeoffResult tradeoff_lp(const std::vector<TreeScheme>& schemes, const std::vector<Rational>& r) {
    if (schemes.empty()) throw Error("tradeoff LP needs a non-empty scheme set");
    return tradeoff_lp(scheme_matrix(schemes, r.size()), r);
}

/// Minimum of max_e (A lambda)_e / r_e over lambda on the simplex grid with step 1/resolution.
inline double grid_search_tradeoff(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& r,
                                   std::size_t resolution) {
    const std::size_t k = a.front().size();
    std::vector<std::vector<double>> ad(a.size(), std::vector<double>(k));
    std::vector<double> rd(r.size());
    for (std::size_t e = 0; e < a.size(); ++e) {
        rd[e] = to_double(r[e]);
        for (std::size_t i = 0; i < k; ++i) ad[e][i] = to_double(a[e][i]);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> c(k, 0);
    // Enumerate compositions of `resolution` into k parts.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == k) {
            c[i] = left;
            double t = 0.0;
            for (std::size_t e = 0; e < ad.size(); ++e) {
                double load = 0.0;
                for (std::size_t j = 0; j < k; ++j) load += ad[e][j] * static_cast<double>(c[j]);
                load /= static_cast<double>(resolution);
                if (load == 0.0) continue;
                if (rd[e] == 0.0) {
                    t = std::numeric_limits<double>::infinity();
                    break;
                }
                t = std::max(t, load / rd[e]);
            }
            best = std::min(best, t);
            return;
        }
        for (std::size_t x = 0; x <= left; ++x) {
            c[i] = x;
            rec(i + 1, left - x);
        }
    };
    rec(0, resolution);
    return best;
}

// ---------------------------------------------------------------------------
// Time-shared simulation

struct TimeShareRun {
    ProtocolTranscript transcript;
    std::vector<std::size_t> chunk;  // instances assigned to each scheme
    RateVector measured;
    RateVector predicted;            // sum_i lambda_i a_ei
    bool zero_error = true;
};

inline TimeShareRun tree_scheme_simulation(const NetworkGraph& g, std::int64_t theta,
                                           const std::vector<TreeScheme>& schemes,
                                           const std::vector<Rational>& lambda, const Block& block) {
    require_undirected(g);
    if (schemes.empty() || schemes.size() != lambda.size()) throw Error("need one weight per scheme");
    Rational sum = 0;
    for (const auto& x : lambda) sum += x;
    if (sum != 1) throw Error("scheme weights must sum to 1");
    const std::size_t len = block.length();
    if (block.node_count() != g.node_count()) throw Error("block does not cover every node");

    TimeShareRun out;
    out.transcript = ProtocolTranscript(len, g.edges().size());
    out.chunk = largest_remainder_split(len, lambda);
    out.predicted.assign(g.edges().size(), 0.0);
    for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t e = 0; e < g.edges().size(); ++e)
            out.predicted[e] += to_double(lambda[i]) * schemes[i].per_edge[e].value();

    std::size_t start = 0;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (out.chunk[i] == 0) continue;
        const auto tree = subtree_graph(g, schemes[i].edges);
        Block part;
        for (const auto& seq : block.sequences)
            part.sequences.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(start),
                                        seq.begin() + static_cast<std::ptrdiff_t>(start + out.chunk[i]));
        const auto run = run_tree_protocol(tree, theta, weighted_centroid(tree), part);
        out.zero_error = out.zero_error && run.zero_error;
        for (const auto& m : run.transcript.messages())
            out.transcript.send(m.from, m.to, schemes[i].edges[m.edge], m.payload);
        start += out.chunk[i];
    }
    out.measured = out.transcript.rates();
    return out;
}

}  // namespace infunc
