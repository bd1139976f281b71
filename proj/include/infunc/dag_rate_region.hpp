#pragma once

// Rate regions on DAGs: cut-based outer bounds, points achieved by routing
// over a directed subtree, block-splitting aggregation for divisible
// functions, and convex-hull queries over achievable points.

#include "infunc/bits.hpp"
#include "infunc/core.hpp"
#include "infunc/lp.hpp"
#include "infunc/transcript.hpp"
#include "infunc/tree_coding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace infunc {

/// Classes of assignments of `nodes` that agree on f against every assignment of the rest.
struct SignatureClasses {
    std::vector<NodeId> nodes;
    std::vector<NodeId> rest;
    ProductSpace node_space;
    ProductSpace rest_space;
    std::vector<std::size_t> class_of;  // by flat index in node_space
    std::size_t count = 0;
};

inline SignatureClasses signature_classes(const FunctionTable& f, std::span<const NodeId> nodes,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
    const std::size_t n = f.arity();
    SignatureClasses s;
    s.nodes.assign(nodes.begin(), nodes.end());
    s.rest = complement_of(n, s.nodes);
    s.node_space = ProductSpace(sizes_of(f.alphabet_sizes(), s.nodes));
    s.rest_space = ProductSpace(sizes_of(f.alphabet_sizes(), s.rest));
    if (s.node_space.size() > cap || s.rest_space.size() > cap)
        throw Error("class enumeration over " + std::to_string(s.nodes.size()) + " nodes exceeds cap of " +
                    std::to_string(cap) + " tuples");
    std::map<std::vector<Letter>, std::size_t> ids;
    Tuple d(s.nodes.size(), 0);
    do {
        std::vector<Letter> h;
        h.reserve(s.rest_space.size());
        Tuple c(s.rest.size(), 0);
        do {
            h.push_back(f(merge_assignment(n, s.nodes, d, s.rest, c)));
        } while (s.rest_space.next(c));
        auto [it, _] = ids.emplace(std::move(h), ids.size());
        s.class_of.push_back(it->second);
    } while (s.node_space.next(d));
    s.count = ids.size();
    return s;
}

struct CutBound {
    Cut cut;
    std::vector<std::size_t> edges;      // delta+(S)
    std::optional<std::uint64_t> classes;  // worst case: number of classes
    double bound = 0.0;                  // bits per instance
    std::vector<NodeId> conditioning;    // R: nodes outside S with a path into S

    std::string expression() const {
        if (classes) return "log2(" + std::to_string(*classes) + ")";
        return std::to_string(round6(bound));
    }
};

struct OuterBound {
    std::size_t edge_count = 0;
    std::vector<CutBound> cuts;
};

inline void require_dag(const NetworkGraph& g) {
    if (g.kind() != GraphKind::Dag && g.kind() != GraphKind::DirectedTree)
        throw Error("expected a dag or directed tree");
}

/// Nodes outside S with a directed path into S.
inline std::vector<NodeId> upstream_of(const NetworkGraph& g, std::span<const NodeId> s) {
    std::vector<bool> in_s(g.node_count() + 1, false), reach(g.node_count() + 1, false);
    for (NodeId v : s) in_s[v] = true;
    std::vector<NodeId> stack(s.begin(), s.end());
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : g.in_neighbors(v)) {
            if (reach[u] || in_s[u]) continue;
            reach[u] = true;
            stack.push_back(u);
        }
    }
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= g.node_count(); ++v)
        if (reach[v]) out.push_back(v);
    return out;
}

/// Signature classes of X_S with X_R held fixed, one partition per assignment of R.
/// Messages leaving S may depend on X_R, so classes are only taken against the remaining nodes.
struct ConditionalClasses {
    std::vector<NodeId> upstream;
    ProductSpace node_space;
    ProductSpace upstream_space;
    std::vector<std::vector<std::size_t>> class_of;  // [r index][s index]
    std::vector<std::size_t> counts;                 // [r index]
    std::size_t max_count = 0;
};

inline ConditionalClasses conditional_classes(const FunctionTable& f, std::span<const NodeId> s_nodes,
                                              std::vector<NodeId> upstream,
                                              std::uint64_t cap = kDefaultEnumerationCap) {
    const std::size_t n = f.arity();
    std::vector<NodeId> fixed(s_nodes.begin(), s_nodes.end());
    fixed.insert(fixed.end(), upstream.begin(), upstream.end());
    std::sort(fixed.begin(), fixed.end());
    const auto rest = complement_of(n, fixed);
    ConditionalClasses c;
    c.node_space = ProductSpace(sizes_of(f.alphabet_sizes(), s_nodes));
    c.upstream_space = ProductSpace(sizes_of(f.alphabet_sizes(), upstream));
    const ProductSpace rest_space(sizes_of(f.alphabet_sizes(), rest));
    if (c.node_space.size() > cap || rest_space.size() > cap || c.upstream_space.size() > cap)
        throw Error("class enumeration over " + std::to_string(s_nodes.size()) + " nodes exceeds cap of " +
                    std::to_string(cap) + " tuples");
    const std::vector<NodeId> s_vec(s_nodes.begin(), s_nodes.end());
    Tuple r(upstream.size(), 0);
    do {
        std::map<std::vector<Letter>, std::size_t> ids;
        std::vector<std::size_t> cls;
        Tuple d(s_vec.size(), 0);
        do {
            Tuple full(n, 0);
            for (std::size_t i = 0; i < s_vec.size(); ++i) full[s_vec[i] - 1] = d[i];
            for (std::size_t i = 0; i < upstream.size(); ++i) full[upstream[i] - 1] = r[i];
            std::vector<Letter> h;
            h.reserve(rest_space.size());
            Tuple w(rest.size(), 0);
            do {
                for (std::size_t i = 0; i < rest.size(); ++i) full[rest[i] - 1] = w[i];
                h.push_back(f(full));
            } while (rest_space.next(w));
            auto [it, _] = ids.emplace(std::move(h), ids.size());
            cls.push_back(it->second);
        } while (c.node_space.next(d));
        c.counts.push_back(ids.size());
        c.max_count = std::max(c.max_count, ids.size());
        c.class_of.push_back(std::move(cls));
    } while (c.upstream_space.next(r));
    c.upstream = std::move(upstream);
    return c;
}

/// Worst-case outer bound: sum over delta+(S) of R >= log2 of the largest class count of X_S
/// over assignments of the nodes upstream of S.
inline OuterBound dag_outer_bound(const FunctionTable& f, const NetworkGraph& g, std::size_t cut_cap = kDefaultCutCap,
                                  std::uint64_t enum_cap = kDefaultEnumerationCap) {
    require_dag(g);
    check_function_on_graph(f, g);
    OuterBound out;
    out.edge_count = g.edges().size();
    for (auto& cut : enumerate_cuts(g, g.collector(), cut_cap)) {
        const auto cls = conditional_classes(f, cut.source_side, upstream_of(g, cut.source_side), enum_cap);
        CutBound b;
        b.edges = cut.crossing;
        b.classes = cls.max_count;
        b.bound = std::log2(static_cast<double>(cls.max_count));
        b.conditioning = cls.upstream;
        b.cut = std::move(cut);
        out.cuts.push_back(std::move(b));
    }
    return out;
}

/// Average-case outer bound, single-letter: sum over delta+(S) of R >= H([X_S]_{X_R} | X_R).
inline OuterBound dag_outer_bound_average(const FunctionTable& f, const NetworkGraph& g, const JointDistribution& p,
                                          std::size_t cut_cap = kDefaultCutCap,
                                          std::uint64_t enum_cap = kDefaultEnumerationCap) {
    require_dag(g);
    check_function_on_graph(f, g);
    if (p.alphabet_sizes() != f.alphabet_sizes()) throw Error("distribution does not match function");
    if (!p.strictly_positive()) throw Error("average-case outer bound requires a strictly positive distribution");
    OuterBound out;
    out.edge_count = g.edges().size();
    for (auto& cut : enumerate_cuts(g, g.collector(), cut_cap)) {
        const auto cls = conditional_classes(f, cut.source_side, upstream_of(g, cut.source_side), enum_cap);
        // joint[x_R][class]
        std::vector<std::vector<Rational>> joint(cls.upstream_space.size());
        for (std::size_t i = 0; i < joint.size(); ++i) joint[i].assign(cls.counts[i], Rational(0));
        const auto& space = p.space();
        Tuple t(space.dims(), 0);
        std::uint64_t idx = 0;
        do {
            const auto ri = cls.upstream_space.index(restrict_to(t, cls.upstream));
            const auto c = cls.class_of[ri][cls.node_space.index(restrict_to(t, cut.source_side))];
            joint[ri][c] += p.at(idx++);
        } while (space.next(t));
        double h = 0.0;
        for (const auto& row : joint) {
            Rational mass = 0;
            for (const auto& q : row) mass += q;
            if (mass == 0) continue;
            std::vector<Rational> cond;
            for (const auto& q : row) cond.push_back(q / mass);
            h += to_double(mass) * entropy_bits(cond);
        }
        CutBound b;
        b.edges = cut.crossing;
        b.bound = h;
        b.conditioning = cls.upstream;
        b.cut = std::move(cut);
        out.cuts.push_back(std::move(b));
    }
    return out;
}

struct RateCheck {
    bool satisfied = true;
    std::vector<std::size_t> violated;  // indices into OuterBound::cuts
};

inline RateCheck check_rate_point(const OuterBound& bounds, const RateVector& r, double tol = kRateTolerance) {
    if (r.size() != bounds.edge_count)
        throw Error("rate vector has " + std::to_string(r.size()) + " entries but the graph has " +
                    std::to_string(bounds.edge_count) + " edges");
    validate_rates(r);
    RateCheck out;
    for (std::size_t i = 0; i < bounds.cuts.size(); ++i) {
        double s = 0.0;
        for (auto e : bounds.cuts[i].edges) s += r[e];
        if (s < bounds.cuts[i].bound - tol) {
            out.satisfied = false;
            out.violated.push_back(i);
        }
    }
    return out;
}

struct TreePoint {
    std::vector<std::size_t> tree_edges;  // indices into the DAG's edge list
    RateVector rates;                     // unused edges get 0
    std::vector<std::uint64_t> alphabet_sizes;  // per edge; 1 when unused
};

/// One point per choice of a single out-edge at every non-collector node.
inline std::vector<TreePoint> tree_achievable_points(const FunctionTable& f, const NetworkGraph& g,
                                                     std::uint64_t tree_cap = 100000,
                                                     std::uint64_t enum_cap = kDefaultEnumerationCap) {
    require_dag(g);
    check_function_on_graph(f, g);
    std::vector<NodeId> senders;
    std::vector<std::vector<std::size_t>> options;
    std::uint64_t total = 1;
    for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v == g.collector()) continue;
        senders.push_back(v);
        options.push_back(g.out_edges(v));
        total *= options.back().size();
        if (total > tree_cap) throw Error("number of directed subtrees exceeds cap of " + std::to_string(tree_cap));
    }
    std::vector<TreePoint> out;
    std::vector<std::size_t> radices;
    for (const auto& o : options) radices.push_back(o.size());
    ProductSpace choice_space(radices);
    Tuple choice(radices.size(), 0);
    do {
        TreePoint pt;
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < senders.size(); ++i) {
            const auto e = options[i][choice[i]];
            pt.tree_edges.push_back(e);
            edges.push_back(g.edges()[e]);
        }
        const NetworkGraph tree(GraphKind::DirectedTree, g.node_count(), edges, g.alphabet_sizes(), g.collector());
        pt.rates.assign(g.edges().size(), 0.0);
        pt.alphabet_sizes.assign(g.edges().size(), 1);
        for (std::size_t i = 0; i < senders.size(); ++i) {
            const auto a = edge_alphabet(f, tree, senders[i], enum_cap);
            pt.rates[pt.tree_edges[i]] = a.worst_case_rate();
            pt.alphabet_sizes[pt.tree_edges[i]] = a.size();
        }
        out.push_back(std::move(pt));
    } while (choice_space.next(choice));
    return out;
}

struct HullQuery {
    bool member = false;
    std::vector<Rational> lambda;
};

/// Is r a convex combination of the points (within tol per coordinate)? With `upward`,
/// asks whether r dominates some convex combination instead.
inline HullQuery hull_membership(const std::vector<RateVector>& points, const RateVector& r,
                                 double tol = kRateTolerance, bool upward = false) {
    if (points.empty()) throw Error("hull query needs at least one point");
    const std::size_t k = points.size();
    const std::size_t d = r.size();
    LinearProgram lp(k);
    lp.add_row(std::vector<Rational>(k, Rational(1)), Relation::Equal, Rational(1));
    const Rational slack = exact_rational(tol);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rational> row(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (points[i].size() != d) throw Error("hull points have mismatched dimensions");
            row[i] = exact_rational(points[i][j]);
        }
        const Rational target = exact_rational(r[j]);
        lp.add_row(row, Relation::LessEqual, target + slack);
        if (!upward) lp.add_row(row, Relation::GreaterEqual, target - slack);
    }
    const auto sol = solve_lp(lp);
    HullQuery q;
    q.member = sol.status == LpStatus::Optimal;
    if (q.member) q.lambda = sol.x;
    return q;
}

// ---------------------------------------------------------------------------
// Block-splitting aggregation

enum class Aggregate { Parity, Max, Min };

inline std::string to_string(Aggregate a) {
    switch (a) {
        case Aggregate::Parity: return "parity";
        case Aggregate::Max: return "max";
        case Aggregate::Min: return "min";
    }
    return "unknown";
}

inline Aggregate parse_aggregate(const std::string& s) {
    if (s == "parity") return Aggregate::Parity;
    if (s == "max") return Aggregate::Max;
    if (s == "min") return Aggregate::Min;
    throw Error("unsupported aggregate '" + s + "' (expected parity, max or min)");
}

struct SplitAggregation {
    Aggregate kind = Aggregate::Parity;
    std::uint64_t modulus = 2;  // parity only

    std::uint64_t range(const NetworkGraph& g) const {
        if (kind == Aggregate::Parity) return modulus;
        std::uint64_t m = 1;
        for (auto s : g.alphabet_sizes()) m = std::max<std::uint64_t>(m, s);
        return m;
    }

    std::uint64_t combine(std::uint64_t x, std::uint64_t y) const {
        switch (kind) {
            case Aggregate::Parity: return (x + y) % modulus;
            case Aggregate::Max: return std::max(x, y);
            case Aggregate::Min: return std::min(x, y);
        }
        return 0;
    }

    FunctionTable function(const NetworkGraph& g) const {
        switch (kind) {
            case Aggregate::Parity: return builtin::parity(g.alphabet_sizes(), modulus);
            case Aggregate::Max: return builtin::maximum(g.alphabet_sizes());
            case Aggregate::Min: return builtin::minimum(g.alphabet_sizes());
        }
        throw Error("unsupported aggregate");
    }
};

/// Splits `total` into parts proportional to `weights` by largest remainder (ties: lower index).
inline std::vector<std::size_t> largest_remainder_split(std::size_t total, const std::vector<Rational>& weights) {
    if (weights.empty()) throw Error("split needs at least one part");
    Rational sum = 0;
    for (const auto& w : weights) {
        if (w < 0) throw Error("split weights must be non-negative");
        sum += w;
    }
    if (sum == 0) throw Error("split weights must not all be zero");
    std::vector<std::size_t> parts(weights.size());
    std::vector<Rational> frac(weights.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const Rational quota = Rational(total) * weights[i] / sum;
        const BigInt fl = numerator(quota) / denominator(quota);
        parts[i] = fl.convert_to<std::size_t>();
        frac[i] = quota - Rational(fl);
        assigned += parts[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++parts[order[i % order.size()]];
    return parts;
}

struct SplitRun {
    ProtocolTranscript transcript;
    std::vector<Letter> expected;
    std::vector<Letter> decoded;
    bool zero_error = false;
    /// instance -> out-edge used, per node (empty for the collector)
    std::vector<std::vector<std::size_t>> route;
};

/// Each node aggregates its letter with the partial results it received and forwards every
/// instance on exactly one out-edge; the instance ranges are contiguous per edge.
inline SplitRun simulate_split_aggregation(const SplitAggregation& agg, const NetworkGraph& g, const Block& block,
                                           const std::vector<Rational>& edge_weights = {}) {
    require_dag(g);
    if (agg.kind == Aggregate::Parity && agg.modulus < 2) throw Error("parity modulus must be at least 2");
    const std::size_t n = g.node_count();
    const std::size_t len = block.length();
    if (block.node_count() != n) throw Error("block does not cover every node");
    if (len == 0) throw Error("block length must be positive");
    if (!edge_weights.empty() && edge_weights.size() != g.edges().size())
        throw Error("edge weight vector must have one entry per edge");
    const auto range = agg.range(g);
    const auto f = agg.function(g);

    SplitRun run;
    run.transcript = ProtocolTranscript(len, g.edges().size());
    run.route.assign(n, {});
    std::vector<std::vector<std::optional<std::uint64_t>>> partial(
        n + 1, std::vector<std::optional<std::uint64_t>>(len));

    for (NodeId v : g.topological_order()) {
        auto& mine = partial[v];
        for (std::size_t t = 0; t < len; ++t) {
            std::uint64_t x = block.sequences[v - 1][t];
            if (x >= g.alphabet_size(v)) throw Error("block letter outside node alphabet");
            if (agg.kind == Aggregate::Parity) x %= agg.modulus;
            mine[t] = mine[t] ? agg.combine(*mine[t], x) : x;
        }
        if (v == g.collector()) continue;
        const auto outs = g.out_edges(v);
        std::vector<Rational> w;
        for (auto e : outs) w.push_back(edge_weights.empty() ? Rational(1) : edge_weights[e]);
        const auto parts = largest_remainder_split(len, w);
        run.route[v - 1].assign(len, 0);
        std::size_t start = 0;
        for (std::size_t k = 0; k < outs.size(); ++k) {
            const auto e = outs[k];
            const NodeId to = g.edges()[e].to;
            std::vector<std::uint32_t> digits;
            for (std::size_t t = start; t < start + parts[k]; ++t) {
                digits.push_back(static_cast<std::uint32_t>(*mine[t]));
                run.route[v - 1][t] = e;
            }
            BitString msg = pack_mixed_radix(digits, range);
            run.transcript.send(v, to, e, msg);
            BitReader reader(msg);
            const auto got = unpack_mixed_radix(reader, digits.size(), range);
            for (std::size_t i = 0; i < got.size(); ++i) {
                auto& slot = partial[to][start + i];
                slot = slot ? agg.combine(*slot, got[i]) : got[i];
            }
            start += parts[k];
        }
    }

    run.decoded.resize(len);
    run.expected.resize(len);
    for (std::size_t t = 0; t < len; ++t) {
        run.decoded[t] = static_cast<Letter>(*partial[g.collector()][t]);
        run.expected[t] = f(block.instance(t));
    }
    run.zero_error = run.decoded == run.expected;
    return run;
}

}  // namespace infunc
