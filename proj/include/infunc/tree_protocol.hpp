#pragma once

// Interactive computation of sum-threshold and sum-interval functions on
// undirected trees. Codewords travel leaf-to-root, the root evaluates the
// function, and replies travel root-to-leaf so every node learns the block.

#include "infunc/core.hpp"
#include "infunc/interactive.hpp"
#include "infunc/transcript.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace infunc {

/// A Boolean function of the sum of all measurements.
struct SumFunction {
    enum class Kind { Threshold, Interval };
    Kind kind = Kind::Threshold;
    std::int64_t theta = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;

    static SumFunction threshold(std::int64_t t) { return {Kind::Threshold, t, 0, 0}; }
    static SumFunction interval(std::int64_t lo, std::int64_t hi) {
        if (lo < 0 || lo > hi) throw Error("interval must satisfy 0 <= a <= b");
        return {Kind::Interval, 0, lo, hi};
    }

    Letter operator()(std::int64_t sum) const {
        if (kind == Kind::Threshold) return sum >= theta ? 1 : 0;
        return (sum >= a && sum <= b) ? 1 : 0;
    }

    /// The two-node reduction across an edge: sides carrying sums in [0, l_a] and [0, l_b].
    FunctionTable two_node(std::uint64_t l_a, std::uint64_t l_b) const {
        const SumFunction self = *this;
        return FunctionTable::tabulate({l_a + 1, l_b + 1}, 2, [self](std::span<const Letter> t) {
            return self(static_cast<std::int64_t>(t[0]) + static_cast<std::int64_t>(t[1]));
        });
    }
};

/// l_i: the largest letter of node i.
inline std::vector<std::uint64_t> capacities(const NetworkGraph& g) {
    std::vector<std::uint64_t> l;
    for (NodeId v = 1; v <= g.node_count(); ++v) l.push_back(g.alphabet_size(v) - 1);
    return l;
}

inline std::uint64_t capacity_of(const std::vector<std::uint64_t>& l, std::span<const NodeId> nodes) {
    std::uint64_t s = 0;
    for (NodeId v : nodes) s += l[v - 1];
    return s;
}

/// Nodes reachable from `start` without using edge `removed` (sorted).
inline std::vector<NodeId> component_without(const NetworkGraph& g, NodeId start,
                                             std::optional<std::size_t> removed) {
    std::vector<bool> seen(g.node_count() + 1, false);
    std::vector<NodeId> stack{start}, out;
    seen[start] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            if (removed && i == *removed) continue;
            const auto& e = g.edges()[i];
            NodeId w = 0;
            if (e.from == v) w = e.to;
            else if (e.to == v) w = e.from;
            if (w != 0 && !seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct EdgeCutProfile {
    std::size_t edge = 0;
    std::vector<NodeId> side;    // A_e: the component holding edges()[edge].to
    std::uint64_t l_side = 0;    // l_{A_e}
    std::uint64_t l_rest = 0;    // l_{V \ A_e}
    Log2Rate complexity;
    std::optional<Log2Rate> lower;  // interval only: verified fooling-set size
};

inline void require_undirected_tree(const NetworkGraph& g) {
    if (g.kind() != GraphKind::UndirectedTree) throw Error("expected an undirected tree");
}

inline std::vector<EdgeCutProfile> edge_complexities(const NetworkGraph& g, std::int64_t theta) {
    require_undirected_tree(g);
    const auto l = capacities(g);
    const auto total = capacity_of(l, complement_of(g.node_count(), {}));
    if (theta < 0 || theta > static_cast<std::int64_t>(total) + 1)
        throw Error("threshold must satisfy 0 <= theta <= l_V + 1");
    std::vector<EdgeCutProfile> out;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        EdgeCutProfile p;
        p.edge = i;
        p.side = component_without(g, g.edges()[i].to, i);
        p.l_side = capacity_of(l, p.side);
        p.l_rest = total - p.l_side;
        p.complexity = threshold_complexity(ThresholdSpec(p.l_side, p.l_rest, theta));
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<EdgeCutProfile> interval_edge_complexities(const NetworkGraph& g, std::int64_t a,
                                                              std::int64_t b) {
    require_undirected_tree(g);
    const auto l = capacities(g);
    const auto total = capacity_of(l, complement_of(g.node_count(), {}));
    if (a < 0 || a > b) throw Error("interval must satisfy 0 <= a <= b");
    if (2 * b > static_cast<std::int64_t>(total)) throw Error("tree interval protocol requires b <= l_V / 2");
    std::vector<EdgeCutProfile> out;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        EdgeCutProfile p;
        p.edge = i;
        p.side = component_without(g, g.edges()[i].to, i);
        p.l_side = capacity_of(l, p.side);
        p.l_rest = total - p.l_side;
        const auto bounds = interval_bounds(IntervalSpec(std::min(p.l_side, p.l_rest),
                                                         std::max(p.l_side, p.l_rest), a, b));
        p.complexity = bounds.upper;
        p.lower = bounds.lower;
        out.push_back(std::move(p));
    }
    return out;
}

/// Node minimizing the heaviest component left after its removal (weights l_i; ties: smallest id).
inline NodeId weighted_centroid(const NetworkGraph& g) {
    require_undirected_tree(g);
    const auto l = capacities(g);
    NodeId best = 1;
    std::uint64_t best_weight = ~std::uint64_t{0};
    for (NodeId r = 1; r <= g.node_count(); ++r) {
        std::uint64_t heaviest = 0;
        for (NodeId w : g.neighbors(r)) {
            const auto e = *g.edge_index(r, w);
            heaviest = std::max(heaviest, capacity_of(l, component_without(g, w, e)));
        }
        if (heaviest < best_weight) {
            best = r;
            best_weight = heaviest;
        }
    }
    return best;
}

/// Rooted orchestration of the tree: parents, edges to parents, and pass orders.
struct ScheduledProtocol {
    NodeId root = 1;
    std::vector<NodeId> parent;               // parent[v]; 0 for the root (index 0 unused)
    std::vector<std::size_t> parent_edge;     // edge index to parent
    std::vector<std::vector<NodeId>> children;
    std::vector<NodeId> upward;               // children before parents
    std::vector<NodeId> downward;             // parents before children
    std::vector<std::uint64_t> subtree_capacity;
};

inline ScheduledProtocol schedule(const NetworkGraph& g, NodeId root) {
    require_undirected_tree(g);
    if (root < 1 || root > g.node_count()) throw Error("root id out of range");
    const std::size_t n = g.node_count();
    ScheduledProtocol s;
    s.root = root;
    s.parent.assign(n + 1, 0);
    s.parent_edge.assign(n + 1, 0);
    s.children.assign(n + 1, {});
    s.subtree_capacity.assign(n + 1, 0);
    std::vector<bool> seen(n + 1, false);
    std::vector<NodeId> queue{root};
    seen[root] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const NodeId v = queue[i];
        for (NodeId w : g.neighbors(v)) {
            if (seen[w]) continue;
            seen[w] = true;
            s.parent[w] = v;
            s.parent_edge[w] = *g.edge_index(v, w);
            s.children[v].push_back(w);
            queue.push_back(w);
        }
    }
    s.downward = queue;
    s.upward.assign(queue.rbegin(), queue.rend());
    for (NodeId v : s.upward) {
        s.subtree_capacity[v] += g.alphabet_size(v) - 1;
        if (v != root) s.subtree_capacity[s.parent[v]] += s.subtree_capacity[v];
    }
    return s;
}

struct TreeProtocolRun {
    NodeId root = 1;
    ProtocolTranscript transcript;
    std::vector<Letter> expected;
    std::vector<std::vector<Letter>> decoded;  // decoded[v-1]
    bool zero_error = false;
    /// ceil(N log2 weight) of the per-edge scheme actually used.
    std::vector<std::uint64_t> edge_budget;
};

namespace detail {

struct EdgeLink {
    std::unique_ptr<TwoNodeScheme> scheme;
    std::unique_ptr<PrefixCodebook> book;
};

}  // namespace detail

/// Runs the two-pass protocol for any sum-dependent Boolean function.
inline TreeProtocolRun run_tree_sum_protocol(const NetworkGraph& g, const SumFunction& fn, NodeId root,
                                             const Block& block) {
    require_undirected_tree(g);
    const std::size_t n = g.node_count();
    const std::size_t len = block.length();
    if (block.node_count() != n) throw Error("block does not cover every node");
    if (len == 0) throw Error("block length must be positive");
    for (NodeId v = 1; v <= n; ++v)
        for (auto x : block.sequences[v - 1])
            if (x >= g.alphabet_size(v)) throw Error("block letter outside node alphabet");

    const auto sched = schedule(g, root);
    const std::uint64_t total = sched.subtree_capacity[root];
    TreeProtocolRun run;
    run.root = root;
    run.transcript = ProtocolTranscript(len, g.edges().size());
    run.edge_budget.assign(g.edges().size(), 0);

    std::vector<detail::EdgeLink> link(n + 1);
    for (NodeId v = 1; v <= n; ++v) {
        if (v == root) continue;
        const auto l_a = sched.subtree_capacity[v];
        link[v].scheme = std::make_unique<TwoNodeScheme>(fn.two_node(l_a, total - l_a), 0);
        link[v].book = std::make_unique<PrefixCodebook>(link[v].scheme->codebook(len));
        run.edge_budget[sched.parent_edge[v]] = link[v].book->worst_case_total();
    }

    // Upward pass. partial[v]: own letter plus the representatives received from children.
    std::vector<std::vector<std::int64_t>> partial(n + 1, std::vector<std::int64_t>(len, 0));
    std::vector<std::vector<std::uint32_t>> received(n + 1);  // classes as decoded by the parent
    for (NodeId v : sched.upward) {
        for (std::size_t t = 0; t < len; ++t) partial[v][t] += block.sequences[v - 1][t];
        if (v == root) continue;
        const auto& scheme = *link[v].scheme;
        std::vector<std::uint32_t> classes(len);
        for (std::size_t t = 0; t < len; ++t)
            classes[t] = static_cast<std::uint32_t>(scheme.classes().class_of(static_cast<Letter>(partial[v][t])));
        BitString word = link[v].book->encode(classes);
        const NodeId p = sched.parent[v];
        run.transcript.send(v, p, sched.parent_edge[v], word);

        BitReader reader(word);
        received[v] = link[v].book->decode(reader);
        if (reader.remaining() != 0) throw Error("upward message has trailing bits");
        for (std::size_t t = 0; t < len; ++t) partial[p][t] += scheme.representative(received[v][t]);
    }

    // Root evaluates; downward pass sends replies at ambiguous instances.
    run.decoded.assign(n, std::vector<Letter>(len, 0));
    for (std::size_t t = 0; t < len; ++t) run.decoded[root - 1][t] = fn(partial[root][t]);
    for (NodeId v : sched.downward) {
        if (v == root) continue;
        const NodeId p = sched.parent[v];
        const auto& scheme = *link[v].scheme;
        BitString reply;
        for (std::size_t t = 0; t < len; ++t)
            if (scheme.kind(received[v][t]) == ClassKind::Ambiguous) reply.push_back(run.decoded[p - 1][t] != 0);
        run.transcript.send(p, v, sched.parent_edge[v], reply);

        BitReader back(reply);
        for (std::size_t t = 0; t < len; ++t) {
            const auto cls = scheme.classes().class_of(static_cast<Letter>(partial[v][t]));
            switch (scheme.kind(cls)) {
                case ClassKind::AlwaysZero: run.decoded[v - 1][t] = 0; break;
                case ClassKind::AlwaysOne: run.decoded[v - 1][t] = 1; break;
                case ClassKind::Ambiguous: run.decoded[v - 1][t] = back.read_bit() ? 1 : 0; break;
            }
        }
    }

    run.expected.resize(len);
    for (std::size_t t = 0; t < len; ++t) {
        std::int64_t s = 0;
        for (NodeId v = 1; v <= n; ++v) s += block.sequences[v - 1][t];
        run.expected[t] = fn(s);
    }
    run.zero_error = std::all_of(run.decoded.begin(), run.decoded.end(),
                                 [&](const std::vector<Letter>& d) { return d == run.expected; });
    return run;
}

inline TreeProtocolRun run_tree_protocol(const NetworkGraph& g, std::int64_t theta, NodeId root,
                                         const Block& block) {
    const auto l = capacities(g);
    const auto total = capacity_of(l, complement_of(g.node_count(), {}));
    if (theta < 0 || theta > static_cast<std::int64_t>(total) + 1)
        throw Error("threshold must satisfy 0 <= theta <= l_V + 1");
    return run_tree_sum_protocol(g, SumFunction::threshold(theta), root, block);
}

/// Interval version. Every subtree hanging below the root must be the lighter side of its edge,
/// which a weighted centroid root guarantees.
inline TreeProtocolRun run_tree_interval_protocol(const NetworkGraph& g, std::int64_t a, std::int64_t b,
                                                  NodeId root, const Block& block) {
    require_undirected_tree(g);
    const auto fn = SumFunction::interval(a, b);
    const auto sched = schedule(g, root);
    const auto total = sched.subtree_capacity[root];
    if (2 * b > static_cast<std::int64_t>(total)) throw Error("tree interval protocol requires b <= l_V / 2");
    for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v == root) continue;
        if (2 * sched.subtree_capacity[v] > total)
            throw Error("root " + std::to_string(root) + " leaves subtree of node " + std::to_string(v) +
                        " heavier than the rest of the tree; use a weighted centroid root");
    }
    return run_tree_sum_protocol(g, fn, root, block);
}

struct EdgeOptimality {
    std::size_t edge = 0;
    Log2Rate complexity;          // closed form for the edge
    std::uint64_t fooling_size = 0;
    bool fooling_verified = false;
    std::uint64_t scheme_weight = 0;  // 2a+u of the subtree-first scheme, for every root
    bool match = false;
};

inline std::vector<EdgeOptimality> verify_edge_optimality(const NetworkGraph& g, std::int64_t theta) {
    const auto profiles = edge_complexities(g, theta);
    std::vector<EdgeOptimality> out;
    for (const auto& p : profiles) {
        EdgeOptimality r;
        r.edge = p.edge;
        r.complexity = p.complexity;
        const ThresholdSpec spec(p.l_side, p.l_rest, theta);
        const auto z = fooling_bound_threshold(spec);
        r.fooling_size = z.size();
        r.fooling_verified = z.verified;
        const auto fn = SumFunction::threshold(theta);
        const auto w_side = TwoNodeScheme(fn.two_node(p.l_side, p.l_rest), 0).rate().argument;
        const auto w_rest = TwoNodeScheme(fn.two_node(p.l_rest, p.l_side), 0).rate().argument;
        r.scheme_weight = std::max(w_side, w_rest);
        r.match = r.fooling_verified && r.fooling_size == p.complexity.argument && w_side == w_rest &&
                  w_side == p.complexity.argument;
        out.push_back(r);
    }
    return out;
}

}  // namespace infunc
