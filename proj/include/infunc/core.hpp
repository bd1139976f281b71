#pragma once

// Shared domain model: alphabets, function tables, distributions, graphs,
// measurement blocks and cut enumeration. Node ids are 1-based throughout;
// node i is argument i-1 of a function table.

#include "infunc/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace infunc {

using Letter = std::uint32_t;
using NodeId = std::size_t;
using Tuple = std::vector<Letter>;
using RateVector = std::vector<double>;

inline constexpr std::size_t kDefaultCutCap = 16;
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

struct Alphabet {
    std::size_t size = 1;

    explicit Alphabet(std::size_t s = 1) : size(s) {
        if (s == 0) throw Error("alphabet size must be at least 1");
    }
    bool operator==(const Alphabet&) const = default;
};

/// Row-major mixed-radix indexing over a product of alphabets (last digit fastest).
class ProductSpace {
public:
    ProductSpace() = default;
    explicit ProductSpace(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
        total_ = 1;
        for (auto r : radices_) {
            if (r == 0) throw Error("zero radix in product space");
            if (total_ > (std::uint64_t{1} << 62) / r) throw Error("product space too large");
            total_ *= r;
        }
    }

    std::uint64_t size() const { return total_; }
    std::size_t dims() const { return radices_.size(); }
    const std::vector<std::size_t>& radices() const { return radices_; }

    std::uint64_t index(std::span<const Letter> tuple) const {
        if (tuple.size() != radices_.size()) throw Error("tuple arity mismatch");
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < radices_.size(); ++i) {
            if (tuple[i] >= radices_[i]) throw Error("letter outside alphabet");
            idx = idx * radices_[i] + tuple[i];
        }
        return idx;
    }

    Tuple tuple(std::uint64_t index) const {
        Tuple t(radices_.size());
        for (std::size_t i = radices_.size(); i-- > 0;) {
            t[i] = static_cast<Letter>(index % radices_[i]);
            index /= radices_[i];
        }
        return t;
    }

    /// Advances a tuple in lexicographic order; false once it wraps around.
    bool next(Tuple& t) const {
        for (std::size_t i = radices_.size(); i-- > 0;) {
            if (++t[i] < radices_[i]) return true;
            t[i] = 0;
        }
        return false;
    }

private:
    std::vector<std::size_t> radices_;
    std::uint64_t total_ = 1;
};

/// Total function from a product of finite alphabets to {0, ..., range_size-1}.
class FunctionTable {
public:
    FunctionTable(std::vector<std::size_t> alphabet_sizes, std::size_t range_size,
                  std::vector<Letter> values)
        : space_(std::move(alphabet_sizes)), range_size_(range_size), values_(std::move(values)) {
        if (space_.dims() == 0) throw Error("function arity must be positive");
        if (range_size_ == 0) throw Error("range size must be positive");
        if (values_.size() != space_.size())
            throw Error("function table has " + std::to_string(values_.size()) +
                        " values, expected " + std::to_string(space_.size()));
        for (auto v : values_)
            if (v >= range_size_) throw Error("function value outside range");
    }

    template <typename Fn>
    static FunctionTable tabulate(std::vector<std::size_t> alphabet_sizes, std::size_t range_size,
                                  Fn&& fn) {
        ProductSpace space(alphabet_sizes);
        std::vector<Letter> values;
        values.reserve(space.size());
        Tuple t(space.dims(), 0);
        do {
            values.push_back(static_cast<Letter>(fn(std::span<const Letter>(t))));
        } while (space.next(t));
        return FunctionTable(std::move(alphabet_sizes), range_size, std::move(values));
    }

    std::size_t arity() const { return space_.dims(); }
    std::size_t range_size() const { return range_size_; }
    const std::vector<std::size_t>& alphabet_sizes() const { return space_.radices(); }
    const ProductSpace& space() const { return space_; }
    const std::vector<Letter>& values() const { return values_; }

    Letter operator()(std::span<const Letter> args) const { return values_[space_.index(args)]; }
    Letter at(std::uint64_t flat_index) const { return values_[flat_index]; }

    bool operator==(const FunctionTable&) const = default;

private:
    ProductSpace space_;
    std::size_t range_size_;
    std::vector<Letter> values_;
};

namespace builtin {

inline std::uint64_t letter_sum(std::span<const Letter> t) {
    return std::accumulate(t.begin(), t.end(), std::uint64_t{0});
}

inline FunctionTable logical_and(std::vector<std::size_t> sizes) {
    return FunctionTable::tabulate(std::move(sizes), 2, [](std::span<const Letter> t) {
        return std::all_of(t.begin(), t.end(), [](Letter x) { return x != 0; }) ? 1u : 0u;
    });
}

inline FunctionTable parity(std::vector<std::size_t> sizes, std::size_t modulus) {
    if (modulus == 0) throw Error("parity modulus must be positive");
    return FunctionTable::tabulate(std::move(sizes), modulus, [modulus](std::span<const Letter> t) {
        return letter_sum(t) % modulus;
    });
}

inline FunctionTable maximum(std::vector<std::size_t> sizes) {
    const auto range = *std::max_element(sizes.begin(), sizes.end());
    return FunctionTable::tabulate(std::move(sizes), range, [](std::span<const Letter> t) {
        return *std::max_element(t.begin(), t.end());
    });
}

inline FunctionTable minimum(std::vector<std::size_t> sizes) {
    const auto range = *std::min_element(sizes.begin(), sizes.end());
    return FunctionTable::tabulate(std::move(sizes), range, [](std::span<const Letter> t) {
        return *std::min_element(t.begin(), t.end());
    });
}

inline FunctionTable arithmetic_sum(std::vector<std::size_t> sizes) {
    std::size_t range = 1;
    for (auto s : sizes) range += s - 1;
    return FunctionTable::tabulate(std::move(sizes), range,
                                   [](std::span<const Letter> t) { return letter_sum(t); });
}

inline FunctionTable sum_threshold(std::vector<std::size_t> sizes, std::int64_t theta) {
    return FunctionTable::tabulate(std::move(sizes), 2, [theta](std::span<const Letter> t) {
        return static_cast<std::int64_t>(letter_sum(t)) >= theta ? 1u : 0u;
    });
}

inline FunctionTable sum_interval(std::vector<std::size_t> sizes, std::int64_t a, std::int64_t b) {
    return FunctionTable::tabulate(std::move(sizes), 2, [a, b](std::span<const Letter> t) {
        const auto s = static_cast<std::int64_t>(letter_sum(t));
        return (a <= s && s <= b) ? 1u : 0u;
    });
}

/// The whole tuple as a single letter; useful for "compute everything" examples.
inline FunctionTable identity(std::vector<std::size_t> sizes) {
    ProductSpace space(sizes);
    const auto range = static_cast<std::size_t>(space.size());
    return FunctionTable::tabulate(std::move(sizes), range, [space](std::span<const Letter> t) {
        return space.index(t);
    });
}

inline FunctionTable constant(std::vector<std::size_t> sizes, Letter value = 0) {
    return FunctionTable::tabulate(std::move(sizes), value + 1,
                                   [value](std::span<const Letter>) { return value; });
}

}  // namespace builtin

/// Exact joint distribution over the argument space of a function table.
class JointDistribution {
public:
    JointDistribution(std::vector<std::size_t> alphabet_sizes, std::vector<Rational> probabilities)
        : space_(std::move(alphabet_sizes)), probabilities_(std::move(probabilities)) {
        if (probabilities_.size() != space_.size()) throw Error("distribution size mismatch");
        Rational total = 0;
        for (const auto& p : probabilities_) {
            if (p < 0) throw Error("negative probability");
            total += p;
        }
        if (total != 1) throw Error("probabilities sum to " + to_string(total) + ", not 1");
    }

    static JointDistribution uniform(std::vector<std::size_t> alphabet_sizes) {
        ProductSpace space(alphabet_sizes);
        Rational p(BigInt(1), BigInt(space.size()));
        return JointDistribution(std::move(alphabet_sizes),
                                 std::vector<Rational>(space.size(), p));
    }

    /// Product of independent per-coordinate marginals.
    static JointDistribution independent(const std::vector<std::vector<Rational>>& marginals) {
        std::vector<std::size_t> sizes;
        for (const auto& m : marginals) sizes.push_back(m.size());
        ProductSpace space(sizes);
        std::vector<Rational> probs;
        probs.reserve(space.size());
        Tuple t(sizes.size(), 0);
        do {
            Rational p = 1;
            for (std::size_t i = 0; i < t.size(); ++i) p *= marginals[i][t[i]];
            probs.push_back(p);
        } while (space.next(t));
        return JointDistribution(std::move(sizes), std::move(probs));
    }

    const ProductSpace& space() const { return space_; }
    const std::vector<std::size_t>& alphabet_sizes() const { return space_.radices(); }
    const Rational& operator()(std::span<const Letter> t) const { return probabilities_[space_.index(t)]; }
    const Rational& at(std::uint64_t flat_index) const { return probabilities_[flat_index]; }
    const std::vector<Rational>& probabilities() const { return probabilities_; }

    bool strictly_positive() const {
        return std::all_of(probabilities_.begin(), probabilities_.end(),
                           [](const Rational& p) { return p > 0; });
    }

private:
    ProductSpace space_;
    std::vector<Rational> probabilities_;
};

enum class GraphKind { DirectedTree, Dag, UndirectedTree, UndirectedGeneral };

inline std::string to_string(GraphKind k) {
    switch (k) {
        case GraphKind::DirectedTree: return "directed-tree";
        case GraphKind::Dag: return "dag";
        case GraphKind::UndirectedTree: return "undirected-tree";
        case GraphKind::UndirectedGeneral: return "undirected-general";
    }
    return "unknown";
}

inline GraphKind parse_graph_kind(const std::string& s) {
    if (s == "directed-tree") return GraphKind::DirectedTree;
    if (s == "dag") return GraphKind::Dag;
    if (s == "undirected-tree") return GraphKind::UndirectedTree;
    if (s == "undirected-general") return GraphKind::UndirectedGeneral;
    throw Error("unknown graph kind '" + s + "'");
}

struct Edge {
    NodeId from;
    NodeId to;
    bool operator==(const Edge&) const = default;
};

/// Directed tree, DAG, or undirected graph on nodes 1..n with per-node alphabets.
class NetworkGraph {
public:
    NetworkGraph(GraphKind kind, std::size_t n, std::vector<Edge> edges,
                 std::vector<std::size_t> alphabet_sizes = {}, NodeId collector = 1)
        : kind_(kind), n_(n), edges_(std::move(edges)), alphabet_sizes_(std::move(alphabet_sizes)),
          collector_(collector) {
        if (n_ == 0) throw Error("graph must have at least one node");
        if (alphabet_sizes_.empty()) alphabet_sizes_.assign(n_, 2);
        if (alphabet_sizes_.size() != n_) throw Error("alphabet_sizes length must equal n");
        for (auto s : alphabet_sizes_)
            if (s == 0) throw Error("alphabet size must be at least 1");
        if (collector_ < 1 || collector_ > n_) throw Error("collector id out of range");
        for (const auto& e : edges_) {
            if (e.from < 1 || e.from > n_ || e.to < 1 || e.to > n_)
                throw Error("edge endpoint out of range");
            if (e.from == e.to) throw Error("self-loop edges are not allowed");
        }
        validate();
    }

    GraphKind kind() const { return kind_; }
    bool directed() const { return kind_ == GraphKind::DirectedTree || kind_ == GraphKind::Dag; }
    std::size_t node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& alphabet_sizes() const { return alphabet_sizes_; }
    std::size_t alphabet_size(NodeId v) const { return alphabet_sizes_[v - 1]; }
    NodeId collector() const { return collector_; }

    std::vector<std::size_t> out_edges(NodeId v) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].from == v) out.push_back(i);
        return out;
    }

    std::vector<NodeId> in_neighbors(NodeId v) const {
        std::vector<NodeId> in;
        for (const auto& e : edges_)
            if (e.to == v) in.push_back(e.from);
        return in;
    }

    std::vector<NodeId> neighbors(NodeId v) const {
        std::vector<NodeId> out;
        for (const auto& e : edges_) {
            if (e.from == v) out.push_back(e.to);
            if (e.to == v) out.push_back(e.from);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// The unique out-neighbour of a non-collector node in a directed tree.
    NodeId parent(NodeId v) const {
        for (const auto& e : edges_)
            if (e.from == v) return e.to;
        throw Error("node " + std::to_string(v) + " has no outgoing edge");
    }

    std::optional<std::size_t> edge_index(NodeId a, NodeId b) const {
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            if (e.from == a && e.to == b) return i;
            if (!directed() && e.from == b && e.to == a) return i;
        }
        return std::nullopt;
    }

    /// Sources first, collector last (directed graphs only).
    std::vector<NodeId> topological_order() const {
        std::vector<std::size_t> indeg(n_ + 1, 0);
        for (const auto& e : edges_) ++indeg[e.to];
        std::vector<NodeId> order, ready;
        for (NodeId v = 1; v <= n_; ++v)
            if (indeg[v] == 0) ready.push_back(v);
        while (!ready.empty()) {
            std::sort(ready.begin(), ready.end(), std::greater<>());
            const NodeId v = ready.back();
            ready.pop_back();
            order.push_back(v);
            for (const auto& e : edges_)
                if (e.from == v && --indeg[e.to] == 0) ready.push_back(e.to);
        }
        return order;
    }

    bool connected() const {
        std::vector<bool> seen(n_ + 1, false);
        std::vector<NodeId> stack{1};
        seen[1] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (const auto& e : edges_) {
                NodeId w = 0;
                if (e.from == v) w = e.to;
                else if (e.to == v) w = e.from;
                if (w != 0 && !seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n_;
    }

private:
    void validate() const {
        switch (kind_) {
            case GraphKind::DirectedTree: {
                for (NodeId v = 1; v <= n_; ++v) {
                    const auto outdeg = out_edges(v).size();
                    if (v == collector_ && outdeg != 0)
                        throw Error("directed tree: collector must have out-degree 0");
                    if (v != collector_ && outdeg != 1)
                        throw Error("directed tree: node " + std::to_string(v) +
                                    " must have out-degree exactly 1");
                }
                if (topological_order().size() != n_) throw Error("directed tree contains a cycle");
                break;
            }
            case GraphKind::Dag: {
                if (topological_order().size() != n_) throw Error("dag contains a cycle");
                for (NodeId v = 1; v <= n_; ++v) {
                    const auto outdeg = out_edges(v).size();
                    if (v == collector_ && outdeg != 0)
                        throw Error("dag: collector must have only incoming edges");
                    if (v != collector_ && outdeg == 0)
                        throw Error("dag: collector must be the unique sink, but node " +
                                    std::to_string(v) + " has no outgoing edge");
                }
                break;
            }
            case GraphKind::UndirectedTree:
                if (edges_.size() != n_ - 1 || !connected())
                    throw Error("undirected tree must be connected with n-1 edges");
                break;
            case GraphKind::UndirectedGeneral:
                if (!connected()) throw Error("undirected graph must be connected");
                break;
        }
    }

    GraphKind kind_;
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> alphabet_sizes_;
    NodeId collector_;
};

/// N instances of every node's measurement; sequences[v-1] belongs to node v.
struct Block {
    std::vector<std::vector<Letter>> sequences;

    Block() = default;
    explicit Block(std::vector<std::vector<Letter>> seqs) : sequences(std::move(seqs)) {
        if (sequences.empty()) throw Error("block needs at least one node");
        const auto n = sequences.front().size();
        if (n == 0) throw Error("block length must be positive");
        for (const auto& s : sequences)
            if (s.size() != n) throw Error("all block sequences must have identical length");
    }

    std::size_t length() const { return sequences.empty() ? 0 : sequences.front().size(); }
    std::size_t node_count() const { return sequences.size(); }

    Tuple instance(std::size_t t) const {
        Tuple x(sequences.size());
        for (std::size_t v = 0; v < sequences.size(); ++v) x[v] = sequences[v][t];
        return x;
    }
};

/// Every node with a directed path to `node`, including `node` itself (sorted).
inline std::vector<NodeId> descendant_set(const NetworkGraph& g, NodeId node) {
    if (!g.directed()) throw Error("descendant_set requires a directed tree or dag");
    if (node < 1 || node > g.node_count()) throw Error("unknown node id " + std::to_string(node));
    std::vector<bool> seen(g.node_count() + 1, false);
    std::vector<NodeId> stack{node};
    seen[node] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : g.in_neighbors(v)) {
            if (!seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
        }
    }
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= g.node_count(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

struct Cut {
    std::vector<NodeId> source_side;      // S; never contains the collector
    std::vector<NodeId> collector_side;   // V \ S
    std::vector<std::size_t> crossing;    // edge indices: delta+(S) or the full crossing set F
};

/// All 2^(n-1)-1 cuts (S, V\S) with the collector on the V\S side.
inline std::vector<Cut> enumerate_cuts(const NetworkGraph& g, NodeId collector,
                                       std::size_t cap = kDefaultCutCap) {
    const std::size_t n = g.node_count();
    if (n > cap)
        throw Error("cut enumeration over " + std::to_string(n) + " nodes exceeds cap " +
                    std::to_string(cap));
    if (collector < 1 || collector > n) throw Error("unknown collector id");
    std::vector<NodeId> others;
    for (NodeId v = 1; v <= n; ++v)
        if (v != collector) others.push_back(v);

    std::vector<Cut> cuts;
    const std::uint64_t subsets = std::uint64_t{1} << others.size();
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        Cut c;
        std::vector<bool> in_s(n + 1, false);
        for (std::size_t i = 0; i < others.size(); ++i)
            if (mask >> i & 1) in_s[others[i]] = true;
        for (NodeId v = 1; v <= n; ++v) (in_s[v] ? c.source_side : c.collector_side).push_back(v);
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            const auto& e = g.edges()[i];
            const bool forward = in_s[e.from] && !in_s[e.to];
            const bool backward = !in_s[e.from] && in_s[e.to];
            if (forward || (!g.directed() && backward)) c.crossing.push_back(i);
        }
        cuts.push_back(std::move(c));
    }
    return cuts;
}

inline void validate_rates(const RateVector& r) {
    for (double x : r)
        if (!(x >= 0.0)) throw Error("rate entries must be non-negative");
}

/// Restricts an assignment to a subset of nodes (1-based ids).
inline Tuple restrict_to(std::span<const Letter> full, std::span<const NodeId> nodes) {
    Tuple t;
    t.reserve(nodes.size());
    for (NodeId v : nodes) t.push_back(full[v - 1]);
    return t;
}

inline std::vector<std::size_t> sizes_of(const std::vector<std::size_t>& all,
                                         std::span<const NodeId> nodes) {
    std::vector<std::size_t> out;
    out.reserve(nodes.size());
    for (NodeId v : nodes) out.push_back(all[v - 1]);
    return out;
}

inline std::vector<NodeId> complement_of(std::size_t n, std::span<const NodeId> nodes) {
    std::vector<bool> in(n + 1, false);
    for (NodeId v : nodes) in[v] = true;
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= n; ++v)
        if (!in[v]) out.push_back(v);
    return out;
}

/// Combines assignments of two disjoint node sets into a full assignment.
inline Tuple merge_assignment(std::size_t n, std::span<const NodeId> a_nodes,
                              std::span<const Letter> a_vals, std::span<const NodeId> b_nodes,
                              std::span<const Letter> b_vals) {
    Tuple full(n, 0);
    for (std::size_t i = 0; i < a_nodes.size(); ++i) full[a_nodes[i] - 1] = a_vals[i];
    for (std::size_t i = 0; i < b_nodes.size(); ++i) full[b_nodes[i] - 1] = b_vals[i];
    return full;
}

}  // namespace infunc
