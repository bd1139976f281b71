#pragma once

// Encoder synthesis for directed trees. Each edge (v, parent(v)) carries an
// element of A_v: the distinct functions of the non-descendant variables that
// can be realized by fixing the descendants of v. Nodes re-encode what they
// receive by substituting nominal values, so the collector ends with f itself.

#include "infunc/bits.hpp"
#include "infunc/core.hpp"
#include "infunc/prefix_code.hpp"
#include "infunc/transcript.hpp"
#include "infunc/two_node_coding.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace infunc {

struct EdgeAlphabet {
    NodeId owner = 0;
    std::vector<NodeId> descendants;   // D(v), sorted
    std::vector<NodeId> complement;    // V \ D(v), sorted
    ProductSpace descendant_space;
    ProductSpace complement_space;
    /// Element id for every assignment of D(v) (indexed by its flat index).
    std::vector<std::size_t> class_of;
    /// Value vector of each element over the complement assignments.
    std::vector<std::vector<Letter>> elements;
    /// Lexicographically smallest realizing assignment of D(v) per element.
    std::vector<Tuple> nominal;

    std::size_t size() const { return elements.size(); }
    double worst_case_rate() const { return std::log2(static_cast<double>(size())); }
    std::uint64_t single_shot_bits() const { return ceil_log2(BigInt(size())); }

    std::size_t element_of(std::span<const Letter> descendant_values) const {
        return class_of[descendant_space.index(descendant_values)];
    }
};

inline void check_function_on_graph(const FunctionTable& f, const NetworkGraph& g) {
    if (f.arity() != g.node_count())
        throw Error("function arity " + std::to_string(f.arity()) + " does not match " +
                    std::to_string(g.node_count()) + " graph nodes");
    if (f.alphabet_sizes() != g.alphabet_sizes())
        throw Error("function alphabets do not match graph alphabet_sizes");
}

inline EdgeAlphabet edge_alphabet(const FunctionTable& f, const NetworkGraph& g, NodeId node,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
    if (g.kind() != GraphKind::DirectedTree && g.kind() != GraphKind::Dag)
        throw Error("edge_alphabet requires a directed graph");
    check_function_on_graph(f, g);
    EdgeAlphabet a;
    a.owner = node;
    a.descendants = descendant_set(g, node);
    a.complement = complement_of(g.node_count(), a.descendants);
    a.descendant_space = ProductSpace(sizes_of(g.alphabet_sizes(), a.descendants));
    a.complement_space = ProductSpace(sizes_of(g.alphabet_sizes(), a.complement));
    if (a.descendant_space.size() > cap || a.complement_space.size() > cap)
        throw Error("edge alphabet enumeration for node " + std::to_string(node) +
                    " exceeds cap of " + std::to_string(cap) + " tuples");

    std::map<std::vector<Letter>, std::size_t> ids;
    a.class_of.reserve(a.descendant_space.size());
    Tuple d(a.descendants.size(), 0);
    do {
        std::vector<Letter> h;
        h.reserve(a.complement_space.size());
        Tuple c(a.complement.size(), 0);
        do {
            h.push_back(f(merge_assignment(g.node_count(), a.descendants, d, a.complement, c)));
        } while (a.complement_space.next(c));
        auto [it, inserted] = ids.emplace(h, a.elements.size());
        if (inserted) {
            a.elements.push_back(std::move(h));
            a.nominal.push_back(d);
        }
        a.class_of.push_back(it->second);
    } while (a.descendant_space.next(d));
    return a;
}

/// Encoder of one non-collector node: (own letter, child codes in sorted child order) -> code.
struct NodeEncoder {
    std::size_t code_count = 1;
    std::function<std::size_t(Letter, std::span<const std::size_t>)> encode;
};

/// Encoders for nodes 2..n of a directed tree (entry v-1; the collector has none).
struct TreeEncoderSet {
    std::vector<std::optional<NodeEncoder>> encoders;

    const NodeEncoder& at(NodeId v) const {
        const auto& e = encoders.at(v - 1);
        if (!e) throw Error("no encoder for node " + std::to_string(v));
        return *e;
    }
};

inline std::vector<NodeId> sorted_children(const NetworkGraph& g, NodeId v) {
    auto c = g.in_neighbors(v);
    std::sort(c.begin(), c.end());
    return c;
}

/// The optimal encoder set built from the edge alphabets, plus the collector decoder.
class TreeCode {
public:
    TreeCode(const FunctionTable& f, const NetworkGraph& g, std::uint64_t cap = kDefaultEnumerationCap)
        : f_(f), g_(g) {
        if (g.kind() != GraphKind::DirectedTree) throw Error("TreeCode requires a directed tree");
        check_function_on_graph(f, g);
        alphabets_.resize(g.node_count());
        encoders_.encoders.resize(g.node_count());
        for (NodeId v = 1; v <= g.node_count(); ++v) {
            if (v == g.collector()) continue;
            alphabets_[v - 1] = edge_alphabet(f, g, v, cap);
        }
        for (NodeId v = 1; v <= g.node_count(); ++v) {
            if (v == g.collector()) continue;
            NodeEncoder enc;
            enc.code_count = alphabets_[v - 1]->size();
            enc.encode = [this, v](Letter own, std::span<const std::size_t> child_codes) {
                return encode(v, own, child_codes);
            };
            encoders_.encoders[v - 1] = std::move(enc);
        }
    }

    TreeCode(const TreeCode&) = delete;
    TreeCode& operator=(const TreeCode&) = delete;

    const EdgeAlphabet& alphabet(NodeId v) const {
        const auto& a = alphabets_.at(v - 1);
        if (!a) throw Error("the collector has no outgoing edge alphabet");
        return *a;
    }
    const TreeEncoderSet& encoders() const { return encoders_; }
    const NetworkGraph& graph() const { return g_; }
    const FunctionTable& function() const { return f_; }

    /// Element of A_v sent by v given its letter and the elements received from its children.
    std::size_t encode(NodeId v, Letter own, std::span<const std::size_t> child_codes) const {
        const auto& a = alphabet(v);
        const Tuple full = substitute(v, own, child_codes);
        return a.element_of(restrict_to(full, a.descendants));
    }

    /// Collector decoder: f with the collector's letter and nominal values for everything else.
    Letter decode(Letter own, std::span<const std::size_t> child_codes) const {
        return f_(substitute(g_.collector(), own, child_codes));
    }

    /// Per-edge worst-case rates log2|A_v| indexed by edge.
    RateVector worst_case_rates() const {
        RateVector r(g_.edges().size(), 0.0);
        for (NodeId v = 1; v <= g_.node_count(); ++v)
            if (v != g_.collector()) r[g_.out_edges(v).front()] = alphabet(v).worst_case_rate();
        return r;
    }

private:
    Tuple substitute(NodeId v, Letter own, std::span<const std::size_t> child_codes) const {
        const auto children = sorted_children(g_, v);
        if (children.size() != child_codes.size()) throw Error("wrong number of child codes");
        Tuple full(g_.node_count(), 0);
        full[v - 1] = own;
        for (std::size_t i = 0; i < children.size(); ++i) {
            const auto& ca = alphabet(children[i]);
            const auto& nom = ca.nominal.at(child_codes[i]);
            for (std::size_t j = 0; j < ca.descendants.size(); ++j) full[ca.descendants[j] - 1] = nom[j];
        }
        return full;
    }

    const FunctionTable& f_;
    const NetworkGraph& g_;
    std::vector<std::optional<EdgeAlphabet>> alphabets_;
    TreeEncoderSet encoders_;
};

/// Codes sent on every edge (entry v-1 is the code of node v) for one assignment.
inline std::vector<std::size_t> tree_codes(const NetworkGraph& g, const TreeEncoderSet& enc,
                                           std::span<const Letter> assignment) {
    std::vector<std::size_t> code(g.node_count(), 0);
    for (NodeId v : g.topological_order()) {
        if (v == g.collector()) continue;
        std::vector<std::size_t> received;
        for (NodeId c : sorted_children(g, v)) received.push_back(code[c - 1]);
        code[v - 1] = enc.at(v).encode(assignment[v - 1], received);
    }
    return code;
}

struct TreeRunResult {
    std::vector<Letter> decoded;
    std::vector<Letter> expected;
    ProtocolTranscript transcript;
    bool zero_error = false;
};

/// Bottom-up block computation: each node packs its N element ids by mixed radix.
inline TreeRunResult run_tree_computation(const TreeCode& code, const Block& block) {
    const auto& g = code.graph();
    const auto& f = code.function();
    if (block.node_count() != g.node_count()) throw Error("block does not cover every node");
    const std::size_t n_inst = block.length();
    for (NodeId v = 1; v <= g.node_count(); ++v)
        for (auto x : block.sequences[v - 1])
            if (x >= g.alphabet_size(v)) throw Error("block letter outside node alphabet");

    TreeRunResult res;
    res.transcript = ProtocolTranscript(n_inst, g.edges().size());
    std::vector<BitString> inbox(g.node_count());  // message received from child v on its edge

    for (NodeId v : g.topological_order()) {
        const auto children = sorted_children(g, v);
        std::vector<std::vector<std::uint32_t>> child_ids;
        for (NodeId c : children) {
            BitReader reader(inbox[c - 1]);
            child_ids.push_back(unpack_mixed_radix(reader, n_inst, code.alphabet(c).size()));
        }
        std::vector<std::uint32_t> out(n_inst, 0);
        std::vector<std::size_t> received(children.size());
        for (std::size_t t = 0; t < n_inst; ++t) {
            for (std::size_t i = 0; i < children.size(); ++i) received[i] = child_ids[i][t];
            const Letter own = block.sequences[v - 1][t];
            out[t] = static_cast<std::uint32_t>(v == g.collector() ? code.decode(own, received)
                                                                   : code.encode(v, own, received));
        }
        if (v == g.collector()) {
            res.decoded.assign(out.begin(), out.end());
        } else {
            BitString bits = pack_mixed_radix(out, code.alphabet(v).size());
            res.transcript.send(v, g.parent(v), g.out_edges(v).front(), bits);
            inbox[v - 1] = std::move(bits);
        }
    }
    res.expected.reserve(n_inst);
    for (std::size_t t = 0; t < n_inst; ++t) res.expected.push_back(f(block.instance(t)));
    res.zero_error = res.decoded == res.expected;
    return res;
}

struct CutViolation {
    Cut cut;
    Tuple first;    // two supported assignments the cut's edges fail to separate
    Tuple second;
};

/// Checks that on every cut some edge leaving S separates supported assignments that f distinguishes.
inline std::vector<CutViolation> tree_cut_feasibility_check(const FunctionTable& f, const NetworkGraph& g,
                                                            const TreeEncoderSet& enc,
                                                            const JointDistribution& p,
                                                            std::size_t cut_cap = kDefaultCutCap) {
    if (g.kind() != GraphKind::DirectedTree) throw Error("cut feasibility check requires a directed tree");
    check_function_on_graph(f, g);
    if (p.alphabet_sizes() != f.alphabet_sizes()) throw Error("distribution does not match function");

    struct Supported {
        Tuple x;
        std::vector<std::size_t> codes;
        Letter value;
    };
    std::vector<Supported> support;
    Tuple x(g.node_count(), 0);
    std::uint64_t idx = 0;
    do {
        if (p.at(idx++) > 0) support.push_back({x, tree_codes(g, enc, x), f(x)});
    } while (f.space().next(x));

    std::vector<CutViolation> violations;
    for (const auto& cut : enumerate_cuts(g, g.collector(), cut_cap)) {
        // Key: (assignment outside S, codes on delta+(S)) -> first supported witness.
        std::map<std::pair<Tuple, std::vector<std::size_t>>, const Supported*> seen;
        for (const auto& s : support) {
            std::vector<std::size_t> crossing_codes;
            for (auto e : cut.crossing) crossing_codes.push_back(s.codes[g.edges()[e].from - 1]);
            auto key = std::pair{restrict_to(s.x, cut.collector_side), crossing_codes};
            auto [it, inserted] = seen.emplace(std::move(key), &s);
            if (!inserted && it->second->value != s.value) {
                violations.push_back({cut, it->second->x, s.x});
                break;
            }
        }
    }
    return violations;
}

struct TreeAverageEdge {
    NodeId node = 0;
    std::size_t edge = 0;
    std::vector<Rational> distribution;   // q_v over A_v
    double entropy = 0.0;                 // H(q_v)
    PrefixCode huffman;
    Rational expected_length;
};

inline std::vector<TreeAverageEdge> tree_average_rates(const TreeCode& code, const JointDistribution& p) {
    const auto& g = code.graph();
    if (p.alphabet_sizes() != g.alphabet_sizes()) throw Error("distribution does not match graph");
    if (!p.strictly_positive())
        throw Error("average-case tree rates need a strictly positive distribution; "
                    "zero-probability inputs couple the encoders");
    std::vector<TreeAverageEdge> out;
    for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v == g.collector()) continue;
        const auto& a = code.alphabet(v);
        TreeAverageEdge e;
        e.node = v;
        e.edge = g.out_edges(v).front();
        e.distribution.assign(a.size(), Rational(0));
        Tuple x(g.node_count(), 0);
        std::uint64_t idx = 0;
        do {
            e.distribution[a.element_of(restrict_to(x, a.descendants))] += p.at(idx++);
        } while (p.space().next(x));
        e.entropy = entropy_bits(e.distribution);
        e.huffman = huffman_code(e.distribution);
        e.expected_length = e.huffman.expected_length(e.distribution);
        out.push_back(std::move(e));
    }
    return out;
}

inline Block random_block(const std::vector<std::size_t>& alphabet_sizes, std::size_t length,
                          std::mt19937_64& rng) {
    std::vector<std::vector<Letter>> seqs(alphabet_sizes.size(), std::vector<Letter>(length));
    for (std::size_t v = 0; v < alphabet_sizes.size(); ++v)
        for (auto& x : seqs[v]) x = static_cast<Letter>(rng() % alphabet_sizes[v]);
    return Block(std::move(seqs));
}

}  // namespace infunc
