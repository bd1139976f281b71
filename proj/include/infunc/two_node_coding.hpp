#pragma once

// One-way two-node coding: optimal partitions of one argument's alphabet,
// the probability-restricted compatibility relation, Huffman codes on the
// induced class distribution, and block extension.

#include "infunc/core.hpp"
#include "infunc/prefix_code.hpp"

#include <map>
#include <optional>
#include <vector>

namespace infunc {

/// Division of {0..ground_size-1} into classes ordered by their minimum element.
class Partition {
public:
    Partition() = default;

    /// Builds the canonical partition from arbitrary per-letter labels.
    static Partition from_labels(const std::vector<std::size_t>& labels) {
        Partition p;
        p.class_of_.assign(labels.size(), 0);
        std::map<std::size_t, std::size_t> remap;
        for (std::size_t x = 0; x < labels.size(); ++x) {
            auto [it, inserted] = remap.emplace(labels[x], p.classes_.size());
            if (inserted) p.classes_.emplace_back();
            p.classes_[it->second].push_back(static_cast<Letter>(x));
            p.class_of_[x] = it->second;
        }
        return p;
    }

    static Partition from_classes(std::size_t ground_size, std::vector<std::vector<Letter>> classes) {
        std::vector<std::size_t> labels(ground_size, static_cast<std::size_t>(-1));
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (classes[c].empty()) throw Error("partition classes must be non-empty");
            for (auto x : classes[c]) {
                if (x >= ground_size) throw Error("partition letter outside ground set");
                if (labels[x] != static_cast<std::size_t>(-1)) throw Error("partition classes overlap");
                labels[x] = c;
            }
        }
        for (auto l : labels)
            if (l == static_cast<std::size_t>(-1)) throw Error("partition does not cover the ground set");
        return from_labels(labels);
    }

    std::size_t ground_size() const { return class_of_.size(); }
    std::size_t size() const { return classes_.size(); }
    const std::vector<std::vector<Letter>>& classes() const { return classes_; }
    std::size_t class_of(Letter x) const { return class_of_.at(x); }

    /// True when every class of *this lies inside a single class of `coarser`.
    bool refines(const Partition& coarser) const {
        if (coarser.ground_size() != ground_size()) return false;
        for (const auto& cls : classes_)
            for (auto x : cls)
                if (coarser.class_of(x) != coarser.class_of(cls.front())) return false;
        return true;
    }

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<Letter>> classes_;
    std::vector<std::size_t> class_of_;
};

/// Value of f seen as a function of all other arguments, for letter x of `side`.
inline std::vector<Letter> signature(const FunctionTable& f, std::size_t side, Letter x) {
    const auto& sizes = f.alphabet_sizes();
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (i != side) rest.push_back(sizes[i]);
    ProductSpace rest_space(rest);
    std::vector<Letter> sig;
    sig.reserve(rest_space.size());
    Tuple r(rest.size(), 0);
    Tuple full(sizes.size(), 0);
    do {
        for (std::size_t i = 0, j = 0; i < sizes.size(); ++i) full[i] = (i == side) ? x : r[j++];
        sig.push_back(f(full));
    } while (rest_space.next(r));
    return sig;
}

/// Letters share a class iff f agrees on them against every value of the other arguments.
inline Partition optimal_partition(const FunctionTable& f, std::size_t side) {
    if (side >= f.arity()) throw Error("side index out of range");
    std::map<std::vector<Letter>, std::size_t> seen;
    std::vector<std::size_t> labels;
    for (Letter x = 0; x < f.alphabet_sizes()[side]; ++x) {
        auto [it, _] = seen.emplace(signature(f, side, x), seen.size());
        labels.push_back(it->second);
    }
    return Partition::from_labels(labels);
}

struct SupportedRelation {
    /// related[a][b]: f(a, y) == f(b, y) for every y with p(a,y)p(b,y) > 0.
    std::vector<std::vector<bool>> related;
    bool transitive = true;
    /// Present whenever the relation is an equivalence (always under full support).
    std::optional<Partition> partition;
};

inline SupportedRelation optimal_partition_supported(const FunctionTable& f, std::size_t side,
                                                     const JointDistribution& p) {
    if (f.arity() != 2) throw Error("optimal_partition_supported expects a two-argument function");
    if (side > 1) throw Error("side must be 0 or 1");
    if (p.alphabet_sizes() != f.alphabet_sizes()) throw Error("distribution does not match function");
    const std::size_t nx = f.alphabet_sizes()[side];
    const std::size_t ny = f.alphabet_sizes()[1 - side];
    auto at = [&](Letter x, Letter y) {
        Tuple t = side == 0 ? Tuple{x, y} : Tuple{y, x};
        return std::pair{f(t), p(t) > 0};
    };
    SupportedRelation rel;
    rel.related.assign(nx, std::vector<bool>(nx, true));
    for (Letter a = 0; a < nx; ++a) {
        for (Letter b = 0; b < nx; ++b) {
            for (Letter y = 0; y < ny; ++y) {
                auto [fa, pa] = at(a, y);
                auto [fb, pb] = at(b, y);
                if (pa && pb && fa != fb) {
                    rel.related[a][b] = false;
                    break;
                }
            }
        }
    }
    for (std::size_t a = 0; a < nx && rel.transitive; ++a)
        for (std::size_t b = 0; b < nx && rel.transitive; ++b)
            for (std::size_t c = 0; c < nx && rel.transitive; ++c)
                if (rel.related[a][b] && rel.related[b][c] && !rel.related[a][c]) rel.transitive = false;
    if (rel.transitive) {
        std::vector<std::size_t> labels(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            labels[x] = x;
            for (std::size_t y = 0; y < x; ++y) {
                if (rel.related[x][y]) {
                    labels[x] = labels[y];
                    break;
                }
            }
        }
        rel.partition = Partition::from_labels(labels);
    }
    return rel;
}

/// q_i = total probability of the letters of class i (summed over all other arguments).
inline std::vector<Rational> induced_distribution(const Partition& part, std::size_t side,
                                                  const JointDistribution& p) {
    std::vector<Rational> q(part.size(), Rational(0));
    const auto& space = p.space();
    Tuple t(space.dims(), 0);
    std::uint64_t idx = 0;
    do {
        q[part.class_of(t[side])] += p.at(idx++);
    } while (space.next(t));
    return q;
}

/// Binary Huffman code. Ties merge the subtree with the smaller minimum class label first.
inline PrefixCode huffman_code(const std::vector<Rational>& q) {
    if (q.empty()) throw Error("huffman_code needs at least one symbol");
    Rational total = 0;
    for (const auto& x : q) {
        if (x < 0) throw Error("negative probability");
        total += x;
    }
    if (total != 1) throw Error("huffman_code probabilities must sum to 1");
    const std::size_t k = q.size();
    std::vector<std::size_t> depth(k, 0);
    if (k == 1) return PrefixCode::canonical(depth);

    struct Node {
        Rational prob;
        std::size_t label;
        std::vector<std::size_t> leaves;
    };
    std::vector<Node> live;
    for (std::size_t i = 0; i < k; ++i) live.push_back({q[i], i, {i}});
    auto less = [](const Node& a, const Node& b) {
        return a.prob < b.prob || (a.prob == b.prob && a.label < b.label);
    };
    while (live.size() > 1) {
        std::sort(live.begin(), live.end(), less);
        Node merged{live[0].prob + live[1].prob, std::min(live[0].label, live[1].label), {}};
        for (int j = 0; j < 2; ++j)
            for (auto leaf : live[j].leaves) {
                ++depth[leaf];
                merged.leaves.push_back(leaf);
            }
        live.erase(live.begin(), live.begin() + 2);
        live.push_back(std::move(merged));
    }
    return PrefixCode::canonical(depth);
}

struct BlockPartitionReport {
    std::size_t single_classes = 0;
    std::size_t block_length = 0;
    BigInt block_classes;           // k^N
    std::uint64_t block_bits = 0;   // ceil(N log2 k)
    double rate = 0.0;              // block_bits / N
};

inline BlockPartitionReport block_partition(const FunctionTable& f, std::size_t side, std::size_t block) {
    if (block == 0) throw Error("block length must be positive");
    const auto k = optimal_partition(f, side).size();
    BlockPartitionReport r;
    r.single_classes = k;
    r.block_length = block;
    r.block_classes = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(block));
    r.block_bits = ceil_log2(r.block_classes);
    r.rate = static_cast<double>(r.block_bits) / static_cast<double>(block);
    return r;
}

}  // namespace infunc
