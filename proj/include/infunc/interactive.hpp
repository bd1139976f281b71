#pragma once

// One-round interactive block protocols for two nodes computing a Boolean
// function. The speaker sends a prefix codeword for its sequence of letter
// classes; the listener replies with the function value at every instance
// whose class does not already determine it.

#include "infunc/bits.hpp"
#include "infunc/core.hpp"
#include "infunc/transcript.hpp"
#include "infunc/two_node_coding.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace infunc {

/// Implicit canonical prefix code on all length-N sequences over k symbols.
/// A sequence with w ambiguous symbols gets length L - w, so that the
/// codeword plus the replies always costs exactly L bits.
class PrefixCodebook {
public:
    struct Tier {
        std::size_t ambiguous = 0;  // w
        std::size_t length = 0;     // L - w
        BigInt count;               // C(N,w) a^w u^(N-w)
        BigInt first;               // first canonical codeword value
    };

    PrefixCodebook(std::vector<bool> ambiguous, std::size_t block)
        : ambiguous_(std::move(ambiguous)), block_(block) {
        if (ambiguous_.empty()) throw Error("codebook needs at least one symbol");
        if (block_ == 0) throw Error("block length must be positive");
        for (bool b : ambiguous_) (b ? a_ : u_) += 1;
        amb_below_.assign(ambiguous_.size() + 1, 0);
        unamb_below_.assign(ambiguous_.size() + 1, 0);
        for (std::size_t c = 0; c < ambiguous_.size(); ++c) {
            amb_below_[c + 1] = amb_below_[c] + (ambiguous_[c] ? 1 : 0);
            unamb_below_[c + 1] = unamb_below_[c] + (ambiguous_[c] ? 0 : 1);
        }
        apow_.assign(block_ + 1, BigInt(1));
        upow_.assign(block_ + 1, BigInt(1));
        for (std::size_t j = 1; j <= block_; ++j) {
            apow_[j] = apow_[j - 1] * a_;
            upow_[j] = upow_[j - 1] * u_;
        }
        total_ = ceil_block_log2(weight(), block_);

        // Tiers in order of increasing length (decreasing w).
        for (std::size_t w = block_ + 1; w-- > 0;) {
            BigInt count = binomial(block_, w) * apow_[w] * upow_[block_ - w];
            if (count == 0) continue;
            if (w > total_) throw Error("codebook length function is infeasible");
            tiers_.push_back({w, total_ - w, std::move(count), BigInt(0)});
        }
        BigInt next = 0;
        for (std::size_t t = 0; t < tiers_.size(); ++t) {
            if (t > 0) next <<= (tiers_[t].length - tiers_[t - 1].length);
            tiers_[t].first = next;
            next += tiers_[t].count;
            if (next > (BigInt(1) << tiers_[t].length))
                throw Error("codebook violates the Kraft inequality");
        }
    }

    std::size_t block_length() const { return block_; }
    std::size_t symbol_count() const { return ambiguous_.size(); }
    std::size_t ambiguous_symbols() const { return a_; }
    std::size_t unambiguous_symbols() const { return u_; }
    bool is_ambiguous(std::uint32_t symbol) const { return ambiguous_.at(symbol); }
    /// 2a + u: the per-instance Kraft weight.
    std::uint64_t weight() const { return 2 * a_ + u_; }
    /// L: worst-case total bits (codeword plus replies) for one block.
    std::uint64_t worst_case_total() const { return total_; }
    const std::vector<Tier>& tiers() const { return tiers_; }

    std::size_t ambiguous_in(std::span<const std::uint32_t> seq) const {
        std::size_t w = 0;
        for (auto s : seq) w += ambiguous_.at(s) ? 1 : 0;
        return w;
    }

    std::size_t length_of(std::span<const std::uint32_t> seq) const {
        check(seq);
        return total_ - ambiguous_in(seq);
    }

    BitString encode(std::span<const std::uint32_t> seq) const {
        check(seq);
        const std::size_t w = ambiguous_in(seq);
        const Tier& tier = tier_for(w);
        BitString out;
        out.append_uint(tier.first + rank(seq, w), tier.length);
        return out;
    }

    std::vector<std::uint32_t> decode(BitReader& reader) const {
        BigInt v = 0;
        std::size_t len = 0;
        for (const auto& tier : tiers_) {
            while (len < tier.length) {
                v = (v << 1) + (reader.read_bit() ? 1 : 0);
                ++len;
            }
            if (v >= tier.first && v < tier.first + tier.count) return unrank(v - tier.first, tier.ambiguous);
        }
        throw Error("bit string is not a codeword");
    }

    /// Exact sum of 2^-l over every sequence.
    Rational kraft_sum() const {
        Rational s = 0;
        for (const auto& t : tiers_) s += Rational(t.count, BigInt(1) << t.length);
        return s;
    }

    /// Checks sum 2^-l == (2a+u)^N / 2^L, the multinomial identity behind the lengths.
    bool kraft_identity() const {
        const BigInt lhs = boost::multiprecision::pow(BigInt(weight()), static_cast<unsigned>(block_));
        return kraft_sum() == Rational(lhs, BigInt(1) << total_) && kraft_sum() <= 1;
    }

private:
    void check(std::span<const std::uint32_t> seq) const {
        if (seq.size() != block_) throw Error("sequence length does not match codebook block length");
        for (auto s : seq)
            if (s >= ambiguous_.size()) throw Error("symbol outside codebook alphabet");
    }

    const Tier& tier_for(std::size_t w) const {
        for (const auto& t : tiers_)
            if (t.ambiguous == w) return t;
        throw Error("no codebook tier for this sequence");
    }

    // Completions of rem positions with kk ambiguous, after fixing one position.
    std::pair<BigInt, BigInt> branch_counts(const BigInt& c_rem_kk, std::size_t rem, std::size_t kk) const {
        BigInt amb = 0, unamb = 0;
        if (kk >= 1) amb = c_rem_kk * kk / rem * apow_[kk - 1] * upow_[rem - kk];
        if (rem - 1 >= kk) unamb = c_rem_kk * (rem - kk) / rem * apow_[kk] * upow_[rem - 1 - kk];
        return {amb, unamb};
    }

    BigInt rank(std::span<const std::uint32_t> seq, std::size_t w) const {
        BigInt r = 0;
        BigInt c = binomial(block_, w);
        std::size_t kk = w;
        for (std::size_t i = 0; i < block_; ++i) {
            const std::size_t rem = block_ - i;
            const auto x = seq[i];
            auto [amb, unamb] = branch_counts(c, rem, kk);
            r += amb * amb_below_[x] + unamb * unamb_below_[x];
            if (ambiguous_[x]) {
                c = c * kk / rem;
                --kk;
            } else {
                c = c * (rem - kk) / rem;
            }
        }
        return r;
    }

    std::vector<std::uint32_t> unrank(BigInt r, std::size_t w) const {
        std::vector<std::uint32_t> seq(block_, 0);
        BigInt c = binomial(block_, w);
        std::size_t kk = w;
        for (std::size_t i = 0; i < block_; ++i) {
            const std::size_t rem = block_ - i;
            auto [amb, unamb] = branch_counts(c, rem, kk);
            std::uint32_t chosen = 0;
            bool found = false;
            for (std::uint32_t s = 0; s < ambiguous_.size(); ++s) {
                const BigInt& size = ambiguous_[s] ? amb : unamb;
                if (r < size) {
                    chosen = s;
                    found = true;
                    break;
                }
                r -= size;
            }
            if (!found) throw Error("codeword rank out of range");
            seq[i] = chosen;
            if (ambiguous_[chosen]) {
                c = c * kk / rem;
                --kk;
            } else {
                c = c * (rem - kk) / rem;
            }
        }
        return seq;
    }

    std::vector<bool> ambiguous_;
    std::size_t block_ = 0;
    std::size_t a_ = 0, u_ = 0;
    std::vector<std::size_t> amb_below_, unamb_below_;
    std::vector<BigInt> apow_, upow_;
    std::uint64_t total_ = 0;
    std::vector<Tier> tiers_;
};

enum class ClassKind { AlwaysZero, AlwaysOne, Ambiguous };

/// Separation + coding scheme for a Boolean two-argument function and a chosen speaker.
class TwoNodeScheme {
public:
    TwoNodeScheme(FunctionTable f, std::size_t speaker) : f_(std::move(f)), speaker_(speaker) {
        if (f_.arity() != 2) throw Error("two-node scheme expects a two-argument function");
        if (f_.range_size() > 2) throw Error("two-node scheme expects a Boolean function");
        if (speaker_ > 1) throw Error("speaker must be 0 or 1");
        classes_ = optimal_partition(f_, speaker_);
        for (const auto& cls : classes_.classes()) {
            const auto sig = signature(f_, speaker_, cls.front());
            const bool all0 = std::all_of(sig.begin(), sig.end(), [](Letter v) { return v == 0; });
            const bool all1 = std::all_of(sig.begin(), sig.end(), [](Letter v) { return v == 1; });
            kinds_.push_back(all0 ? ClassKind::AlwaysZero : all1 ? ClassKind::AlwaysOne : ClassKind::Ambiguous);
        }
    }

    const FunctionTable& function() const { return f_; }
    std::size_t speaker() const { return speaker_; }
    std::size_t listener() const { return 1 - speaker_; }
    const Partition& classes() const { return classes_; }
    ClassKind kind(std::size_t cls) const { return kinds_.at(cls); }
    /// Representative letter of a class (its smallest member).
    Letter representative(std::size_t cls) const { return classes_.classes().at(cls).front(); }

    std::size_t reduced_size() const { return classes_.size(); }
    std::size_t always_zero() const { return count(ClassKind::AlwaysZero); }
    std::size_t always_one() const { return count(ClassKind::AlwaysOne); }
    std::size_t ambiguous() const { return count(ClassKind::Ambiguous); }
    /// log2(2l - |A0| - |A1|).
    Log2Rate rate() const { return {2 * reduced_size() - always_zero() - always_one()}; }

    std::vector<bool> ambiguity_mask() const {
        std::vector<bool> m;
        for (auto k : kinds_) m.push_back(k == ClassKind::Ambiguous);
        return m;
    }

    PrefixCodebook codebook(std::size_t block) const { return PrefixCodebook(ambiguity_mask(), block); }

    Letter evaluate(Letter speaker_letter, Letter listener_letter) const {
        Tuple t = speaker_ == 0 ? Tuple{speaker_letter, listener_letter} : Tuple{listener_letter, speaker_letter};
        return f_(t);
    }

private:
    std::size_t count(ClassKind k) const {
        return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
    }

    FunctionTable f_;
    std::size_t speaker_ = 0;
    Partition classes_;
    std::vector<ClassKind> kinds_;
};

struct TwoNodeRun {
    ProtocolTranscript transcript;
    std::vector<Letter> expected;
    std::vector<Letter> at_node1;
    std::vector<Letter> at_node2;
    std::size_t speaker_bits = 0;
    std::size_t reply_bits = 0;
    bool zero_error = false;

    std::size_t total_bits() const { return speaker_bits + reply_bits; }
};

/// Runs one block. x1, x2 are the blocks held by nodes 1 and 2.
inline TwoNodeRun run_two_node(const TwoNodeScheme& scheme, const PrefixCodebook& book,
                               std::span<const Letter> x1, std::span<const Letter> x2) {
    const std::size_t n = book.block_length();
    if (x1.size() != n || x2.size() != n) throw Error("block length does not match codebook");
    const auto& sizes = scheme.function().alphabet_sizes();
    for (std::size_t t = 0; t < n; ++t)
        if (x1[t] >= sizes[0] || x2[t] >= sizes[1]) throw Error("block letter outside alphabet");
    const auto xs = scheme.speaker() == 0 ? x1 : x2;
    const auto xl = scheme.speaker() == 0 ? x2 : x1;
    const NodeId speaker_node = scheme.speaker() + 1;
    const NodeId listener_node = scheme.listener() + 1;

    TwoNodeRun run;
    run.transcript = ProtocolTranscript(n, 1);

    std::vector<std::uint32_t> classes(n);
    for (std::size_t t = 0; t < n; ++t) classes[t] = static_cast<std::uint32_t>(scheme.classes().class_of(xs[t]));
    BitString word = book.encode(classes);
    run.speaker_bits = word.size();
    run.transcript.send(speaker_node, listener_node, 0, word);

    // Listener side.
    BitReader reader(word);
    const auto received = book.decode(reader);
    if (reader.remaining() != 0) throw Error("speaker message has trailing bits");
    std::vector<Letter> at_listener(n);
    BitString reply;
    for (std::size_t t = 0; t < n; ++t) {
        at_listener[t] = scheme.evaluate(scheme.representative(received[t]), xl[t]);
        if (scheme.kind(received[t]) == ClassKind::Ambiguous) reply.push_back(at_listener[t] != 0);
    }
    run.reply_bits = reply.size();
    run.transcript.send(listener_node, speaker_node, 0, reply);

    // Speaker side.
    BitReader back(reply);
    std::vector<Letter> at_speaker(n);
    for (std::size_t t = 0; t < n; ++t) {
        switch (scheme.kind(classes[t])) {
            case ClassKind::AlwaysZero: at_speaker[t] = 0; break;
            case ClassKind::AlwaysOne: at_speaker[t] = 1; break;
            case ClassKind::Ambiguous: at_speaker[t] = back.read_bit() ? 1 : 0; break;
        }
    }

    run.expected.resize(n);
    for (std::size_t t = 0; t < n; ++t) run.expected[t] = scheme.function()(Tuple{x1[t], x2[t]});
    run.at_node1 = scheme.speaker() == 0 ? at_speaker : at_listener;
    run.at_node2 = scheme.speaker() == 0 ? at_listener : at_speaker;
    run.zero_error = run.at_node1 == run.expected && run.at_node2 == run.expected;
    return run;
}

// ---------------------------------------------------------------------------
// AND

inline TwoNodeScheme and_scheme() { return TwoNodeScheme(builtin::logical_and({2, 2}), 0); }

inline TwoNodeRun and_protocol(std::size_t block, std::span<const Letter> x1, std::span<const Letter> x2) {
    const auto scheme = and_scheme();
    return run_two_node(scheme, scheme.codebook(block), x1, x2);
}

// ---------------------------------------------------------------------------
// Sum-threshold and sum-interval

struct ThresholdSpec {
    std::uint64_t m1 = 1;
    std::uint64_t m2 = 1;
    std::int64_t theta = 1;

    ThresholdSpec() = default;
    ThresholdSpec(std::uint64_t a, std::uint64_t b, std::int64_t t) : m1(a), m2(b), theta(t) { validate(); }

    std::uint64_t n() const { return m1 + m2; }
    bool canonical() const { return m1 <= m2; }
    void validate() const {
        if (theta < 0 || theta > static_cast<std::int64_t>(n()) + 1)
            throw Error("threshold must satisfy 0 <= theta <= m1 + m2 + 1");
    }
    FunctionTable function() const { return builtin::sum_threshold({m1 + 1, m2 + 1}, theta); }
};

struct IntervalSpec {
    std::uint64_t m1 = 1;
    std::uint64_t m2 = 1;
    std::int64_t a = 0;
    std::int64_t b = 0;

    IntervalSpec() = default;
    IntervalSpec(std::uint64_t x, std::uint64_t y, std::int64_t lo, std::int64_t hi) : m1(x), m2(y), a(lo), b(hi) {
        validate();
    }

    std::uint64_t n() const { return m1 + m2; }
    void validate() const {
        if (a < 0 || a > b) throw Error("interval must satisfy 0 <= a <= b");
    }
    FunctionTable function() const { return builtin::sum_interval({m1 + 1, m2 + 1}, a, b); }
};

/// Range [lo, hi] to which the speaker's letter may be clipped without changing the threshold value.
struct ClipRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    Letter apply(std::int64_t x) const { return static_cast<Letter>(std::clamp(x, lo, hi)); }
};

inline ClipRange threshold_clip(std::uint64_t m_speaker, std::uint64_t m_listener, std::int64_t theta) {
    ClipRange c;
    c.lo = std::max<std::int64_t>(0, theta - static_cast<std::int64_t>(m_listener) - 1);
    c.hi = std::min<std::int64_t>(static_cast<std::int64_t>(m_speaker), theta);
    if (c.lo > c.hi) c.lo = c.hi;
    return c;
}

inline Log2Rate threshold_complexity(const ThresholdSpec& s) {
    s.validate();
    const std::int64_t n = static_cast<std::int64_t>(s.n());
    const std::int64_t m = static_cast<std::int64_t>(std::min(s.m1, s.m2));
    const std::int64_t v = std::min({2 * s.theta + 1, 2 * m + 2, 2 * (n - s.theta + 1) + 1});
    return {static_cast<std::uint64_t>(v)};
}

inline TwoNodeScheme threshold_scheme(const ThresholdSpec& s, std::size_t first_speaker) {
    s.validate();
    return TwoNodeScheme(s.function(), first_speaker);
}

inline PrefixCodebook threshold_codebook(const ThresholdSpec& s, std::size_t block, std::size_t first_speaker) {
    return threshold_scheme(s, first_speaker).codebook(block);
}

inline TwoNodeRun run_threshold_protocol(const ThresholdSpec& s, std::size_t block, std::span<const Letter> x1,
                                         std::span<const Letter> x2, std::size_t first_speaker) {
    const auto scheme = threshold_scheme(s, first_speaker);
    return run_two_node(scheme, scheme.codebook(block), x1, x2);
}

struct FoolingSet {
    std::vector<std::pair<Letter, Letter>> columns;
    bool verified = false;

    std::size_t size() const { return columns.size(); }
    /// N log2 |Z|: the induced lower bound on a block of length N.
    double bound(std::size_t block) const {
        return static_cast<double>(block) * std::log2(static_cast<double>(size()));
    }
    Log2Rate rate() const { return {size()}; }
};

/// Pairwise fooling test: equal values must be broken by one of the two crossed elements.
inline bool is_fooling_pair(const FunctionTable& f, std::pair<Letter, Letter> p, std::pair<Letter, Letter> q) {
    const Letter v1 = f(Tuple{p.first, p.second});
    const Letter v2 = f(Tuple{q.first, q.second});
    if (v1 != v2) return true;
    return f(Tuple{p.first, q.second}) != v1 || f(Tuple{q.first, p.second}) != v1;
}

inline bool verify_fooling_set(const FunctionTable& f, const std::vector<std::pair<Letter, Letter>>& z) {
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (z[i] == z[j] || !is_fooling_pair(f, z[i], z[j])) return false;
    return true;
}

/// Block-level check: every pair of distinct N-column matrices over Z is fooling for f^N.
inline bool verify_block_fooling_set(const FunctionTable& f, const std::vector<std::pair<Letter, Letter>>& z,
                                     std::size_t block, std::uint64_t cap = kDefaultEnumerationCap) {
    ProductSpace space(std::vector<std::size_t>(block, z.size()));
    if (space.size() > cap) throw Error("block fooling-set enumeration exceeds cap");
    const auto total = space.size();
    std::vector<std::vector<Letter>> value(total, std::vector<Letter>(block));
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto idx = space.tuple(i);
        for (std::size_t t = 0; t < block; ++t) value[i][t] = f(Tuple{z[idx[t]].first, z[idx[t]].second});
    }
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto a = space.tuple(i);
        for (std::uint64_t j = i + 1; j < total; ++j) {
            if (value[i] != value[j]) continue;
            const auto b = space.tuple(j);
            bool broken = false;
            for (std::size_t t = 0; t < block && !broken; ++t) {
                if (f(Tuple{z[a[t]].first, z[b[t]].second}) != value[i][t] ||
                    f(Tuple{z[b[t]].first, z[a[t]].second}) != value[i][t])
                    broken = true;
            }
            if (!broken) return false;
        }
    }
    return true;
}

inline FoolingSet fooling_bound_threshold(const ThresholdSpec& s) {
    s.validate();
    FoolingSet z;
    for (std::int64_t z1 = 0; z1 <= static_cast<std::int64_t>(s.m1); ++z1) {
        for (std::int64_t z2 = 0; z2 <= static_cast<std::int64_t>(s.m2); ++z2) {
            const auto sum = z1 + z2;
            if (sum == s.theta - 1 || sum == s.theta)
                z.columns.emplace_back(static_cast<Letter>(z1), static_cast<Letter>(z2));
        }
    }
    if (z.columns.empty()) z.columns.emplace_back(0, 0);
    z.verified = verify_fooling_set(s.function(), z.columns);
    return z;
}

inline FoolingSet fooling_bound_interval(const IntervalSpec& s) {
    s.validate();
    FoolingSet z;
    const auto m1 = static_cast<std::int64_t>(s.m1);
    const auto m2 = static_cast<std::int64_t>(s.m2);
    for (std::int64_t z1 = 0; z1 <= m1; ++z1) {
        const auto z2 = s.b - z1;
        if (z2 >= 0 && z2 <= m2) z.columns.emplace_back(static_cast<Letter>(z1), static_cast<Letter>(z2));
    }
    std::int64_t taken = 0;
    for (std::int64_t z1 = 0; z1 <= m1 && taken < s.b - s.a + 2; ++z1) {
        const auto z2 = s.b + 1 - z1;
        if (z2 >= 0 && z2 <= m2) {
            z.columns.emplace_back(static_cast<Letter>(z1), static_cast<Letter>(z2));
            ++taken;
        }
    }
    if (z.columns.empty()) z.columns.emplace_back(0, 0);
    z.verified = verify_fooling_set(s.function(), z.columns);
    return z;
}

struct IntervalBounds {
    Log2Rate lower;  // size of the verified fooling set
    Log2Rate upper;  // min(2(b+1)+1, 2 m1 + 2)
    FoolingSet fooling;

    double gap() const { return upper.value() - lower.value(); }
};

inline IntervalBounds interval_bounds(const IntervalSpec& s) {
    s.validate();
    if (2 * s.b > static_cast<std::int64_t>(s.n()))
        throw Error("interval bounds require b <= (m1 + m2) / 2");
    IntervalBounds r;
    r.fooling = fooling_bound_interval(s);
    r.lower = r.fooling.rate();
    const auto m = static_cast<std::int64_t>(std::min(s.m1, s.m2));
    r.upper = {static_cast<std::uint64_t>(std::min(2 * (s.b + 1) + 1, 2 * m + 2))};
    return r;
}

/// The smaller side speaks first (ties: node 1).
inline TwoNodeScheme interval_scheme(const IntervalSpec& s) {
    s.validate();
    return TwoNodeScheme(s.function(), s.m2 < s.m1 ? 1 : 0);
}

inline TwoNodeRun run_interval_protocol(const IntervalSpec& s, std::size_t block, std::span<const Letter> x1,
                                        std::span<const Letter> x2) {
    const auto scheme = interval_scheme(s);
    return run_two_node(scheme, scheme.codebook(block), x1, x2);
}

/// Checks that f depends on x1 + x2 only and is Boolean, then builds the node-1-first scheme.
inline TwoNodeScheme general_separation_coding(const FunctionTable& f) {
    if (f.arity() != 2) throw Error("general separation coding expects a two-argument function");
    if (f.range_size() > 2) throw Error("general separation coding expects a Boolean function");
    const auto& sizes = f.alphabet_sizes();
    std::vector<std::optional<Letter>> by_sum(sizes[0] + sizes[1] - 1);
    for (Letter x1 = 0; x1 < sizes[0]; ++x1) {
        for (Letter x2 = 0; x2 < sizes[1]; ++x2) {
            const Letter v = f(Tuple{x1, x2});
            auto& slot = by_sum[x1 + x2];
            if (slot && *slot != v) throw Error("function does not depend only on x1 + x2");
            slot = v;
        }
    }
    return TwoNodeScheme(f, 0);
}

}  // namespace infunc
