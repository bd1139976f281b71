#pragma once

#include "infunc/bits.hpp"
#include "infunc/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace infunc {

/// Prefix-free code over symbols 0..k-1 described by its length function.
struct PrefixCode {
    std::vector<std::size_t> lengths;
    std::vector<BitString> codewords;

    std::size_t size() const { return lengths.size(); }

    Rational kraft_sum() const {
        Rational s = 0;
        for (auto l : lengths) s += Rational(BigInt(1), BigInt(1) << l);
        return s;
    }

    bool prefix_free() const {
        for (std::size_t i = 0; i < codewords.size(); ++i) {
            for (std::size_t j = 0; j < codewords.size(); ++j) {
                if (i == j) continue;
                const auto& a = codewords[i];
                const auto& b = codewords[j];
                if (a.size() > b.size()) continue;
                bool prefix = true;
                for (std::size_t t = 0; t < a.size() && prefix; ++t) prefix = a[t] == b[t];
                if (prefix) return false;
            }
        }
        return true;
    }

    Rational expected_length(const std::vector<Rational>& probabilities) const {
        Rational e = 0;
        for (std::size_t i = 0; i < lengths.size(); ++i) e += probabilities[i] * lengths[i];
        return e;
    }

    /// Canonical codeword assignment: symbols sorted by (length, index).
    static PrefixCode canonical(std::vector<std::size_t> lengths) {
        PrefixCode code;
        code.lengths = lengths;
        code.codewords.resize(lengths.size());
        if (code.kraft_sum() > 1) throw Error("length function violates the Kraft inequality");
        std::vector<std::size_t> order(lengths.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
        BigInt next = 0;
        std::size_t prev_len = order.empty() ? 0 : lengths[order.front()];
        for (auto sym : order) {
            next <<= (lengths[sym] - prev_len);
            prev_len = lengths[sym];
            code.codewords[sym].append_uint(next, lengths[sym]);
            ++next;
        }
        return code;
    }
};

}  // namespace infunc
