#pragma once

#include "infunc/bits.hpp"
#include "infunc/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace infunc {

struct Message {
    NodeId from = 0;
    NodeId to = 0;
    std::size_t edge = 0;
    BitString payload;
};

/// Every message exchanged while computing one block, with per-edge accounting.
class ProtocolTranscript {
public:
    ProtocolTranscript() = default;
    ProtocolTranscript(std::size_t block_length, std::size_t edge_count)
        : block_length_(block_length), edge_count_(edge_count) {}

    void send(NodeId from, NodeId to, std::size_t edge, BitString payload) {
        if (edge >= edge_count_) throw Error("message on unknown edge");
        messages_.push_back({from, to, edge, std::move(payload)});
    }

    std::size_t block_length() const { return block_length_; }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<Message>& messages() const { return messages_; }

    std::size_t bits_on_edge(std::size_t edge) const {
        std::size_t total = 0;
        for (const auto& m : messages_)
            if (m.edge == edge) total += m.payload.size();
        return total;
    }

    std::size_t bits_from(std::size_t edge, NodeId from) const {
        std::size_t total = 0;
        for (const auto& m : messages_)
            if (m.edge == edge && m.from == from) total += m.payload.size();
        return total;
    }

    std::vector<std::size_t> per_edge_bits() const {
        std::vector<std::size_t> out(edge_count_, 0);
        for (const auto& m : messages_) out[m.edge] += m.payload.size();
        return out;
    }

    std::size_t total_bits() const {
        std::size_t total = 0;
        for (const auto& m : messages_) total += m.payload.size();
        return total;
    }

    /// Bits per instance on each edge.
    RateVector rates() const {
        RateVector r(edge_count_, 0.0);
        const auto bits = per_edge_bits();
        for (std::size_t e = 0; e < edge_count_; ++e)
            r[e] = static_cast<double>(bits[e]) / static_cast<double>(block_length_);
        return r;
    }

    /// Adds another transcript's messages (e.g. a sub-block run on the same graph).
    void absorb(const ProtocolTranscript& other) {
        if (other.edge_count_ != edge_count_) throw Error("transcripts cover different graphs");
        messages_.insert(messages_.end(), other.messages_.begin(), other.messages_.end());
    }

    void set_block_length(std::size_t n) { block_length_ = n; }

private:
    std::size_t block_length_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<Message> messages_;
};

}  // namespace infunc
