#pragma once

#include "infunc/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace infunc {

/// A sequence of bits as actually put on a link.
class BitString {
public:
    BitString() = default;

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }

    void push_back(bool b) { bits_.push_back(b ? 1 : 0); }

    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    /// Appends `width` bits of `value`, most significant first.
    void append_uint(const BigInt& value, std::size_t width) {
        if (width < (value == 0 ? 0 : boost::multiprecision::msb(value) + 1))
            throw Error("value does not fit in the requested bit width");
        for (std::size_t i = width; i-- > 0;) push_back(boost::multiprecision::bit_test(value, i));
    }

    std::string str() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

class BitReader {
public:
    explicit BitReader(const BitString& bits) : bits_(&bits) {}

    bool read_bit() {
        if (pos_ >= bits_->size()) throw Error("read past end of bit string");
        return (*bits_)[pos_++];
    }

    BigInt read_uint(std::size_t width) {
        BigInt v = 0;
        for (std::size_t i = 0; i < width; ++i) {
            v <<= 1;
            if (read_bit()) v |= 1;
        }
        return v;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }

private:
    const BitString* bits_;
    std::size_t pos_ = 0;
};

/// Packs a sequence of digits in [0, radix) into ceil(len * log2 radix) bits.
inline BitString pack_mixed_radix(std::span<const std::uint32_t> digits, std::uint64_t radix) {
    if (radix == 0) throw Error("radix must be positive");
    BigInt value = 0;
    for (auto d : digits) {
        if (d >= radix) throw Error("digit exceeds radix");
        value = value * radix + d;
    }
    BitString out;
    out.append_uint(value, ceil_block_log2(radix, digits.size()));
    return out;
}

inline std::vector<std::uint32_t> unpack_mixed_radix(BitReader& reader, std::size_t count,
                                                     std::uint64_t radix) {
    BigInt value = reader.read_uint(ceil_block_log2(radix, count));
    std::vector<std::uint32_t> digits(count, 0);
    for (std::size_t i = count; i-- > 0;) {
        digits[i] = static_cast<std::uint32_t>(value % radix);
        value /= radix;
    }
    if (value != 0) throw Error("mixed-radix payload out of range");
    return digits;
}

}  // namespace infunc
