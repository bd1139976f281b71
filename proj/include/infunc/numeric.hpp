#pragma once

// Exact arithmetic helpers: big integers, rationals, and the handful of
// real-valued quantities (log2, entropy) that are reported as doubles.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace infunc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Tolerance used whenever a real-valued rate is compared to another.
inline constexpr double kRateTolerance = 1e-9;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw Error("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// Parses "p/q", "p", or a plain decimal literal such as "0.25" exactly.
inline Rational parse_rational(const std::string& text) {
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    // BigInt reads a leading 0 as octal, so digits are normalized first.
    auto integer = [](std::string d) {
        std::string sign;
        if (!d.empty() && (d[0] == '-' || d[0] == '+')) {
            if (d[0] == '-') sign = "-";
            d.erase(0, 1);
        }
        if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos) throw std::runtime_error("digits");
        const auto nz = d.find_first_not_of('0');
        return BigInt(sign + (nz == std::string::npos ? std::string("0") : d.substr(nz)));
    };
    const std::string s = trim(text);
    if (s.empty()) throw Error("empty rational literal");
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt num = integer(trim(s.substr(0, slash)));
            BigInt den = integer(trim(s.substr(slash + 1)));
            if (den == 0) throw Error("rational with zero denominator: " + s);
            return Rational(num, den);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            const auto frac_len = s.size() - dot - 1;
            if (digits.empty() || digits == "-") throw Error("bad decimal literal: " + s);
            BigInt num = integer(digits);
            BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_len));
            return Rational(num, den);
        }
        return Rational(integer(s));
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const Error*>(&e)) throw;
        throw Error("bad rational literal '" + s + "'");
    }
}

/// Every finite double is a dyadic rational; this conversion is exact.
inline Rational exact_rational(double value) {
    if (!std::isfinite(value)) throw Error("non-finite value cannot be made rational");
    int exponent = 0;
    double mantissa = std::frexp(value, &exponent);
    // 53 bits of mantissa.
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Rational r{BigInt(scaled)};
    if (exponent > 0) {
        r *= Rational(BigInt(1) << exponent);
    } else if (exponent < 0) {
        r /= Rational(BigInt(1) << -exponent);
    }
    return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double log2_of(const BigInt& value) {
    if (value <= 0) throw Error("log2 of a non-positive integer");
    const auto bits = boost::multiprecision::msb(value);
    if (bits < 1000) return std::log2(value.convert_to<double>());
    // Shift down so the conversion stays in range.
    const auto shift = bits - 60;
    BigInt top = value >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

/// Smallest L with 2^L >= value, i.e. ceil(log2(value)) computed exactly.
inline std::uint64_t ceil_log2(const BigInt& value) {
    if (value <= 0) throw Error("ceil_log2 of a non-positive integer");
    if (value == 1) return 0;
    const auto top = boost::multiprecision::msb(value);
    return (BigInt(1) << top) == value ? top : top + 1;
}

/// ceil(N * log2(base)) computed exactly as the smallest L with 2^L >= base^N.
inline std::uint64_t ceil_block_log2(std::uint64_t base, std::uint64_t block) {
    if (base == 0) throw Error("ceil_block_log2 of zero base");
    return ceil_log2(boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(block)));
}

/// Shannon entropy in bits of an exact distribution (zero entries skipped).
inline double entropy_bits(std::span<const Rational> probabilities) {
    double h = 0.0;
    for (const auto& q : probabilities) {
        if (q <= 0) continue;
        const double p = to_double(q);
        h -= p * std::log2(p);
    }
    return h;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

/// Rounds to six decimal places for reporting.
inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

/// A rate of the form log2(k) for a positive integer k.
struct Log2Rate {
    std::uint64_t argument = 1;

    double value() const { return std::log2(static_cast<double>(argument)); }
    std::string expression() const { return "log2(" + std::to_string(argument) + ")"; }
    /// ceil(N log2 k), exact.
    std::uint64_t block_bits(std::uint64_t block) const { return ceil_block_log2(argument, block); }

    auto operator<=>(const Log2Rate&) const = default;
};

}  // namespace infunc
