// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ENTROPY_FIXED_POINT_HPP
#define POEMLAB_ENTROPY_FIXED_POINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include <poemlab/errors.hpp>

namespace poemlab::entropy {

using U128 = boost::multiprecision::uint128_t;
using U256 = boost::multiprecision::uint256_t;
using U512 = boost::multiprecision::uint512_t;

/** Arbitrary-width unsigned integer, used for summed threshold weights. */
using WideInt = boost::multiprecision::cpp_int;

/** Number of fractional bits carried by every fixed-point weight. */
inline constexpr unsigned kFracBits = 64;

/**
 * Entropy reduction of a single block in bits, Q9.64. Values lie in
 * (0, 256], so 9 integer bits suffice. All arithmetic and comparison is
 * integer arithmetic on the raw representation; results are identical on
 * every platform.
 */
class IntrinsicWeight {
public:
    IntrinsicWeight() = default;

    static IntrinsicWeight from_raw(U128 raw) {
        IntrinsicWeight w;
        w.raw_ = raw;
        return w;
    }

    /** Whole-bit weight, e.g. a clamped threshold weight. */
    static IntrinsicWeight from_bits(unsigned bits) {
        return from_raw(U128(bits) << kFracBits);
    }

    U128 raw() const { return raw_; }

    /** Integer part: the whole leading-zero count. */
    unsigned floor_bits() const { return static_cast<unsigned>(raw_ >> kFracBits); }

    double to_double() const { return static_cast<double>(raw_) * 0x1p-64; }

    std::string to_decimal(unsigned frac_digits = 6) const;

    std::string to_hex() const;

    friend std::strong_ordering operator<=>(const IntrinsicWeight& a, const IntrinsicWeight& b) {
        if (a.raw_ < b.raw_) return std::strong_ordering::less;
        if (a.raw_ > b.raw_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const IntrinsicWeight& a, const IntrinsicWeight& b) { return a.raw_ == b.raw_; }

private:
    U128 raw_ = 0;
};

/**
 * Accumulated entropy reduction along an ancestry, Q96.64. Stored in a
 * 256-bit word; any value at or above 2^160 raw is out of range and the
 * addition that would produce it throws.
 */
class ChainWeight {
public:
    ChainWeight() = default;

    static ChainWeight from_raw(U256 raw);

    /** Raw bound: 96 integer bits plus 64 fractional bits. */
    static const U256& raw_limit();

    U256 raw() const { return raw_; }

    bool is_zero() const { return raw_ == 0; }

    double to_double() const { return static_cast<double>(raw_) * 0x1p-64; }

    std::string to_decimal(unsigned frac_digits = 6) const;

    std::string to_hex() const;

    ChainWeight plus(const IntrinsicWeight& n) const;

    friend std::strong_ordering operator<=>(const ChainWeight& a, const ChainWeight& b) {
        if (a.raw_ < b.raw_) return std::strong_ordering::less;
        if (a.raw_ > b.raw_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const ChainWeight& a, const ChainWeight& b) { return a.raw_ == b.raw_; }

private:
    U256 raw_ = 0;
};

/** Lowercase minimal hex with 0x prefix, deterministic across platforms. */
std::string to_hex(const U256& v);

/** Exact decimal rendering of a Q*.64 raw value, fraction truncated. */
std::string fixed_to_decimal(const U256& raw, unsigned frac_digits);

/** Parse "123" or "123.25" into a Q*.64 raw value, fraction truncated at 64 bits. */
U256 parse_fixed_decimal(const std::string& text);

} // namespace poemlab::entropy

#endif // POEMLAB_ENTROPY_FIXED_POINT_HPP
