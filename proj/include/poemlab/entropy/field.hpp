// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ENTROPY_FIELD_HPP
#define POEMLAB_ENTROPY_FIELD_HPP

#include <compare>
#include <cstdint>
#include <string>

#include <poemlab/entropy/fixed_point.hpp>
#include <poemlab/errors.hpp>

namespace poemlab::entropy {

/**
 * Width of the hash field in bits. Hashes are uniform over [0, 2^l) and
 * every weight computation is relative to this width.
 */
class FieldSpec {
public:
    explicit FieldSpec(unsigned bits) : bits_(bits) {
        if (bits < 1 || bits > 256) {
            throw ConfigError("field bits must be in [1, 256], got " + std::to_string(bits));
        }
    }

    unsigned bits() const { return bits_; }

    /** 2^l as a 257-bit-safe wide integer (l = 256 overflows U256). */
    WideInt cardinality() const { return WideInt(1) << bits_; }

    /** True when v < 2^l. Always true for l = 256. */
    bool contains(const U256& v) const {
        if (bits_ == 256) return true;
        return v < (U256(1) << bits_);
    }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

private:
    unsigned bits_;
};

/**
 * A block hash as an l-bit unsigned integer. Ordering is plain numeric
 * order; lower values carry more weight.
 */
class HashValue {
public:
    HashValue() = default;
    explicit HashValue(U256 v) : value_(std::move(v)) {}

    const U256& value() const { return value_; }

    bool is_zero() const { return value_ == 0; }

    std::string to_hex() const { return entropy::to_hex(value_); }

    friend std::strong_ordering operator<=>(const HashValue& a, const HashValue& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const HashValue& a, const HashValue& b) { return a.value_ == b.value_; }

private:
    U256 value_ = 0;
};

/**
 * The two-level threshold pair: subordinate blocks need m_t leading zero
 * bits, dominant blocks need m_t + m_d. A hash meets an m-bit threshold
 * when h < 2^(l-m).
 */
class ThresholdSpec {
public:
    ThresholdSpec(FieldSpec field, unsigned sub_bits, unsigned dominant_extra_bits)
        : field_(field), sub_bits_(sub_bits), dominant_extra_bits_(dominant_extra_bits) {
        if (sub_bits < 1) {
            throw ConfigError("subordinate threshold must be at least 1 bit");
        }
        if (sub_bits + dominant_extra_bits >= field.bits()) {
            throw ConfigError("thresholds m_t + m_d = " + std::to_string(sub_bits + dominant_extra_bits) +
                              " must stay below field width " + std::to_string(field.bits()));
        }
    }

    const FieldSpec& field() const { return field_; }
    unsigned sub_bits() const { return sub_bits_; }
    unsigned dominant_extra_bits() const { return dominant_extra_bits_; }
    unsigned dominant_bits() const { return sub_bits_ + dominant_extra_bits_; }

    friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;

private:
    FieldSpec field_;
    unsigned sub_bits_;
    unsigned dominant_extra_bits_;
};

} // namespace poemlab::entropy

#endif // POEMLAB_ENTROPY_FIELD_HPP
