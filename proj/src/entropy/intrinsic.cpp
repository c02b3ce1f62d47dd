// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/entropy/intrinsic.hpp>

#include <cstdint>

namespace poemlab::entropy {

namespace {

// Fractional bits carried by the mantissa inside the binary log. Wide
// enough that 64 rounds of squaring keep the accumulated truncation
// error below 2^-124, far inside the published 2^-60 envelope.
constexpr unsigned kMantissaFracBits = 192;

// 64 fractional bits of log2(h) - e for h in (2^e, 2^(e+1)), h not a
// power of two. Square-and-compare: squaring a mantissa in [1, 2)
// doubles its log; a result at or above 2 yields a 1 bit and is halved.
// Every truncation lowers the mantissa, so the result never exceeds the
// exact fraction.
std::uint64_t log_fraction(const U256& h, unsigned e) {
    U256 m = e <= kMantissaFracBits ? U256(h << (kMantissaFracBits - e))
                                    : U256(h >> (e - kMantissaFracBits));
    std::uint64_t frac = 0;
    for (unsigned i = 0; i < kFracBits; ++i) {
        U512 sq = U512(m) * U512(m);
        m = U256(sq >> kMantissaFracBits);
        frac <<= 1;
        if ((m >> (kMantissaFracBits + 1)) != 0) {
            frac |= 1;
            m >>= 1;
        }
    }
    return frac;
}

} // namespace

IntrinsicWeight intrinsic_weight(const HashValue& hash, const FieldSpec& field) {
    const U256& h = hash.value();
    const unsigned l = field.bits();
    if (!field.contains(h)) {
        throw ConfigError("hash value exceeds the " + std::to_string(l) + "-bit field");
    }
    // h = 0 is capped at the field width, same as h = 1.
    if (h <= 1) {
        return IntrinsicWeight::from_raw(U128(l) << kFracBits);
    }
    const unsigned e = boost::multiprecision::msb(h);
    const U128 whole = U128(l - e) << kFracBits;
    if ((h & (h - 1)) == 0) {
        return IntrinsicWeight::from_raw(whole);
    }
    return IntrinsicWeight::from_raw(whole - U128(log_fraction(h, e)));
}

ChainWeight delta_entropy_exponent(std::span<const IntrinsicWeight> weights) {
    ChainWeight total;
    for (const IntrinsicWeight& n : weights) {
        total = total.plus(n);
    }
    return total;
}

ChainWeight accumulate(const ChainWeight& total, const IntrinsicWeight& n) {
    return total.plus(n);
}

bool meets_threshold(const HashValue& hash, unsigned bits, const FieldSpec& field) {
    if (bits >= field.bits()) {
        throw ConfigError("threshold of " + std::to_string(bits) +
                          " bits needs a field wider than " + std::to_string(field.bits()));
    }
    if (bits == 0) {
        return field.contains(hash.value());
    }
    return hash.value() < (U256(1) << (field.bits() - bits));
}

} // namespace poemlab::entropy
