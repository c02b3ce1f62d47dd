// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/entropy/fixed_point.hpp>

#include <algorithm>
#include <cctype>

namespace poemlab::entropy {

namespace {

const U256 kFracMask = (U256(1) << kFracBits) - 1;

U256 pow10(unsigned digits) {
    U256 p = 1;
    for (unsigned i = 0; i < digits; ++i) p *= 10;
    return p;
}

std::string uint_to_decimal(const U256& v) {
    if (v == 0) return "0";
    std::string out;
    U256 rest = v;
    while (rest != 0) {
        out.push_back(static_cast<char>('0' + static_cast<unsigned>(rest % 10)));
        rest /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

std::string to_hex(const U256& v) {
    static const char* digits = "0123456789abcdef";
    if (v == 0) return "0x0";
    std::string out;
    U256 rest = v;
    while (rest != 0) {
        out.push_back(digits[static_cast<unsigned>(rest & 0xf)]);
        rest >>= 4;
    }
    out += "x0";
    std::reverse(out.begin(), out.end());
    return out;
}

std::string fixed_to_decimal(const U256& raw, unsigned frac_digits) {
    std::string out = uint_to_decimal(raw >> kFracBits);
    if (frac_digits == 0) return out;
    if (frac_digits > 38) frac_digits = 38; // 10^38 < 2^127 keeps the scale product in range
    U512 scaled = U512(raw & kFracMask) * U512(pow10(frac_digits));
    std::string frac = uint_to_decimal(U256(scaled >> kFracBits));
    out.push_back('.');
    out.append(frac_digits - frac.size(), '0');
    out += frac;
    return out;
}

U256 parse_fixed_decimal(const std::string& text) {
    auto bad = [&] { throw ConfigError("not a decimal number: '" + text + "'"); };
    std::string::size_type dot = text.find('.');
    std::string int_part = text.substr(0, dot);
    std::string frac_part = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad();
    U256 value = 0;
    for (char c : int_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) bad();
        U256 next = value * 10 + static_cast<unsigned>(c - '0');
        if (next >> (256 - kFracBits) != 0) throw ConfigError("decimal value too large: '" + text + "'");
        value = next;
    }
    value <<= kFracBits;
    if (!frac_part.empty()) {
        // Truncate the fraction beyond what 64 bits can distinguish.
        if (frac_part.size() > 38) frac_part.resize(38);
        U256 digits = 0;
        for (char c : frac_part) {
            if (!std::isdigit(static_cast<unsigned char>(c))) bad();
            digits = digits * 10 + static_cast<unsigned>(c - '0');
        }
        value += U256((U512(digits) << kFracBits) / U512(pow10(static_cast<unsigned>(frac_part.size()))));
    }
    return value;
}

std::string IntrinsicWeight::to_decimal(unsigned frac_digits) const {
    return fixed_to_decimal(U256(raw_), frac_digits);
}

std::string IntrinsicWeight::to_hex() const {
    return entropy::to_hex(U256(raw_));
}

ChainWeight ChainWeight::from_raw(U256 raw) {
    if (raw >= raw_limit()) {
        throw ArithmeticOverflowError("chain weight raw value exceeds Q96.64");
    }
    ChainWeight w;
    w.raw_ = std::move(raw);
    return w;
}

const U256& ChainWeight::raw_limit() {
    static const U256 limit = U256(1) << 160;
    return limit;
}

ChainWeight ChainWeight::plus(const IntrinsicWeight& n) const {
    U256 sum = raw_ + U256(n.raw());
    if (sum >= raw_limit()) {
        throw ArithmeticOverflowError("chain weight sum exceeds Q96.64");
    }
    ChainWeight w;
    w.raw_ = sum;
    return w;
}

std::string ChainWeight::to_decimal(unsigned frac_digits) const {
    return fixed_to_decimal(raw_, frac_digits);
}

std::string ChainWeight::to_hex() const {
    return entropy::to_hex(raw_);
}

} // namespace poemlab::entropy
