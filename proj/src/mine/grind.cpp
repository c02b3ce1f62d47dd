// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/mine/grind.hpp>

#include <openssl/evp.h>

#include <vector>

#include <poemlab/errors.hpp>

namespace poemlab::mine {

using entropy::HashValue;
using entropy::U256;

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw Error("SHA-256 digest failed");
    }
    return out;
}

GrindResult grind_block_hash(std::span<const std::uint8_t> prefix, unsigned threshold_bits,
                             std::uint64_t start_nonce, std::uint64_t max_attempts) {
    if (threshold_bits > 24) {
        throw ConfigError("grind thresholds above 24 bits are not desk-scale");
    }
    // bits = 0 accepts every digest; the shift below would wrap at 256.
    const bool accept_all = threshold_bits == 0;
    const U256 bound = accept_all ? 0 : U256(1) << (256 - threshold_bits);
    std::vector<std::uint8_t> preimage(prefix.begin(), prefix.end());
    preimage.resize(prefix.size() + 8);
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        const std::uint64_t nonce = start_nonce + attempt;
        for (unsigned i = 0; i < 8; ++i) {
            preimage[prefix.size() + i] = static_cast<std::uint8_t>(nonce >> (8 * i));
        }
        const std::array<std::uint8_t, 32> digest = sha256(preimage);
        U256 value = 0;
        for (std::uint8_t byte : digest) {
            value = (value << 8) | byte;
        }
        if (accept_all || value < bound) {
            return GrindResult{nonce, HashValue(value), attempt + 1};
        }
    }
    throw GrindExhaustedError("no digest under 2^-" + std::to_string(threshold_bits) +
                              " within " + std::to_string(max_attempts) + " nonces");
}

} // namespace poemlab::mine
