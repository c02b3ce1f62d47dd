// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_MINE_GRIND_HPP
#define POEMLAB_MINE_GRIND_HPP

#include <array>
#include <cstdint>
#include <span>

#include <poemlab/entropy/field.hpp>

namespace poemlab::mine {

/** One-shot SHA-256. */
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

struct GrindResult {
    std::uint64_t nonce = 0;
    entropy::HashValue digest; // big-endian digest bytes as a 256-bit integer
    std::uint64_t attempts = 0;
};

/**
 * Real-hash integration mode: append a little-endian 64-bit nonce to the
 * prefix and SHA-256 the result until the digest, read as a big-endian
 * 256-bit integer, falls below 2^(256 - threshold_bits). Thresholds are
 * capped at 24 bits so grinding stays desk-scale; the nonce budget keeps
 * termination guaranteed.
 */
GrindResult grind_block_hash(std::span<const std::uint8_t> prefix, unsigned threshold_bits,
                             std::uint64_t start_nonce = 0,
                             std::uint64_t max_attempts = 1ull << 32);

} // namespace poemlab::mine

#endif // POEMLAB_MINE_GRIND_HPP
