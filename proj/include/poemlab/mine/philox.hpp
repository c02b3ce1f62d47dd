// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_MINE_PHILOX_HPP
#define POEMLAB_MINE_PHILOX_HPP

#include <array>
#include <cstdint>

#include <poemlab/entropy/fixed_point.hpp>

namespace poemlab::mine {

/**
 * One 256-bit output block of the Philox4x64-10 counter-based generator.
 * Pure function of (counter, key); known-answer vectors in the tests are
 * anchored to two independent reference implementations.
 */
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key);

/**
 * Deterministic random stream: key = (seed, stream), counter runs over
 * block indices 0, 1, 2, ... Streams with distinct (seed, stream) pairs
 * are statistically independent, so each consumer in a simulation owns
 * one stream and draws from it without coordination.
 */
class PhiloxRng {
public:
    PhiloxRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream() const { return key_[1]; }

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = philox4x64_10({counter_++, 0, 0, 0}, key_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /** Uniform over [0, 2^bits), bits in [1, 256]. The first drawn word is the least significant. */
    entropy::U256 next_bits(unsigned bits);

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> buf_{};
    std::uint64_t counter_ = 0;
    unsigned pos_ = 4;
};

} // namespace poemlab::mine

#endif // POEMLAB_MINE_PHILOX_HPP
