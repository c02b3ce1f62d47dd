// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/mine/philox.hpp>

#include <poemlab/errors.hpp>

namespace poemlab::mine {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

} // namespace

std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> x = counter;
    std::uint64_t k0 = key[0];
    std::uint64_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMult0, x[0], hi0, lo0);
        mulhilo(kMult1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    }
    return x;
}

entropy::U256 PhiloxRng::next_bits(unsigned bits) {
    if (bits < 1 || bits > 256) {
        throw ConfigError("random draw width must be in [1, 256] bits");
    }
    entropy::U256 value = 0;
    const unsigned words = (bits + 63) / 64;
    for (unsigned i = 0; i < words; ++i) {
        value |= entropy::U256(next_u64()) << (64 * i);
    }
    if (bits % 64 != 0) {
        value &= (entropy::U256(1) << bits) - 1;
    }
    return value;
}

} // namespace poemlab::mine
