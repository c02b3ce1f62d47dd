// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/mine/time.hpp>

#include <cmath>

#include <poemlab/entropy/intrinsic.hpp>
#include <poemlab/errors.hpp>

namespace poemlab::mine {

namespace {

// floor(ln 2 * 2^64); frozen from a high-precision oracle.
const entropy::U256 kLn2Q64("12786308645202655659");

} // namespace

Ticks ms_to_ticks(double ms) {
    if (!(ms >= 0)) {
        throw ConfigError("durations must be non-negative milliseconds");
    }
    double ticks = std::round(ms * static_cast<double>(kTicksPerMs));
    if (ticks >= 0x1p63) {
        throw ConfigError("duration too long to represent in ticks");
    }
    return static_cast<Ticks>(ticks);
}

double ticks_to_ms(Ticks t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerMs);
}

Ticks exponential_ticks(PhiloxRng& rng, Ticks mean_ticks) {
    // n = 64 - log2(r) in Q9.64 is an exact -log2 of the uniform draw
    // r / 2^64, with the r = 0 tail capped at 64. Multiplying by ln2
    // converts to the natural exponential: delta = mean * (-ln U).
    entropy::U128 n_raw =
        entropy::intrinsic_weight(entropy::HashValue(entropy::U256(rng.next_u64())),
                                  entropy::FieldSpec(64))
            .raw();
    entropy::U256 delta = (entropy::U256(n_raw) * kLn2Q64 * mean_ticks) >> 128;
    if (delta == 0) return 1;
    if (delta >> 64 != 0) {
        throw ArithmeticOverflowError("inter-arrival time exceeds the tick range");
    }
    return static_cast<Ticks>(delta);
}

Ticks mean_block_ticks(double hashrate_fraction, double network_rate_per_ms,
                       unsigned threshold_bits) {
    if (!(hashrate_fraction > 0)) {
        throw ConfigError("hashrate fraction must be positive");
    }
    if (!(network_rate_per_ms > 0)) {
        throw ConfigError("network rate must be positive");
    }
    // Real-valued arithmetic is confined to this per-configuration
    // constant; the draws themselves are integer fixed point.
    double mean_ms = std::ldexp(1.0, static_cast<int>(threshold_bits)) /
                     (hashrate_fraction * network_rate_per_ms);
    double mean_ticks = std::round(mean_ms * static_cast<double>(kTicksPerMs));
    if (!(mean_ticks >= 1)) return 1;
    if (mean_ticks >= 0x1p62) {
        throw ConfigError("mean block interval too long to represent in ticks");
    }
    return static_cast<Ticks>(mean_ticks);
}

} // namespace poemlab::mine
