// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_MINE_TIME_HPP
#define POEMLAB_MINE_TIME_HPP

#include <cstdint>

#include <poemlab/mine/philox.hpp>

namespace poemlab::mine {

/**
 * Simulated time is a plain 64-bit tick count. One millisecond is 2^20
 * ticks, giving sub-nanosecond resolution and keeping every time
 * computation in integer arithmetic once the configuration is loaded.
 * Time only sequences deliveries: no consensus value depends on it.
 */
using Ticks = std::uint64_t;

inline constexpr Ticks kTicksPerMs = Ticks(1) << 20;

/** Configuration-time conversion; the only place real-valued time enters. */
Ticks ms_to_ticks(double ms);

/** Render ticks as milliseconds for human-facing summaries. */
double ticks_to_ms(Ticks t);

/**
 * Exponential inter-arrival with the given mean, drawn as
 * mean * ln2 * (64 - log2 U) over a uniform 64-bit U: an exact
 * fixed-point -ln(U) with the tail capped at 64 * ln2 * mean.
 * Returns at least one tick so simultaneous finds stay distinct
 * in the event order.
 */
Ticks exponential_ticks(PhiloxRng& rng, Ticks mean_ticks);

/**
 * Mean inter-arrival in ticks for a miner holding hashrate_fraction of a
 * network hashing at network_rate_per_ms attempts per millisecond, with
 * acceptance probability 2^-threshold_bits per attempt.
 */
Ticks mean_block_ticks(double hashrate_fraction, double network_rate_per_ms, unsigned threshold_bits);

} // namespace poemlab::mine

#endif // POEMLAB_MINE_TIME_HPP
