// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_MINE_MINING_HPP
#define POEMLAB_MINE_MINING_HPP

#include <string>
#include <string_view>

#include <poemlab/entropy/field.hpp>
#include <poemlab/entropy/fixed_point.hpp>
#include <poemlab/entropy/intrinsic.hpp>
#include <poemlab/mine/philox.hpp>
#include <poemlab/mine/time.hpp>

namespace poemlab::mine {

enum class Level { Subordinate, Dominant };

std::string_view level_name(Level level);

/**
 * How block weights come into being.
 *  - Sampled: hash uniform over the valid region, n measured from it.
 *  - ClampedIntrinsic: n forced to exactly the level's threshold bits,
 *    with a sampled placeholder id for identity and tie-breaks; this is
 *    the mode that reproduces the closed-form arithmetic exactly.
 *  - Grind: nonces through a real hash function (integration mode).
 */
enum class MiningModeKind { Sampled, ClampedIntrinsic, Grind };

std::string_view mode_name(MiningModeKind mode);
MiningModeKind mode_from_name(std::string_view name);

struct MinerStrategy {
    enum class Kind { Honest, WithholdDominant };
    Kind kind = Kind::Honest;
    /** WithholdDominant: reveal after this many honest subordinate blocks arrive on top of the withheld block's reference point. */
    unsigned reveal_after = 0;
};

struct MinerSpec {
    std::string id;
    double hashrate_fraction = 0.0;
    MinerStrategy strategy;
};

/** Uniform draw over the region meeting threshold_bits: [0, 2^(l - bits)). */
entropy::HashValue sample_block_hash(PhiloxRng& rng, const entropy::FieldSpec& field,
                                     unsigned threshold_bits);

/**
 * Merge-mining classification of a subordinate-valid hash: one sampling
 * stream serves both levels, and a draw that also clears the dominant
 * threshold is a dominant discovery. Rejects hashes below the
 * subordinate threshold.
 */
Level classify_level(const entropy::HashValue& h, const entropy::ThresholdSpec& t);

/** Threshold bits a block of the given level had to clear. */
unsigned level_bits(Level level, const entropy::ThresholdSpec& t);

/** A mined block before it meets the chain: identity, level, weight. */
struct BlockDraw {
    entropy::HashValue id;
    Level level = Level::Subordinate;
    entropy::IntrinsicWeight weight;
};

/**
 * Draw one block at the subordinate threshold and classify it. Sampled
 * mode measures n from the id; clamped mode overrides n with the exact
 * threshold weight of the classified level.
 */
BlockDraw draw_block(PhiloxRng& rng, const entropy::ThresholdSpec& t, MiningModeKind mode);

inline Ticks next_block_time(PhiloxRng& rng, const MinerSpec& miner, double network_rate_per_ms,
                             unsigned threshold_bits) {
    return exponential_ticks(rng, mean_block_ticks(miner.hashrate_fraction, network_rate_per_ms,
                                                   threshold_bits));
}

} // namespace poemlab::mine

#endif // POEMLAB_MINE_MINING_HPP
