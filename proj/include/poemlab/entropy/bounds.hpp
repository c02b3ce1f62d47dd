// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ENTROPY_BOUNDS_HPP
#define POEMLAB_ENTROPY_BOUNDS_HPP

#include <cstdint>
#include <string>

#include <poemlab/entropy/field.hpp>
#include <poemlab/entropy/fixed_point.hpp>

namespace poemlab::entropy {

/**
 * Closed-form overtake bound under threshold (difficulty) weighting: a
 * dominant block outweighs k subordinate blocks until k > 2^m_d. Both the
 * bound and the least integer strictly above it are exact integers.
 */
struct DifficultyBound {
    WideInt bound;      // 2^m_d
    WideInt min_blocks; // bound + 1 (strict inequality)
};

DifficultyBound overtake_bound_difficulty(const ThresholdSpec& t);

/**
 * Closed-form overtake bound under entropy weighting: k subordinate
 * blocks overtake once k > (m_t + m_d + extra_bits) / m_t, where
 * extra_bits is any surplus beyond the dominant threshold the block
 * happened to carry. The bound is kept as an exact rational.
 */
struct EntropyBound {
    std::uint64_t numerator;   // m_t + m_d + extra_bits
    std::uint64_t denominator; // m_t
    std::uint64_t min_blocks;  // least integer strictly above numerator/denominator

    double bound_value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

EntropyBound overtake_bound_entropy(const ThresholdSpec& t, unsigned extra_bits);

/**
 * Probability that two independently mined valid blocks collide on the
 * exact same hash value, making the tie unresolvable by weight. Hashes
 * are uniform over the valid region [0, 2^(l-m)), so the collision
 * probability is 2^-(l-m). The whole-field figure 2^-l, which ignores
 * threshold conditioning, is carried alongside for reporting.
 */
struct TieProbability {
    unsigned model_exponent; // l - threshold_bits; probability = 2^-model_exponent
    unsigned field_exponent; // l; the unconditioned whole-field figure

    double model_probability() const;
    double field_probability() const;
};

TieProbability tie_probability(const FieldSpec& field, unsigned threshold_bits);

} // namespace poemlab::entropy

#endif // POEMLAB_ENTROPY_BOUNDS_HPP
