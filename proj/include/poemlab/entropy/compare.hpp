// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ENTROPY_COMPARE_HPP
#define POEMLAB_ENTROPY_COMPARE_HPP

#include <compare>

#include <poemlab/entropy/field.hpp>
#include <poemlab/entropy/fixed_point.hpp>

namespace poemlab::entropy {

/**
 * POEM tip preference: higher accumulated weight wins; on an exact raw
 * tie the smaller tip hash wins. Hash equality is only possible for the
 * same block, so the order is total over distinct tips. Returns greater
 * when tip a is preferred.
 *
 * Two honest nodes running this comparison over the same block set pick
 * the same tip regardless of delivery order.
 */
std::strong_ordering compare_poem(const ChainWeight& weight_a, const HashValue& tip_a,
                                  const ChainWeight& weight_b, const HashValue& tip_b);

/**
 * Heaviest-chain preference on summed threshold work. Ties are genuinely
 * unordered here (weak ordering); the chain layer resolves them by
 * first-received arrival. Returns greater when tip a is preferred.
 */
std::weak_ordering compare_hcr(const WideInt& work_a, const WideInt& work_b);

} // namespace poemlab::entropy

#endif // POEMLAB_ENTROPY_COMPARE_HPP
