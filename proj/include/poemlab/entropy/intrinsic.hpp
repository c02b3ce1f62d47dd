// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ENTROPY_INTRINSIC_HPP
#define POEMLAB_ENTROPY_INTRINSIC_HPP

#include <span>

#include <poemlab/entropy/field.hpp>
#include <poemlab/entropy/fixed_point.hpp>

namespace poemlab::entropy {

/**
 * Intrinsic weight n = l - log2(h) of an l-bit hash h, in Q9.64.
 *
 * The fractional bits come from a square-and-truncate binary logarithm
 * carried out on a 192-fractional-bit mantissa, so the result does not
 * depend on any floating-point unit. Truncation inside the log makes the
 * returned n an upper bound on the exact value; the error is below 2^-64.
 *
 * Edge cases: h = 0 and h = 1 both map to n = l (the measure is capped at
 * one unit per hash bit), and h = 2^j maps to exactly l - j.
 *
 * Strictly antitone in h: h1 < h2 implies n(h1) > n(h2) whenever the two
 * raw results differ; equal raw results can only arise from truncation of
 * adjacent mantissas agreeing in their first 64 fractional bits.
 */
IntrinsicWeight intrinsic_weight(const HashValue& hash, const FieldSpec& field);

/**
 * Negated log2 of the chain's surviving state fraction: the sum of the
 * given intrinsic weights. An empty sequence is the genesis state with
 * exponent 0. Folding with accumulate gives bit-identical results.
 */
ChainWeight delta_entropy_exponent(std::span<const IntrinsicWeight> weights);

/** total + n with overflow detection. */
ChainWeight accumulate(const ChainWeight& total, const IntrinsicWeight& n);

/** True when the hash clears an m-bit threshold: h < 2^(l-m). Requires bits < l. */
bool meets_threshold(const HashValue& hash, unsigned bits, const FieldSpec& field);

} // namespace poemlab::entropy

#endif // POEMLAB_ENTROPY_INTRINSIC_HPP
