// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/entropy/bounds.hpp>

#include <cmath>

namespace poemlab::entropy {

DifficultyBound overtake_bound_difficulty(const ThresholdSpec& t) {
    DifficultyBound b;
    b.bound = WideInt(1) << t.dominant_extra_bits();
    b.min_blocks = b.bound + 1;
    return b;
}

EntropyBound overtake_bound_entropy(const ThresholdSpec& t, unsigned extra_bits) {
    EntropyBound b;
    b.numerator = std::uint64_t(t.sub_bits()) + t.dominant_extra_bits() + extra_bits;
    b.denominator = t.sub_bits();
    // Least integer strictly above num/den: floor + 1 covers the exact
    // and inexact cases alike.
    b.min_blocks = b.numerator / b.denominator + 1;
    return b;
}

double TieProbability::model_probability() const {
    return std::ldexp(1.0, -static_cast<int>(model_exponent));
}

double TieProbability::field_probability() const {
    return std::ldexp(1.0, -static_cast<int>(field_exponent));
}

TieProbability tie_probability(const FieldSpec& field, unsigned threshold_bits) {
    if (threshold_bits >= field.bits()) {
        throw ConfigError("tie probability needs threshold bits below the field width");
    }
    return TieProbability{field.bits() - threshold_bits, field.bits()};
}

} // namespace poemlab::entropy
