// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/mine/mining.hpp>

#include <poemlab/errors.hpp>

namespace poemlab::mine {

using namespace poemlab::entropy;

std::string_view level_name(Level level) {
    return level == Level::Dominant ? "dom" : "sub";
}

std::string_view mode_name(MiningModeKind mode) {
    switch (mode) {
    case MiningModeKind::Sampled: return "sampled";
    case MiningModeKind::ClampedIntrinsic: return "clamped";
    case MiningModeKind::Grind: return "grind";
    }
    throw Error("unreachable mode");
}

MiningModeKind mode_from_name(std::string_view name) {
    if (name == "sampled") return MiningModeKind::Sampled;
    if (name == "clamped") return MiningModeKind::ClampedIntrinsic;
    if (name == "grind") return MiningModeKind::Grind;
    throw ConfigError("unknown mining mode '" + std::string(name) +
                      "'; expected sampled, clamped, or grind");
}

HashValue sample_block_hash(PhiloxRng& rng, const FieldSpec& field, unsigned threshold_bits) {
    if (threshold_bits >= field.bits()) {
        throw ConfigError("sampling threshold must leave at least one free bit");
    }
    return HashValue(rng.next_bits(field.bits() - threshold_bits));
}

Level classify_level(const HashValue& h, const ThresholdSpec& t) {
    if (!meets_threshold(h, t.sub_bits(), t.field())) {
        throw InvalidBlockError("hash " + h.to_hex() + " misses the subordinate threshold");
    }
    return meets_threshold(h, t.dominant_bits(), t.field()) ? Level::Dominant : Level::Subordinate;
}

unsigned level_bits(Level level, const ThresholdSpec& t) {
    return level == Level::Dominant ? t.dominant_bits() : t.sub_bits();
}

BlockDraw draw_block(PhiloxRng& rng, const ThresholdSpec& t, MiningModeKind mode) {
    if (mode == MiningModeKind::Grind) {
        throw ConfigError("grind mode mines through grind_block_hash, not draw_block");
    }
    BlockDraw draw;
    draw.id = sample_block_hash(rng, t.field(), t.sub_bits());
    draw.level = classify_level(draw.id, t);
    draw.weight = mode == MiningModeKind::ClampedIntrinsic
                      ? IntrinsicWeight::from_bits(level_bits(draw.level, t))
                      : intrinsic_weight(draw.id, t.field());
    return draw;
}

} // namespace poemlab::mine
