// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include <poemlab/entropy/bounds.hpp>
#include <poemlab/entropy/compare.hpp>
#include <poemlab/entropy/intrinsic.hpp>

using namespace poemlab;
using namespace poemlab::entropy;

namespace {

U128 weight_raw(std::uint64_t h, unsigned l) {
    return intrinsic_weight(HashValue(U256(h)), FieldSpec(l)).raw();
}

// Raw Q9.64 floor values of l - log2(h) from a 400-bit-precision
// independent oracle, computed before the implementation and frozen.
// The implementation truncates inside the log, so its result sits in
// [floor, floor + 16] (16 ulps = 2^-60); measured offset is exactly 1.
struct OracleRow {
    U256 h;
    unsigned l;
    U128 oracle_floor;
};

const std::uint64_t kUlpTolerance = 16;

} // namespace

TEST_SUITE_BEGIN("entropy");

TEST_CASE("intrinsic weight is exact at powers of two and capped at tiny inputs") {
    for (unsigned l : {8u, 16u, 64u, 256u}) {
        FieldSpec field(l);
        CHECK(intrinsic_weight(HashValue(U256(0)), field).raw() == U128(l) << 64);
        CHECK(intrinsic_weight(HashValue(U256(1)), field).raw() == U128(l) << 64);
        for (unsigned j = 0; j < l; ++j) {
            HashValue h(U256(1) << j);
            CHECK(intrinsic_weight(h, field).raw() == U128(l - j) << 64);
        }
    }
}

TEST_CASE("intrinsic weight stays within 2^-60 of the frozen oracle and is bit-stable") {
    const std::vector<OracleRow> rows = {
        {U256(3), 8, U128("118336554972446554208")},
        {U256(5), 8, U128("104741939265733252102")},
        {U256(7), 8, U128("95787394818410964172")},
        {U256(3), 256, U128("4693129085252415354976")},
        {U256(123456789), 64, U128("684753637451982153373")},
        {(U256(1) << 255) + 12345, 256, U128(18446744073709551615u)},
    };
    for (const auto& row : rows) {
        U128 raw = intrinsic_weight(HashValue(row.h), FieldSpec(row.l)).raw();
        CHECK(raw >= row.oracle_floor);
        CHECK(raw - row.oracle_floor <= kUlpTolerance);
        // Regression pin: the algorithm is deterministic, so the offset
        // from the oracle floor never moves.
        CHECK(raw == row.oracle_floor + 1);
    }
}

TEST_CASE("intrinsic weight is antitone, exhaustively at l = 8") {
    FieldSpec field(8);
    U128 prev = intrinsic_weight(HashValue(U256(0)), field).raw();
    for (unsigned h = 1; h < 256; ++h) {
        U128 cur = intrinsic_weight(HashValue(U256(h)), field).raw();
        CHECK(cur <= prev);
        prev = cur;
    }
    // Strict once the hash doubles: one full bit of weight is lost.
    for (unsigned h = 2; h < 128; ++h) {
        CHECK(weight_raw(2 * h, 8) < weight_raw(h, 8));
    }
}

TEST_CASE("hash values outside the field are rejected") {
    CHECK_THROWS_AS(intrinsic_weight(HashValue(U256(256)), FieldSpec(8)), ConfigError);
    CHECK_THROWS_AS(FieldSpec(0), ConfigError);
    CHECK_THROWS_AS(FieldSpec(257), ConfigError);
}

TEST_CASE("meets_threshold is an exclusive power-of-two cut") {
    FieldSpec f8(8);
    CHECK(meets_threshold(HashValue(U256(31)), 3, f8));
    CHECK_FALSE(meets_threshold(HashValue(U256(32)), 3, f8));
    CHECK(meets_threshold(HashValue(U256(255)), 0, f8));
    FieldSpec f256(256);
    CHECK(meets_threshold(HashValue((U256(1) << 236) - 1), 20, f256));
    CHECK_FALSE(meets_threshold(HashValue(U256(1) << 236), 20, f256));
    CHECK_THROWS_AS(meets_threshold(HashValue(U256(0)), 8, f8), ConfigError);
}

TEST_CASE("delta_entropy_exponent sums sequences exactly") {
    CHECK(delta_entropy_exponent({}).raw() == 0);

    std::vector<IntrinsicWeight> integral = {
        IntrinsicWeight::from_bits(4), IntrinsicWeight::from_bits(4), IntrinsicWeight::from_bits(4)};
    CHECK(delta_entropy_exponent(integral).raw() == U256(12) << 64);

    FieldSpec f8(8);
    std::vector<IntrinsicWeight> pair = {
        intrinsic_weight(HashValue(U256(3)), f8),
        intrinsic_weight(HashValue(U256(5)), f8),
    };
    U256 sum = delta_entropy_exponent(pair).raw();
    // Frozen oracle: floor((12.09310940439148...) * 2^64); each addend
    // carries at most one ulp of upward rounding.
    U256 oracle_floor("223078494238179806310");
    CHECK(sum >= oracle_floor);
    CHECK(sum - oracle_floor <= 2 * kUlpTolerance);
    CHECK(sum == oracle_floor + 2);
}

TEST_CASE("accumulate performs exact dyadic addition") {
    ChainWeight genesis;
    CHECK(genesis.raw() == 0);
    ChainWeight one = accumulate(genesis, IntrinsicWeight::from_bits(4));
    CHECK(one.raw() == U256(4) << 64);

    ChainWeight half = ChainWeight::from_raw(U256(25) << 63);                     // 12.5
    IntrinsicWeight quarter = IntrinsicWeight::from_raw(U128(81) << 62);          // 20.25
    CHECK(accumulate(half, quarter).raw() == U256(131) << 62);                    // 32.75
}

TEST_CASE("accumulate folded along a chain equals the batch sum, bit-identical") {
    FieldSpec field(64);
    std::mt19937_64 rng(0x9e3779b97f4a7c15u);
    std::vector<IntrinsicWeight> weights;
    ChainWeight incremental;
    for (int i = 0; i < 1000; ++i) {
        IntrinsicWeight n = intrinsic_weight(HashValue(U256(rng())), field);
        weights.push_back(n);
        incremental = accumulate(incremental, n);
    }
    CHECK(incremental.raw() == delta_entropy_exponent(weights).raw());
}

TEST_CASE("chain weight overflows loudly at the Q96.64 limit") {
    CHECK_THROWS_AS(ChainWeight::from_raw(U256(1) << 160), ArithmeticOverflowError);
    ChainWeight nearly = ChainWeight::from_raw((U256(1) << 160) - 1);
    CHECK_THROWS_AS(accumulate(nearly, IntrinsicWeight::from_bits(1)), ArithmeticOverflowError);
}

TEST_CASE("compare_poem prefers weight, then the smaller tip hash") {
    ChainWeight w_405 = ChainWeight::from_raw(U256(81) << 63);  // 40.5
    ChainWeight w_4025 = ChainWeight::from_raw(U256(161) << 62); // 40.25
    HashValue h5(U256(5));
    HashValue h9(U256(9));
    CHECK(compare_poem(w_405, h9, w_4025, h5) == std::strong_ordering::greater);
    CHECK(compare_poem(w_405, h5, w_405, h9) == std::strong_ordering::greater);
    CHECK(compare_poem(w_405, h9, w_405, h5) == std::strong_ordering::less);
    CHECK(compare_poem(w_405, h5, w_405, h5) == std::strong_ordering::equal);
}

TEST_CASE("compare_poem is a total order on small exhaustive sets") {
    // All (weight, hash) pairs from hashes 2..17 at l = 8, single blocks.
    FieldSpec field(8);
    struct Tip {
        ChainWeight w;
        HashValue h;
    };
    std::vector<Tip> tips;
    for (unsigned h = 2; h < 18; ++h) {
        Tip t;
        t.h = HashValue(U256(h));
        t.w = accumulate(ChainWeight(), intrinsic_weight(t.h, field));
        tips.push_back(t);
    }
    for (const Tip& a : tips) {
        for (const Tip& b : tips) {
            auto ab = compare_poem(a.w, a.h, b.w, b.h);
            auto ba = compare_poem(b.w, b.h, a.w, a.h);
            if (ab == std::strong_ordering::equal) {
                CHECK(a.h == b.h);
            }
            CHECK(ab == (ba == std::strong_ordering::less    ? std::strong_ordering::greater
                         : ba == std::strong_ordering::greater ? std::strong_ordering::less
                                                               : std::strong_ordering::equal));
            for (const Tip& c : tips) {
                if (ab == std::strong_ordering::greater &&
                    compare_poem(b.w, b.h, c.w, c.h) == std::strong_ordering::greater) {
                    CHECK(compare_poem(a.w, a.h, c.w, c.h) == std::strong_ordering::greater);
                }
            }
        }
    }
}

TEST_CASE("same-parent fork choice is arrival-order independent at l = 8") {
    FieldSpec field(8);
    ChainWeight parent = ChainWeight::from_raw(U256(40) << 64);
    for (unsigned ha = 1; ha < 32; ++ha) {
        for (unsigned hb = ha + 1; hb < 32; ++hb) {
            HashValue a{U256(ha)};
            HashValue b{U256(hb)};
            ChainWeight wa = accumulate(parent, intrinsic_weight(a, field));
            ChainWeight wb = accumulate(parent, intrinsic_weight(b, field));
            auto ab = compare_poem(wa, a, wb, b);
            auto ba = compare_poem(wb, b, wa, a);
            // The smaller hash has weakly higher weight and strictly
            // smaller tie-break value, so it wins both ways round.
            CHECK(ab == std::strong_ordering::greater);
            CHECK(ba == std::strong_ordering::less);
            // The same pair under summed threshold work ties instead.
            CHECK(compare_hcr(WideInt(1) << 20, WideInt(1) << 20) == std::weak_ordering::equivalent);
        }
    }
}

TEST_CASE("compare_hcr realizes the worked overtake boundary") {
    WideInt dominant = WideInt(1) << 25;
    WideInt subs_32 = WideInt(32) * (WideInt(1) << 20);
    WideInt subs_33 = WideInt(33) * (WideInt(1) << 20);
    CHECK(compare_hcr(dominant, subs_32) == std::weak_ordering::equivalent);
    CHECK(compare_hcr(dominant, subs_33) == std::weak_ordering::less);
    CHECK(compare_hcr(subs_33, dominant) == std::weak_ordering::greater);
}

TEST_CASE("overtake bounds reproduce the closed forms") {
    FieldSpec f256(256);
    ThresholdSpec t(f256, 20, 5);
    DifficultyBound d = overtake_bound_difficulty(t);
    CHECK(d.bound == 32);
    CHECK(d.min_blocks == 33);

    DifficultyBound d0 = overtake_bound_difficulty(ThresholdSpec(f256, 20, 0));
    CHECK(d0.bound == 1);
    CHECK(d0.min_blocks == 2);

    EntropyBound e = overtake_bound_entropy(t, 0);
    CHECK(e.numerator == 25);
    CHECK(e.denominator == 20);
    CHECK(e.min_blocks == 2);

    EntropyBound e10 = overtake_bound_entropy(t, 10);
    CHECK(e10.bound_value() == doctest::Approx(1.75));
    CHECK(e10.min_blocks == 2);

    EntropyBound widest = overtake_bound_entropy(ThresholdSpec(f256, 1, 254), 0);
    CHECK(widest.numerator == 255);
    CHECK(widest.denominator == 1);
    CHECK(widest.min_blocks == 256);
}

TEST_CASE("entropy bound never exceeds the difficulty bound") {
    FieldSpec f256(256);
    for (unsigned mt = 1; mt <= 30; ++mt) {
        for (unsigned md = 1; md <= 30; ++md) {
            ThresholdSpec t(f256, mt, md);
            EntropyBound e = overtake_bound_entropy(t, 0);
            DifficultyBound d = overtake_bound_difficulty(t);
            // Compare (mt + md) / mt against 2^md exactly: cross-multiply.
            WideInt lhs = WideInt(e.numerator);
            WideInt rhs = d.bound * e.denominator;
            CHECK(lhs <= rhs);
            if (lhs == rhs) {
                // The only integral coincidences: mt + md = mt * 2^md.
                CHECK(WideInt(mt) + md == WideInt(mt) * (WideInt(1) << md));
            }
        }
    }
}

TEST_CASE("finalization is finite: min_blocks in (1, 256] for every valid triple") {
    FieldSpec f256(256);
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 10000; ++i) {
        unsigned mt = 1 + static_cast<unsigned>(rng() % 255);
        unsigned md = static_cast<unsigned>(rng() % (255 - mt + 1));
        unsigned headroom = 255 - mt - md;
        unsigned extra = headroom == 0 ? 0 : static_cast<unsigned>(rng() % (headroom + 1));
        EntropyBound e = overtake_bound_entropy(ThresholdSpec(f256, mt, md), extra);
        CHECK(e.min_blocks > 1);
        CHECK(e.min_blocks <= 256);
    }
}

TEST_CASE("tie probability reports the valid-region and whole-field exponents") {
    TieProbability p0 = tie_probability(FieldSpec(8), 0);
    CHECK(p0.model_exponent == 8);
    CHECK(p0.field_exponent == 8);
    CHECK(p0.model_probability() == doctest::Approx(1.0 / 256));

    TieProbability p3 = tie_probability(FieldSpec(8), 3);
    CHECK(p3.model_exponent == 5);
    CHECK(p3.model_probability() == doctest::Approx(1.0 / 32));
    CHECK(p3.field_probability() == doctest::Approx(1.0 / 256));

    TieProbability p256 = tie_probability(FieldSpec(256), 20);
    CHECK(p256.model_exponent == 236);
    CHECK(p256.field_exponent == 256);

    CHECK_THROWS_AS(tie_probability(FieldSpec(8), 8), ConfigError);
}

TEST_CASE("tie probability matches exhaustive enumeration at l = 8, 3 threshold bits") {
    // All valid hashes under a 3-bit threshold are 0..31; two uniform
    // draws collide with probability 1/32.
    FieldSpec f8(8);
    unsigned valid = 0;
    for (unsigned h = 0; h < 256; ++h) {
        if (meets_threshold(HashValue(U256(h)), 3, f8)) ++valid;
    }
    CHECK(valid == 32);
    CHECK(tie_probability(f8, 3).model_probability() == doctest::Approx(1.0 / valid));
}

TEST_CASE("fixed-point values render and parse decimally") {
    ChainWeight w = ChainWeight::from_raw(U256(131) << 62); // 32.75
    CHECK(w.to_decimal(6) == "32.750000");
    CHECK(w.to_decimal(0) == "32");
    CHECK(IntrinsicWeight::from_bits(4).to_decimal(2) == "4.00");
    CHECK(parse_fixed_decimal("12.5") == U256(25) << 63);
    CHECK(parse_fixed_decimal("32.75") == U256(131) << 62);
    CHECK(parse_fixed_decimal("7") == U256(7) << 64);
    CHECK_THROWS_AS(parse_fixed_decimal("12.5x"), ConfigError);
    CHECK_THROWS_AS(parse_fixed_decimal(""), ConfigError);

    FieldSpec f8(8);
    IntrinsicWeight n3 = intrinsic_weight(HashValue(U256(3)), f8);
    // 6.4150374992788438... truncated, not rounded.
    CHECK(n3.to_decimal(6) == "6.415037");
    CHECK(n3.to_hex() == "0x66a3fe5c604297861");
    CHECK(ChainWeight().to_hex() == "0x0");
}

TEST_SUITE_END();
