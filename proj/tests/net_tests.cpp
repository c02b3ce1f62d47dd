// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <poemlab/entropy/bounds.hpp>
#include <poemlab/errors.hpp>
#include <poemlab/net/config.hpp>
#include <poemlab/net/sim.hpp>
#include <poemlab/net/trace.hpp>

using namespace poemlab;
using namespace poemlab::net;
using chain::Rule;
using mine::MinerStrategy;

namespace {

SimConfig solo_config() {
    SimConfig c;
    c.field_bits = 64;
    c.m_t = 10;
    c.m_d = 40; // dominant finds effectively never happen
    c.rule = Rule::Poem;
    c.mean_block_ms = 100.0;
    c.horizon_blocks = 100;
    c.nodes = {{"n0", {}}};
    c.miners = {{"m0", "n0", 1.0, {}}};
    return c;
}

SimConfig two_node_config(Rule rule, double delay_ms) {
    SimConfig c;
    c.field_bits = 64;
    c.m_t = 12;
    c.m_d = 30; // single-level runs: forks come from latency alone
    c.rule = rule;
    c.mean_block_ms = 100.0;
    c.horizon_blocks = 60;
    c.nodes = {{"n0", {}}, {"n1", {}}};
    c.links = {{"n0", "n1", DelayModel::fixed(delay_ms)},
               {"n1", "n0", DelayModel::fixed(delay_ms)}};
    c.miners = {{"m0", "n0", 0.5, {}}, {"m1", "n1", 0.5, {}}};
    return c;
}

SimConfig withhold_config(unsigned reveal_after) {
    SimConfig c;
    c.field_bits = 64;
    c.m_t = 20;
    c.m_d = 5;
    c.rule = Rule::Poem;
    c.mode = mine::MiningModeKind::ClampedIntrinsic;
    c.mean_block_ms = 100.0;
    c.horizon_blocks = 50;
    c.nodes = {{"n0", {}}, {"n1", {}}};
    c.links = {{"n0", "n1", DelayModel::fixed(10.0)},
               {"n1", "n0", DelayModel::fixed(10.0)}};
    MinerStrategy withhold;
    withhold.kind = MinerStrategy::Kind::WithholdDominant;
    withhold.reveal_after = reveal_after;
    c.miners = {{"honest", "n0", 0.9, {}}, {"attacker", "n1", 0.1, withhold}};
    return c;
}

void expect_config_error(const SimConfig& c, const std::string& fragment) {
    try {
        validate_config(c);
        FAIL("expected rejection mentioning '", fragment, "'");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CAPTURE(what);
        CHECK(what.find(fragment) != std::string::npos);
    }
}

void expect_parse_error(const std::string& text, const std::string& fragment) {
    try {
        parse_config_json(text);
        FAIL("expected parse rejection mentioning '", fragment, "'");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CAPTURE(what);
        CHECK(what.find(fragment) != std::string::npos);
    }
}

} // namespace

TEST_SUITE("net") {

TEST_CASE("validation names the offending field") {
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.miners[1].hashrate_fraction = 0.4;
        expect_config_error(c, "hashrate_fraction' values must sum to 1");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.nodes[1].id = "n0";
        expect_config_error(c, "'nodes.id' repeats 'n0'");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.miners[0].node = "nope";
        expect_config_error(c, "'miners.node' names unknown node 'nope'");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.links.push_back({"n0", "n0", DelayModel::fixed(1.0)});
        expect_config_error(c, "must not loop");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.links.pop_back(); // n1 can no longer reach n0
        expect_config_error(c, "strongly connected");
    }
    {
        SimConfig c = withhold_config(0);
        expect_config_error(c, "'miners.reveal_after_sub_blocks' must be >= 1");
    }
    {
        SimConfig c = solo_config();
        c.horizon_blocks = 0;
        expect_config_error(c, "'horizon_blocks' must be >= 1");
    }
    {
        SimConfig c = solo_config();
        c.mean_block_ms = 0.0;
        expect_config_error(c, "'mean_block_ms' must be > 0");
    }
    {
        SimConfig c = solo_config();
        c.mode = mine::MiningModeKind::Grind;
        expect_config_error(c, "does not support grind");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.links[0].delay = DelayModel::fixed(-1.0);
        expect_config_error(c, "delay_ms' must be >= 0");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.links[0].delay = DelayModel::uniform(5.0, 2.0);
        expect_config_error(c, "hi_ms' must be >= lo_ms");
    }
    {
        SimConfig c = two_node_config(Rule::Poem, 10.0);
        c.m_t = 40;
        c.m_d = 30; // 70 >= 64
        expect_config_error(c, "below field width");
    }
}

TEST_CASE("JSON round-trip is the identity and unknown fields are rejected") {
    SimConfig c = two_node_config(Rule::Hcr, 25.0);
    c.nodes[1].rule = Rule::HcrIntrinsic;
    c.links[0].delay = DelayModel::exponential(30.0);
    c.links[1].delay = DelayModel::uniform(5.0, 45.0);
    c.max_time_ms = 60000.0;
    MinerStrategy withhold;
    withhold.kind = MinerStrategy::Kind::WithholdDominant;
    withhold.reveal_after = 3;
    c.miners[0].hashrate_fraction = 0.25;
    c.miners[1].hashrate_fraction = 0.25;
    c.miners.push_back({"m2", "n0", 0.5, withhold});

    const std::string text = serialize_config_json(c);
    const SimConfig parsed = parse_config_json(text);
    CHECK(serialize_config_json(parsed) == text);
    CHECK(parsed.nodes[1].rule == Rule::HcrIntrinsic);
    CHECK(parsed.links[1].delay.hi_ms == 45.0);
    CHECK(parsed.miners[2].strategy.reveal_after == 3);
    CHECK_NOTHROW(validate_config(parsed));

    // Digest: stable, 64 lowercase hex characters, sensitive to content.
    const std::string digest = config_digest(c);
    CHECK(digest == config_digest(parsed));
    CHECK(digest.size() == 64);
    for (char ch : digest) {
        CHECK((std::isdigit(static_cast<unsigned char>(ch)) || (ch >= 'a' && ch <= 'f')));
    }
    SimConfig other = c;
    other.m_t = 13;
    CHECK(config_digest(other) != digest);

    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
    doc["bogus"] = 1;
    expect_parse_error(doc.dump(), "unknown field 'bogus'");
    doc.erase("bogus");
    doc.erase("m_t");
    expect_parse_error(doc.dump(), "missing field 'm_t'");

    doc = nlohmann::ordered_json::parse(text);
    doc["miners"][0]["reveal_after_sub_blocks"] = 2; // honest miner
    expect_parse_error(doc.dump(), "applies to withhold-dominant only");
    doc = nlohmann::ordered_json::parse(text);
    doc["miners"][2].erase("reveal_after_sub_blocks");
    expect_parse_error(doc.dump(), "missing field 'miners[2].reveal_after_sub_blocks'");
    doc = nlohmann::ordered_json::parse(text);
    doc["links"][0]["delay"]["model"] = "gaussian";
    expect_parse_error(doc.dump(), "must be fixed, exponential, or uniform");
    doc = nlohmann::ordered_json::parse(text);
    doc["m_t"] = "twelve";
    expect_parse_error(doc.dump(), "field 'm_t' has the wrong type");
    expect_parse_error("not json", "not valid JSON");
}

TEST_CASE("a solo miner builds one orphan-free chain") {
    const RunResult r = run(solo_config(), 42);
    const MetricsRecord& m = r.metrics;
    CHECK(m.blocks == 100); // mining stops exactly at the horizon
    CHECK(m.canonical_blocks == 100);
    CHECK(m.orphaned_blocks == 0);
    CHECK(m.in_flight_blocks == 0);
    CHECK(m.orphan_rate == 0.0);
    CHECK(m.max_reorg_depth == 0);
    CHECK(m.fork_episodes == 0);
    CHECK(m.mean_fork_persistence == 0.0);
    CHECK(m.conservation_ok);
    CHECK(m.agreed_at_end);
    CHECK(m.attack_success == 0.0);
    CHECK(r.novel_deliveries == 0); // nobody to gossip with
    CHECK(r.final_tips.size() == 1);
    CHECK(r.canonical.size() == 100);
    // POEM's analytic overtake bound for these thresholds.
    CHECK(m.min_overtake_k == entropy::WideInt(entropy::overtake_bound_entropy(
                                   solo_config().thresholds(), 0)
                                   .min_blocks));
}

TEST_CASE("two-miner latency runs fork, reconverge, and conserve blocks") {
    std::uint64_t total_episodes = 0;
    std::uint64_t poem_orphans = 0, hcr_orphans = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RunResult rp = run(two_node_config(Rule::Poem, 50.0), seed);
        CHECK(rp.metrics.conservation_ok);
        CHECK(rp.metrics.canonical_blocks >= 60);
        CHECK(rp.metrics.blocks >= rp.metrics.canonical_blocks);
        total_episodes += rp.metrics.fork_episodes;
        poem_orphans += rp.metrics.orphaned_blocks;

        const RunResult rh = run(two_node_config(Rule::Hcr, 50.0), seed);
        CHECK(rh.metrics.conservation_ok);
        hcr_orphans += rh.metrics.orphaned_blocks;

        bool saw_disagreement = false, saw_agreement_back = false;
        for (const TraceEvent& ev : rp.events) {
            if (ev.kind != TraceKind::Agreement) continue;
            if (!ev.agree) saw_disagreement = true;
            if (ev.agree && saw_disagreement) saw_agreement_back = true;
        }
        CHECK(saw_disagreement == (rp.metrics.fork_episodes > 0));
        if (rp.metrics.fork_episodes > 1) CHECK(saw_agreement_back);
    }
    // 50 ms latency against a 200 ms per-miner interval: forks are routine.
    CHECK(total_episodes > 0);
    CHECK(poem_orphans + hcr_orphans > 0);
}

TEST_CASE("identical seed and config reproduce the trace byte for byte") {
    const SimConfig c = two_node_config(Rule::Poem, 50.0);
    const RunResult a = run(c, 2026);
    const RunResult b = run(c, 2026);
    std::ostringstream ta, tb;
    write_trace(ta, a);
    write_trace(tb, b);
    CHECK(ta.str() == tb.str());
    CHECK(!ta.str().empty());
    CHECK(metrics_csv_row(a.metrics) == metrics_csv_row(b.metrics));

    const RunResult other = run(c, 2027);
    std::ostringstream to;
    write_trace(to, other);
    CHECK(ta.str() != to.str());
}

TEST_CASE("gossip floods once: one novel and one duplicate delivery per block") {
    const RunResult r = run(two_node_config(Rule::Poem, 50.0), 5);
    std::uint64_t novel = 0, dup = 0;
    for (const TraceEvent& ev : r.events) {
        if (ev.kind != TraceKind::Deliver) continue;
        if (ev.duplicate) {
            ++dup;
        } else {
            ++novel;
        }
    }
    // Each block crosses the only link once and its echo dies at the origin.
    CHECK(novel == r.metrics.blocks);
    CHECK(dup == r.metrics.blocks);
    CHECK(novel == r.novel_deliveries);
}

TEST_CASE("withholding boundaries match the closed-form arithmetic") {
    // Clamped weights, m_t = 20, m_d = 5: the withheld dominant block
    // carries 25 bits (weight 2^25) against k honest subordinate blocks
    // of 20 bits (weight 2^20) each.
    for (std::uint64_t seed : {7ull, 99ull, 123456789ull}) {
        for (unsigned k : {1u, 2u, 31u, 32u, 33u}) {
            const WithholdingOutcome o = withholding_attack(withhold_config(k), seed);
            CAPTURE(seed);
            CAPTURE(k);
            CHECK(o.reveal_after == k);

            // POEM: 25 > 20k only at k = 1.
            CHECK(o[Rule::Poem].success == (k == 1));
            // Heaviest chain: 2^25 > k * 2^20 up to k = 31; the k = 32
            // tie keeps the first-received honest chain.
            CHECK(o[Rule::Hcr].success == (k <= 31));
            CHECK(o[Rule::HcrIntrinsic].success == (k <= 31));

            for (Rule rule : {Rule::Poem, Rule::Hcr, Rule::HcrIntrinsic}) {
                if (o[rule].success) {
                    CHECK(o[rule].reorg_depth == k); // the honest subs all drop
                } else {
                    CHECK(o[rule].reorg_depth == 0);
                }
            }
        }
    }

    // The baselines weigh thresholds, not realized hashes, so their
    // boundary is mode-independent.
    SimConfig sampled31 = withhold_config(31);
    sampled31.mode = mine::MiningModeKind::Sampled;
    CHECK(withholding_attack(sampled31, 1)[Rule::Hcr].success);
    SimConfig sampled32 = withhold_config(32);
    sampled32.mode = mine::MiningModeKind::Sampled;
    CHECK(!withholding_attack(sampled32, 1)[Rule::Hcr].success);

    SimConfig honest_only = two_node_config(Rule::Poem, 10.0);
    CHECK_THROWS_AS(withholding_attack(honest_only, 1), ConfigError);
}

TEST_CASE("a withholding miner's full run stays conservative") {
    SimConfig c = withhold_config(2);
    c.m_t = 8;
    c.m_d = 3; // dominant finds are common enough to stash and reveal
    c.horizon_blocks = 40;
    c.miners[0].hashrate_fraction = 0.7;
    c.miners[1].hashrate_fraction = 0.3;
    std::uint64_t total_reveals = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const RunResult r = run(c, seed);
        CHECK(r.metrics.conservation_ok);
        CHECK((r.metrics.attack_success == 0.0 || r.metrics.attack_success == 1.0));
        std::uint64_t stashed = 0, revealed = 0;
        for (const TraceEvent& ev : r.events) {
            if (ev.kind == TraceKind::Found && ev.miner == "attacker" &&
                ev.level == mine::Level::Dominant) {
                ++stashed;
            }
            if (ev.kind == TraceKind::Reveal) {
                CHECK(ev.reveal_count >= 1);
                revealed += ev.reveal_count;
            }
        }
        total_reveals += revealed;
        // After the drain, the only blocks the observer never saw are the
        // dominants still sitting in the attacker's stash.
        CHECK(r.metrics.in_flight_blocks == stashed - revealed);
    }
    CHECK(total_reveals > 0);
}

TEST_CASE("metrics rows and the aggregate stay consistent with their CSV form") {
    CHECK(kMetricsCsvHeader ==
          "run_id,seed,rule,m_t,m_d,blocks,orphan_rate,mean_fork_persistence,"
          "max_reorg_depth,attack_success,min_overtake_k");

    MetricsRecord a;
    a.run_id = "run-7";
    a.seed = 7;
    a.rule = Rule::Hcr;
    a.m_t = 16;
    a.m_d = 8;
    a.blocks = 100;
    a.orphan_rate = 0.125;
    a.mean_fork_persistence = 2.5;
    a.max_reorg_depth = 3;
    a.attack_success = 0.0;
    a.min_overtake_k = entropy::WideInt(257);
    a.canonical_blocks = 88;
    a.orphaned_blocks = 12;
    a.fork_episodes = 4;
    CHECK(metrics_csv_row(a) == "run-7,7,hcr,16,8,100,0.125000,2.500000,3,0.000000,257");

    MetricsRecord b = a;
    b.run_id = "run-8";
    b.seed = 8;
    b.orphan_rate = 0.25;
    b.mean_fork_persistence = 1.5;
    b.max_reorg_depth = 5;
    b.attack_success = 1.0;
    b.blocks = 110;

    const MetricsRecord agg = aggregate_metrics({a, b});
    CHECK(agg.run_id == "aggregate");
    CHECK(agg.seed == 2); // the seed column carries the run count
    CHECK(agg.blocks == 210);
    CHECK(agg.orphan_rate == 0.1875);
    CHECK(agg.mean_fork_persistence == 2.0);
    CHECK(agg.max_reorg_depth == 5);
    CHECK(agg.attack_success == 0.5);
    CHECK(agg.fork_episodes == 8);
    CHECK(metrics_csv_row(agg) == "aggregate,2,hcr,16,8,210,0.187500,2.000000,5,0.500000,257");

    // The aggregate equals recomputation from the emitted rows.
    auto csv_field = [](const std::string& row, int index) {
        std::istringstream is(row);
        std::string part;
        for (int i = 0; i <= index; ++i) std::getline(is, part, ',');
        return part;
    };
    const double mean_orphan = (std::stod(csv_field(metrics_csv_row(a), 6)) +
                                std::stod(csv_field(metrics_csv_row(b), 6))) /
                               2.0;
    CHECK(agg.orphan_rate == mean_orphan);
    CHECK_THROWS_AS(aggregate_metrics({}), Error);
}

TEST_CASE("fork persistence is measured in novel deliveries") {
    RunResult r;
    r.found_count = 3;
    r.novel_deliveries = 9;

    TraceEvent found;
    found.kind = TraceKind::Found;
    found.id = entropy::HashValue(entropy::U256(11));
    r.events.push_back(found);
    found.id = entropy::HashValue(entropy::U256(12));
    r.events.push_back(found);
    found.id = entropy::HashValue(entropy::U256(13));
    r.events.push_back(found);

    TraceEvent ev;
    ev.kind = TraceKind::Agreement;
    ev.agree = false;
    ev.deliveries = 2;
    r.events.push_back(ev);
    ev.agree = true;
    ev.deliveries = 5;
    r.events.push_back(ev);

    TraceEvent ins;
    ins.kind = TraceKind::Insert;
    ins.reorg = 2;
    r.events.push_back(ins);

    ev.agree = false;
    ev.deliveries = 7; // still open when the run ends
    r.events.push_back(ev);

    r.canonical = {entropy::U256(11), entropy::U256(12)};
    r.stored_at_observer = {entropy::U256(11), entropy::U256(12), entropy::U256(13)};

    const OrphanStats s = measure_orphans(r);
    CHECK(s.fork_episodes == 2);
    CHECK(s.mean_fork_persistence == 2.5); // (5 - 2) and (9 - 7)
    CHECK(!s.agreed_at_end);
    CHECK(s.max_reorg_depth == 2);
    CHECK(s.reorg_histogram.at(2) == 1);
    CHECK(s.canonical_blocks == 2);
    CHECK(s.orphaned_blocks == 1);
    CHECK(s.in_flight_blocks == 0);
    CHECK(s.orphan_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(s.conservation_ok);

    r.stored_at_observer.insert(entropy::U256(99)); // never found
    CHECK(!measure_orphans(r).conservation_ok);
}

} // TEST_SUITE("net")
