// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/net/trace.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include <poemlab/errors.hpp>
#include <poemlab/version.hpp>

namespace poemlab::net {

using nlohmann::ordered_json;

namespace {

std::string wide_hex(const entropy::WideInt& v) {
    std::ostringstream os;
    os << std::hex << v;
    return "0x" + os.str();
}

std::string rate6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::string metrics_csv_row(const MetricsRecord& m) {
    std::ostringstream os;
    os << m.run_id << ',' << m.seed << ',' << chain::rule_name(m.rule) << ',' << m.m_t << ','
       << m.m_d << ',' << m.blocks << ',' << rate6(m.orphan_rate) << ','
       << rate6(m.mean_fork_persistence) << ',' << m.max_reorg_depth << ','
       << rate6(m.attack_success) << ',' << m.min_overtake_k.str();
    return os.str();
}

MetricsRecord aggregate_metrics(const std::vector<MetricsRecord>& rows) {
    if (rows.empty()) throw Error("aggregate_metrics needs at least one row");
    MetricsRecord agg;
    agg.run_id = "aggregate";
    agg.seed = rows.size(); // the seed column carries the run count
    agg.rule = rows.front().rule;
    agg.m_t = rows.front().m_t;
    agg.m_d = rows.front().m_d;
    agg.min_overtake_k = rows.front().min_overtake_k;
    double orphan = 0.0, persistence = 0.0, attack = 0.0;
    for (const MetricsRecord& r : rows) {
        agg.blocks += r.blocks;
        orphan += r.orphan_rate;
        persistence += r.mean_fork_persistence;
        attack += r.attack_success;
        agg.max_reorg_depth = std::max(agg.max_reorg_depth, r.max_reorg_depth);
        agg.fork_episodes += r.fork_episodes;
        agg.canonical_blocks += r.canonical_blocks;
        agg.orphaned_blocks += r.orphaned_blocks;
        agg.in_flight_blocks += r.in_flight_blocks;
        agg.conservation_ok = agg.conservation_ok && r.conservation_ok;
        agg.agreed_at_end = agg.agreed_at_end && r.agreed_at_end;
        for (const auto& [depth, count] : r.reorg_histogram) agg.reorg_histogram[depth] += count;
    }
    const double n = static_cast<double>(rows.size());
    // Per-run rates are already rounded to six decimals, so these means
    // equal recomputation from the emitted CSV rows.
    agg.orphan_rate = std::round(orphan / n * 1e6) / 1e6;
    agg.mean_fork_persistence = std::round(persistence / n * 1e6) / 1e6;
    agg.attack_success = std::round(attack / n * 1e6) / 1e6;
    return agg;
}

void write_trace(std::ostream& out, const RunResult& run) {
    ordered_json meta;
    meta["schema"] = "poemlab-trace/1";
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["config_sha256"] = run.digest;
    meta["seed"] = run.seed;
    meta["rule"] = chain::rule_name(run.config.rule);
    out << meta.dump() << '\n';

    for (const TraceEvent& ev : run.events) {
        ordered_json j;
        j["t"] = ev.t;
        switch (ev.kind) {
        case TraceKind::Found:
            j["e"] = "found";
            j["node"] = run.config.nodes[ev.node].id;
            j["miner"] = ev.miner;
            j["id"] = ev.id.to_hex();
            j["parent"] = ev.parent.to_hex();
            j["level"] = mine::level_name(ev.level);
            if (ev.sub_tip_ref) j["ref"] = ev.sub_tip_ref->to_hex();
            j["n"] = entropy::to_hex(ev.n.raw());
            break;
        case TraceKind::Deliver:
            j["e"] = "deliver";
            j["node"] = run.config.nodes[ev.node].id;
            j["id"] = ev.id.to_hex();
            j["dup"] = ev.duplicate;
            j["deliveries"] = ev.deliveries;
            break;
        case TraceKind::Insert:
            j["e"] = "insert";
            j["node"] = run.config.nodes[ev.node].id;
            j["id"] = ev.id.to_hex();
            j["parent"] = ev.parent.to_hex();
            j["level"] = mine::level_name(ev.level);
            if (ev.sub_tip_ref) j["ref"] = ev.sub_tip_ref->to_hex();
            j["n"] = entropy::to_hex(ev.n.raw());
            j["outcome"] = chain::outcome_name(ev.outcome);
            if (ev.outcome == chain::InsertOutcome::NewTip ||
                ev.outcome == chain::InsertOutcome::SideBranch) {
                j["w_poem"] = entropy::to_hex(ev.w_poem.raw());
                j["w_hcr"] = wide_hex(ev.w_hcr);
                j["w_hcr_intrinsic"] = wide_hex(ev.w_hcr_intrinsic);
            }
            j["tip"] = ev.tip.to_hex();
            j["reorg"] = ev.reorg;
            break;
        case TraceKind::Reveal:
            j["e"] = "reveal";
            j["node"] = run.config.nodes[ev.node].id;
            j["miner"] = ev.miner;
            j["count"] = ev.reveal_count;
            break;
        case TraceKind::Agreement:
            j["e"] = "agreement";
            j["agree"] = ev.agree;
            if (ev.agree) j["tip"] = ev.tip.to_hex();
            j["deliveries"] = ev.deliveries;
            break;
        }
        out << j.dump() << '\n';
    }
}

} // namespace poemlab::net
