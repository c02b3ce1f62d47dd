// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_NET_TRACE_HPP
#define POEMLAB_NET_TRACE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <poemlab/chain/store.hpp>
#include <poemlab/net/config.hpp>

namespace poemlab::net {

/**
 * One line of the replayable event trace. A single struct covers all
 * event kinds; the writer emits only the fields that belong to each
 * kind, in a fixed order, so trace files are byte-stable.
 */
enum class TraceKind { Found, Deliver, Insert, Reveal, Agreement };

struct TraceEvent {
    mine::Ticks t = 0;
    TraceKind kind = TraceKind::Found;
    std::uint32_t node = 0;

    std::string miner;                               // Found, Reveal
    entropy::HashValue id;                           // Found, Deliver, Insert
    entropy::HashValue parent;                       // Found, Insert
    mine::Level level = mine::Level::Subordinate;    // Found, Insert
    std::optional<entropy::HashValue> sub_tip_ref;   // Found, Insert (dominant)
    entropy::IntrinsicWeight n;                      // Found, Insert
    chain::InsertOutcome outcome = chain::InsertOutcome::Buffered; // Insert
    entropy::ChainWeight w_poem;                     // Insert (stored blocks)
    entropy::WideInt w_hcr{0};
    entropy::WideInt w_hcr_intrinsic{0};
    entropy::HashValue tip;                          // Insert: node tip after; Agreement: agreed tip
    std::uint64_t reorg = 0;                         // Insert: abandoned blocks when the tip moved
    bool duplicate = false;                          // Deliver
    bool agree = false;                              // Agreement
    std::uint64_t deliveries = 0;                    // novel deliveries processed so far
    std::uint64_t reveal_count = 0;                  // Reveal: blocks published
};

/** The CSV row of one run; rates are emitted with six decimals. */
struct MetricsRecord {
    std::string run_id;
    std::uint64_t seed = 0;
    chain::Rule rule = chain::Rule::Poem;
    unsigned m_t = 0;
    unsigned m_d = 0;
    std::uint64_t blocks = 0; // blocks found before the horizon
    double orphan_rate = 0.0;
    double mean_fork_persistence = 0.0;
    std::uint64_t max_reorg_depth = 0;
    double attack_success = 0.0;
    entropy::WideInt min_overtake_k{0}; // analytic bound for the configured rule

    // Accounting beyond the CSV columns.
    std::uint64_t canonical_blocks = 0;
    std::uint64_t orphaned_blocks = 0;
    std::uint64_t in_flight_blocks = 0;
    std::uint64_t fork_episodes = 0;
    bool conservation_ok = true;
    bool agreed_at_end = true;
    std::map<std::uint64_t, std::uint64_t> reorg_histogram;
};

struct OrphanStats {
    double orphan_rate = 0.0;
    double mean_fork_persistence = 0.0;
    std::uint64_t fork_episodes = 0;
    std::uint64_t max_reorg_depth = 0;
    std::map<std::uint64_t, std::uint64_t> reorg_histogram;
    std::uint64_t canonical_blocks = 0;
    std::uint64_t orphaned_blocks = 0;
    std::uint64_t in_flight_blocks = 0;
    bool conservation_ok = true;
    bool agreed_at_end = true;
};

/** Everything one run produced, kept in memory for direct inspection. */
struct RunResult {
    SimConfig config;
    std::uint64_t seed = 0;
    std::string digest; // config SHA-256, hex
    std::vector<TraceEvent> events;
    MetricsRecord metrics;
    std::set<entropy::U256> canonical;          // observer's canonical closure at the end
    std::set<entropy::U256> stored_at_observer; // every block the observer stored
    std::uint64_t found_count = 0;
    std::uint64_t novel_deliveries = 0;
    std::vector<entropy::HashValue> final_tips; // per node, in node order
};

inline constexpr std::string_view kMetricsCsvHeader =
    "run_id,seed,rule,m_t,m_d,blocks,orphan_rate,mean_fork_persistence,max_reorg_depth,"
    "attack_success,min_overtake_k";

std::string metrics_csv_row(const MetricsRecord& m);

/**
 * Aggregate over per-run rows exactly as emitted: rates re-averaged
 * from their six-decimal values, maxima and sums over integers, so the
 * aggregate row always equals recomputation from the CSV itself.
 */
MetricsRecord aggregate_metrics(const std::vector<MetricsRecord>& rows);

/** JSON Lines trace: one meta line, then one line per event. */
void write_trace(std::ostream& out, const RunResult& run);

} // namespace poemlab::net

#endif // POEMLAB_NET_TRACE_HPP
