// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_CHAIN_STORE_HPP
#define POEMLAB_CHAIN_STORE_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <poemlab/entropy/compare.hpp>
#include <poemlab/entropy/field.hpp>
#include <poemlab/entropy/fixed_point.hpp>
#include <poemlab/mine/mining.hpp>
#include <poemlab/mine/time.hpp>

namespace poemlab::chain {

enum class Rule { Poem, Hcr, HcrIntrinsic };

std::string_view rule_name(Rule rule);
Rule rule_from_name(std::string_view name);

/**
 * A mined block as it arrives at a node. The weight field carries the
 * block's intrinsic n as assigned by the mining mode: measured from the
 * id hash in sampled mode, pinned to the threshold in clamped mode.
 *
 * Dominant blocks reference the subordinate tip they merge-mine on top
 * of through sub_tip_ref (the genesis id when no subordinate block
 * exists yet); subordinate blocks leave it empty.
 */
struct BlockRecord {
    entropy::HashValue id;
    entropy::HashValue parent;
    mine::Level level = mine::Level::Subordinate;
    std::optional<entropy::HashValue> sub_tip_ref;
    std::string miner;
    mine::Ticks found_at = 0;
    entropy::IntrinsicWeight weight;
};

enum class InsertOutcome { NewTip, SideBranch, Duplicate, Buffered };

std::string_view outcome_name(InsertOutcome outcome);

/** Per-insertion record, one line of the event trace. */
struct InsertReport {
    entropy::HashValue id;
    InsertOutcome outcome = InsertOutcome::Buffered;
    std::uint64_t height = 0;
    entropy::ChainWeight poem_weight;
    entropy::WideInt hcr_weight;
    entropy::WideInt hcr_intrinsic_weight;
};

/** POEM weights are fixed-point bit counts; the baselines sum integer work units. */
using RuleWeight = std::variant<entropy::ChainWeight, entropy::WideInt>;

struct TipView {
    entropy::HashValue id;
    Rule rule = Rule::Poem;
    RuleWeight weight;
};

/**
 * The block DAG of one node: both levels of the merge-mined hierarchy,
 * cached ancestry-closure weights for every rule, an orphan pool for
 * out-of-order deliveries, and fork-choice queries.
 *
 * A tip's weight is the sum of per-block weights over its ancestry
 * closure: everything reachable through parent links and sub_tip_ref
 * links, each block counted exactly once. POEM sums intrinsic n, the
 * baseline sums 2^(threshold bits), and the intrinsic baseline sums
 * 2^floor(n). Closure weights are maintained incrementally: each
 * dominant block keeps the frontier of subordinate blocks its closure
 * already covers, so a new reference contributes exactly the subchain
 * segment beyond the deepest covered ancestor.
 *
 * The genesis block is implicit: its id is the all-ones field value
 * (which can never satisfy a threshold, so no mined block collides with
 * it), its parent is the reserved all-zero sentinel, and it anchors both
 * levels at weight zero.
 */
class Store {
public:
    Store(entropy::ThresholdSpec thresholds, Rule active_rule);

    const entropy::ThresholdSpec& thresholds() const { return thresholds_; }
    Rule active_rule() const { return active_rule_; }
    const entropy::HashValue& genesis_id() const { return genesis_id_; }

    /**
     * Insert a block, flushing any orphans it unblocks. The first report
     * covers the argument; the rest cover flushed orphans in flush
     * order. Unknown dependencies buffer the block (capacity 10^4,
     * oldest evicted); duplicates are idempotent; threshold or linkage
     * violations throw.
     */
    std::vector<InsertReport> insert_block(const BlockRecord& rec);

    /** Best leaf under the rule. Ties: POEM picks the smaller tip hash; the baselines keep the first received. */
    TipView best_tip(Rule rule) const;
    TipView best_tip() const { return best_tip(active_rule_); }

    /**
     * Best tip restricted to one level's blocks (genesis when none):
     * the chain a miner of that level extends. A subordinate tip is
     * weighed by its own subchain; a dominant tip by its full closure.
     */
    TipView best_level_tip(mine::Level level, Rule rule) const;

    /**
     * Blocks abandoned when the tip moves: |closure(old) \ closure(new)|.
     * Equals the path distance to the fork point on single-level forks
     * and zero whenever the new tip's closure covers the old tip.
     */
    std::uint64_t reorg_depth(const entropy::HashValue& old_tip,
                              const entropy::HashValue& new_tip) const;

    RuleWeight weight_of(const entropy::HashValue& id, Rule rule) const;

    bool contains(const entropy::HashValue& id) const;
    std::uint64_t block_count() const { return static_cast<std::uint64_t>(by_seq_.size()); }
    std::uint64_t orphan_count() const { return static_cast<std::uint64_t>(orphans_.size()); }

    /** Mined blocks in the tip's ancestry closure (genesis not counted). */
    std::uint64_t closure_size(const entropy::HashValue& id) const;

    /** Ancestry closure ids, genesis excluded; order unspecified. */
    std::vector<entropy::HashValue> closure(const entropy::HashValue& id) const;

    /** Height of a stored block along its own level. */
    std::uint64_t height_of(const entropy::HashValue& id) const;

    /** Stored record lookup (genesis has no record). */
    const BlockRecord& record_of(const entropy::HashValue& id) const;

    /** Ids in insertion order, genesis excluded. */
    const std::vector<entropy::HashValue>& insertion_order() const { return by_seq_; }

    /** Leaf ids (no child via parent links) in insertion order. */
    std::vector<entropy::HashValue> leaves() const;

private:
    struct StoredBlock {
        BlockRecord rec;
        bool is_genesis = false;
        std::uint64_t seq = 0;
        std::uint64_t height = 0;
        std::uint64_t closure_blocks = 0;
        entropy::ChainWeight poem_weight;
        entropy::WideInt hcr_weight;
        entropy::WideInt hcr_intrinsic_weight;
        // Maximal subordinate blocks covered by this block's closure.
        // Singleton {self} on the subordinate level, the merged coverage
        // for dominant blocks, {genesis} at the root.
        std::vector<entropy::HashValue> frontier;
    };

    struct PendingOrphan {
        BlockRecord rec;
        entropy::HashValue waiting_on;
        std::uint64_t enqueued = 0;
    };

    const StoredBlock& stored(const entropy::HashValue& id) const;
    const StoredBlock* find(const entropy::HashValue& id) const;
    InsertReport store_block(const BlockRecord& rec);
    void buffer_orphan(const BlockRecord& rec, const entropy::HashValue& missing);
    std::optional<entropy::HashValue> missing_dependency(const BlockRecord& rec) const;
    bool better_than(const StoredBlock& candidate, const StoredBlock& best, Rule rule) const;

    /** Deepest common subordinate ancestor of a and b (walk-up by height). */
    const StoredBlock& sub_lca(const StoredBlock& a, const StoredBlock& b) const;
    bool is_sub_ancestor(const StoredBlock& ancestor, const StoredBlock& descendant) const;

    entropy::ThresholdSpec thresholds_;
    Rule active_rule_;
    entropy::HashValue genesis_id_;
    std::map<entropy::U256, StoredBlock> blocks_;
    std::vector<entropy::HashValue> by_seq_;
    std::set<std::uint64_t> leaf_seqs_;
    std::map<std::uint64_t, entropy::HashValue> seq_to_id_;
    std::deque<PendingOrphan> orphans_;
    std::set<entropy::U256> orphan_ids_;
    std::uint64_t orphan_counter_ = 0;
    entropy::HashValue cached_tips_[3];
    entropy::HashValue level_tips_[2][3]; // [level][rule]
};

inline constexpr std::size_t kOrphanPoolCapacity = 10000;

} // namespace poemlab::chain

#endif // POEMLAB_CHAIN_STORE_HPP
