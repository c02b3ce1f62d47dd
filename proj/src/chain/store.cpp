// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/chain/store.hpp>

#include <algorithm>

#include <poemlab/entropy/intrinsic.hpp>
#include <poemlab/errors.hpp>

namespace poemlab::chain {

using namespace poemlab::entropy;
using mine::Level;

std::string_view rule_name(Rule rule) {
    switch (rule) {
    case Rule::Poem: return "poem";
    case Rule::Hcr: return "hcr";
    case Rule::HcrIntrinsic: return "hcr-intrinsic";
    }
    throw Error("unreachable rule");
}

Rule rule_from_name(std::string_view name) {
    if (name == "poem") return Rule::Poem;
    if (name == "hcr") return Rule::Hcr;
    if (name == "hcr-intrinsic") return Rule::HcrIntrinsic;
    throw ConfigError("unknown rule '" + std::string(name) + "'; expected poem, hcr, or hcr-intrinsic");
}

std::string_view outcome_name(InsertOutcome outcome) {
    switch (outcome) {
    case InsertOutcome::NewTip: return "new-tip";
    case InsertOutcome::SideBranch: return "side-branch";
    case InsertOutcome::Duplicate: return "duplicate";
    case InsertOutcome::Buffered: return "buffered";
    }
    throw Error("unreachable outcome");
}

namespace {

U256 all_ones(unsigned bits) {
    if (bits == 256) return ~U256(0);
    return (U256(1) << bits) - 1;
}

InsertReport report_for(const HashValue& id, InsertOutcome outcome) {
    InsertReport r;
    r.id = id;
    r.outcome = outcome;
    return r;
}

} // namespace

Store::Store(ThresholdSpec thresholds, Rule active_rule)
    : thresholds_(std::move(thresholds)),
      active_rule_(active_rule),
      genesis_id_(all_ones(thresholds_.field().bits())) {
    StoredBlock genesis;
    genesis.rec.id = genesis_id_;
    genesis.rec.parent = HashValue(U256(0)); // reserved sentinel
    genesis.is_genesis = true;
    genesis.frontier = {genesis_id_};
    blocks_.emplace(genesis_id_.value(), std::move(genesis));
    leaf_seqs_.insert(0); // genesis holds seq 0
    for (HashValue& tip : cached_tips_) tip = genesis_id_;
    for (auto& level : level_tips_) {
        for (HashValue& tip : level) tip = genesis_id_;
    }
}

const Store::StoredBlock* Store::find(const HashValue& id) const {
    auto it = blocks_.find(id.value());
    return it == blocks_.end() ? nullptr : &it->second;
}

const Store::StoredBlock& Store::stored(const HashValue& id) const {
    const StoredBlock* b = find(id);
    if (b == nullptr) {
        throw UnknownBlockError(id.to_hex());
    }
    return *b;
}

bool Store::contains(const HashValue& id) const { return find(id) != nullptr; }

bool Store::is_sub_ancestor(const StoredBlock& ancestor, const StoredBlock& descendant) const {
    if (ancestor.is_genesis) return true;
    if (descendant.is_genesis) return false;
    const StoredBlock* walk = &descendant;
    while (!walk->is_genesis && walk->height > ancestor.height) {
        walk = &stored(walk->rec.parent);
    }
    return walk->rec.id == ancestor.rec.id && !walk->is_genesis;
}

const Store::StoredBlock& Store::sub_lca(const StoredBlock& a, const StoredBlock& b) const {
    const StoredBlock* x = &a;
    const StoredBlock* y = &b;
    while (!x->is_genesis && x->height > y->height) x = &stored(x->rec.parent);
    while (!y->is_genesis && y->height > x->height) y = &stored(y->rec.parent);
    while (x != y && !x->is_genesis && !y->is_genesis) {
        x = &stored(x->rec.parent);
        y = &stored(y->rec.parent);
    }
    return x == y ? *x : stored(genesis_id_);
}

std::optional<HashValue> Store::missing_dependency(const BlockRecord& rec) const {
    if (!contains(rec.parent)) return rec.parent;
    if (rec.level == Level::Dominant && rec.sub_tip_ref && !contains(*rec.sub_tip_ref)) {
        return *rec.sub_tip_ref;
    }
    return std::nullopt;
}

bool Store::better_than(const StoredBlock& candidate, const StoredBlock& best, Rule rule) const {
    switch (rule) {
    case Rule::Poem:
        return compare_poem(candidate.poem_weight, candidate.rec.id, best.poem_weight,
                            best.rec.id) == std::strong_ordering::greater;
    case Rule::Hcr:
        return compare_hcr(candidate.hcr_weight, best.hcr_weight) == std::weak_ordering::greater;
    case Rule::HcrIntrinsic:
        return compare_hcr(candidate.hcr_intrinsic_weight, best.hcr_intrinsic_weight) ==
               std::weak_ordering::greater;
    }
    throw Error("unreachable rule");
}

InsertReport Store::store_block(const BlockRecord& rec) {
    const StoredBlock& parent = stored(rec.parent);
    if (!parent.is_genesis && parent.rec.level != rec.level) {
        throw InvalidBlockError("block " + rec.id.to_hex() + " links a parent on the other level");
    }

    StoredBlock b;
    b.rec = rec;
    b.seq = static_cast<std::uint64_t>(by_seq_.size()) + 1;
    b.height = parent.height + 1;

    if (rec.level == Level::Subordinate) {
        if (rec.sub_tip_ref) {
            throw InvalidBlockError("subordinate block " + rec.id.to_hex() +
                                    " carries a sub-tip reference");
        }
        b.poem_weight = parent.poem_weight.plus(rec.weight);
        b.hcr_weight = parent.hcr_weight + (WideInt(1) << thresholds_.sub_bits());
        b.hcr_intrinsic_weight =
            parent.hcr_intrinsic_weight + (WideInt(1) << rec.weight.floor_bits());
        b.closure_blocks = parent.closure_blocks + 1;
        b.frontier = {rec.id};
    } else {
        if (!rec.sub_tip_ref) {
            throw InvalidBlockError("dominant block " + rec.id.to_hex() +
                                    " lacks a sub-tip reference");
        }
        const StoredBlock& ref = stored(*rec.sub_tip_ref);
        if (!ref.is_genesis && ref.rec.level != Level::Subordinate) {
            throw InvalidBlockError("dominant block " + rec.id.to_hex() +
                                    " references a non-subordinate block");
        }
        // The reference contributes only the subchain segment beyond the
        // deepest subordinate ancestor this closure already covers.
        const StoredBlock* covered = &stored(genesis_id_);
        for (const HashValue& f : parent.frontier) {
            const StoredBlock& lca = sub_lca(ref, stored(f));
            if (!lca.is_genesis && lca.height > covered->height) covered = &lca;
        }
        b.poem_weight = ChainWeight::from_raw(parent.poem_weight.raw() + U256(rec.weight.raw()) +
                                              (ref.poem_weight.raw() - covered->poem_weight.raw()));
        b.hcr_weight = parent.hcr_weight + (WideInt(1) << thresholds_.dominant_bits()) +
                       (ref.hcr_weight - covered->hcr_weight);
        b.hcr_intrinsic_weight = parent.hcr_intrinsic_weight +
                                 (WideInt(1) << rec.weight.floor_bits()) +
                                 (ref.hcr_intrinsic_weight - covered->hcr_intrinsic_weight);
        b.closure_blocks = parent.closure_blocks + 1 + (ref.height - covered->height);
        for (const HashValue& f : parent.frontier) {
            if (!is_sub_ancestor(stored(f), ref)) b.frontier.push_back(f);
        }
        bool subsumed = false;
        for (const HashValue& f : b.frontier) {
            if (is_sub_ancestor(ref, stored(f))) subsumed = true;
        }
        if (!subsumed) b.frontier.push_back(*rec.sub_tip_ref);
    }

    InsertReport report;
    report.id = rec.id;
    report.height = b.height;
    report.poem_weight = b.poem_weight;
    report.hcr_weight = b.hcr_weight;
    report.hcr_intrinsic_weight = b.hcr_intrinsic_weight;

    const std::uint64_t seq = b.seq;
    auto [it, inserted] = blocks_.emplace(rec.id.value(), std::move(b));
    if (!inserted) throw Error("store_block on existing id"); // callers pre-check
    by_seq_.push_back(rec.id);
    seq_to_id_.emplace(seq, rec.id);
    leaf_seqs_.insert(seq);
    leaf_seqs_.erase(stored(rec.parent).seq); // parent stops being a leaf; genesis is seq 0

    bool became_tip = false;
    for (Rule rule : {Rule::Poem, Rule::Hcr, Rule::HcrIntrinsic}) {
        const StoredBlock& current = stored(cached_tips_[static_cast<int>(rule)]);
        if (better_than(it->second, current, rule)) {
            cached_tips_[static_cast<int>(rule)] = rec.id;
            if (rule == active_rule_) became_tip = true;
        }
        HashValue& level_tip = level_tips_[static_cast<int>(rec.level)][static_cast<int>(rule)];
        if (better_than(it->second, stored(level_tip), rule)) {
            level_tip = rec.id;
        }
    }
    report.outcome = became_tip ? InsertOutcome::NewTip : InsertOutcome::SideBranch;
    return report;
}

void Store::buffer_orphan(const BlockRecord& rec, const HashValue& missing) {
    if (!orphan_ids_.insert(rec.id.value()).second) {
        return; // duplicate gossip stays buffered once
    }
    if (orphans_.size() >= kOrphanPoolCapacity) {
        orphan_ids_.erase(orphans_.front().rec.id.value());
        orphans_.pop_front();
    }
    orphans_.push_back(PendingOrphan{rec, missing, orphan_counter_++});
}

std::vector<InsertReport> Store::insert_block(const BlockRecord& rec) {
    std::vector<InsertReport> reports;
    if (contains(rec.id)) {
        reports.push_back(report_for(rec.id, InsertOutcome::Duplicate));
        return reports;
    }
    if (!meets_threshold(rec.id, mine::level_bits(rec.level, thresholds_), thresholds_.field())) {
        throw InvalidBlockError("block " + rec.id.to_hex() + " misses its level threshold");
    }
    if (std::optional<HashValue> missing = missing_dependency(rec)) {
        buffer_orphan(rec, *missing);
        reports.push_back(report_for(rec.id, InsertOutcome::Buffered));
        return reports;
    }
    reports.push_back(store_block(rec));

    // Flush orphans whose dependencies just arrived, cascading.
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto it = orphans_.begin(); it != orphans_.end();) {
            if (!contains(it->waiting_on)) {
                ++it;
                continue;
            }
            PendingOrphan po = *it;
            orphan_ids_.erase(po.rec.id.value());
            it = orphans_.erase(it);
            progress = true;
            if (contains(po.rec.id)) {
                continue; // arrived through another path meanwhile
            }
            if (std::optional<HashValue> missing = missing_dependency(po.rec)) {
                buffer_orphan(po.rec, *missing);
                it = orphans_.begin(); // re-buffering may evict the front
                continue;
            }
            reports.push_back(store_block(po.rec));
            it = orphans_.begin(); // new block may unblock earlier entries
        }
    }
    return reports;
}

TipView Store::best_tip(Rule rule) const {
    const StoredBlock& best = stored(cached_tips_[static_cast<int>(rule)]);
    TipView view;
    view.id = best.rec.id;
    view.rule = rule;
    view.weight = weight_of(best.rec.id, rule);
    return view;
}

TipView Store::best_level_tip(mine::Level level, Rule rule) const {
    const HashValue& id = level_tips_[static_cast<int>(level)][static_cast<int>(rule)];
    TipView view;
    view.id = id;
    view.rule = rule;
    view.weight = weight_of(id, rule);
    return view;
}

RuleWeight Store::weight_of(const HashValue& id, Rule rule) const {
    const StoredBlock& b = stored(id);
    switch (rule) {
    case Rule::Poem: return b.poem_weight;
    case Rule::Hcr: return b.hcr_weight;
    case Rule::HcrIntrinsic: return b.hcr_intrinsic_weight;
    }
    throw Error("unreachable rule");
}

std::vector<HashValue> Store::closure(const HashValue& id) const {
    std::vector<HashValue> out;
    std::set<U256> visited;
    std::vector<const StoredBlock*> stack = {&stored(id)};
    while (!stack.empty()) {
        const StoredBlock* b = stack.back();
        stack.pop_back();
        if (b->is_genesis || !visited.insert(b->rec.id.value()).second) continue;
        out.push_back(b->rec.id);
        stack.push_back(&stored(b->rec.parent));
        if (b->rec.level == Level::Dominant && b->rec.sub_tip_ref) {
            stack.push_back(&stored(*b->rec.sub_tip_ref));
        }
    }
    return out;
}

std::uint64_t Store::closure_size(const HashValue& id) const { return stored(id).closure_blocks; }

std::uint64_t Store::reorg_depth(const HashValue& old_tip, const HashValue& new_tip) const {
    stored(old_tip);
    stored(new_tip);
    if (old_tip == new_tip) return 0;
    std::set<U256> kept;
    for (const HashValue& id : closure(new_tip)) kept.insert(id.value());
    std::uint64_t abandoned = 0;
    for (const HashValue& id : closure(old_tip)) {
        if (!kept.contains(id.value())) ++abandoned;
    }
    return abandoned;
}

std::uint64_t Store::height_of(const HashValue& id) const { return stored(id).height; }

const BlockRecord& Store::record_of(const HashValue& id) const {
    const StoredBlock& b = stored(id);
    if (b.is_genesis) {
        throw UnknownBlockError("genesis has no block record");
    }
    return b.rec;
}

std::vector<HashValue> Store::leaves() const {
    std::vector<HashValue> out;
    for (std::uint64_t seq : leaf_seqs_) {
        out.push_back(seq == 0 ? genesis_id_ : seq_to_id_.at(seq));
    }
    return out;
}

} // namespace poemlab::chain
