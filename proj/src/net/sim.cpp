// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/net/sim.hpp>

#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <vector>

#include <poemlab/entropy/bounds.hpp>
#include <poemlab/entropy/intrinsic.hpp>
#include <poemlab/errors.hpp>

namespace poemlab::net {

using namespace poemlab::entropy;
using chain::BlockRecord;
using chain::InsertOutcome;
using chain::InsertReport;
using chain::Rule;
using chain::Store;
using mine::Level;
using mine::MinerStrategy;
using mine::PhiloxRng;
using mine::Ticks;

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

// Event order: (time, kind, block id, destination, push sequence).
// Deliveries settle before finds, finds before reveals, at equal times.
enum class EvKind : int { Deliver = 0, Found = 1, Reveal = 2 };

struct Event {
    Ticks t;
    EvKind kind;
    U256 id;            // block for Deliver; tie-break token otherwise
    std::uint32_t dest; // node for Deliver; miner for Found/Reveal
    std::uint64_t seq;

    bool after(const Event& o) const {
        return std::tie(t, kind, id, dest, seq) > std::tie(o.t, o.kind, o.id, o.dest, o.seq);
    }
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const { return a.after(b); }
};

struct LinkState {
    std::uint32_t from, to;
    DelayModel model;
    Ticks fixed_ticks = 0;
    Ticks mean_ticks = 0;
    Ticks lo_ticks = 0, range_ticks = 0;
    PhiloxRng rng;

    LinkState(std::uint32_t from, std::uint32_t to, const DelayModel& m, std::uint64_t seed,
              std::uint64_t stream)
        : from(from), to(to), model(m), rng(seed, stream) {
        switch (m.kind) {
        case DelayModel::Kind::Fixed:
            fixed_ticks = mine::ms_to_ticks(m.fixed_ms);
            break;
        case DelayModel::Kind::Exponential:
            mean_ticks = mine::ms_to_ticks(m.mean_ms);
            break;
        case DelayModel::Kind::Uniform:
            lo_ticks = mine::ms_to_ticks(m.lo_ms);
            range_ticks = mine::ms_to_ticks(m.hi_ms) - lo_ticks;
            break;
        }
    }

    Ticks draw() {
        switch (model.kind) {
        case DelayModel::Kind::Fixed:
            return fixed_ticks;
        case DelayModel::Kind::Exponential:
            return exponential_ticks(rng, mean_ticks == 0 ? 1 : mean_ticks);
        case DelayModel::Kind::Uniform: {
            // Multiply-shift maps a 64-bit draw onto [lo, hi] without division.
            const U128 scaled = U128(rng.next_u64()) * U128(range_ticks + 1);
            return lo_ticks + static_cast<Ticks>(scaled >> 64);
        }
        }
        throw Error("unreachable delay model");
    }
};

struct NodeState {
    Rule rule = Rule::Poem;
    std::unique_ptr<Store> store;
    std::set<U256> seen;       // first-seen gossip filter
    HashValue current_tip;
    bool hosts_attacker = false;
    std::uint64_t dropped_invalid = 0;
    std::uint64_t duplicate_deliveries = 0;
};

struct MinerState {
    MinerConfig cfg;
    std::uint32_t node = 0;
    PhiloxRng rng;
    std::vector<BlockRecord> stash; // withheld dominant blocks
    std::uint64_t honest_subs_since_stash = 0;
    bool reveal_pending = false;

    MinerState(const MinerConfig& cfg, std::uint32_t node, std::uint64_t seed,
               std::uint64_t stream)
        : cfg(cfg), node(node), rng(seed, stream) {}
};

class Simulation {
public:
    Simulation(const SimConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), seed_(seed), thresholds_(cfg.thresholds()) {
        validate_config(cfg_);
        attempts_per_ms_ = std::ldexp(1.0, static_cast<int>(cfg_.m_t)) / cfg_.mean_block_ms;
        max_ticks_ = cfg_.max_time_ms > 0 ? mine::ms_to_ticks(cfg_.max_time_ms) : 0;

        nodes_.resize(cfg_.nodes.size());
        for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
            nodes_[i].rule = cfg_.rule_of(i);
            nodes_[i].store = std::make_unique<Store>(thresholds_, nodes_[i].rule);
            nodes_[i].current_tip = nodes_[i].store->genesis_id();
        }
        for (std::size_t i = 0; i < cfg_.miners.size(); ++i) {
            const MinerConfig& m = cfg_.miners[i];
            const std::uint32_t node = node_index(m.node);
            miners_.emplace_back(m, node, seed, 1 + i);
            if (m.strategy.kind == MinerStrategy::Kind::WithholdDominant) {
                nodes_[node].hosts_attacker = true;
            }
        }
        for (std::size_t i = 0; i < cfg_.links.size(); ++i) {
            const LinkConfig& l = cfg_.links[i];
            links_.emplace_back(node_index(l.from), node_index(l.to), l.delay, seed, 10000 + i);
        }
    }

    RunResult execute() {
        for (std::uint32_t m = 0; m < miners_.size(); ++m) schedule_find(m, 0);

        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            if (max_ticks_ != 0 && ev.t > max_ticks_) break;
            now_ = ev.t;
            switch (ev.kind) {
            case EvKind::Deliver: on_deliver(ev); break;
            case EvKind::Found: on_found(ev); break;
            case EvKind::Reveal: on_reveal(ev); break;
            }
        }
        return finish();
    }

private:
    std::uint32_t node_index(const std::string& id) const {
        for (std::uint32_t i = 0; i < cfg_.nodes.size(); ++i) {
            if (cfg_.nodes[i].id == id) return i;
        }
        throw ConfigError("unknown node '" + id + "'");
    }

    void push(Ticks t, EvKind kind, const U256& id, std::uint32_t dest) {
        queue_.push(Event{t, kind, id, dest, push_seq_++});
    }

    void schedule_find(std::uint32_t miner, Ticks from) {
        MinerState& m = miners_[miner];
        const mine::MinerSpec spec{m.cfg.id, m.cfg.hashrate_fraction, m.cfg.strategy};
        const Ticks wait = mine::next_block_time(m.rng, spec, attempts_per_ms_, cfg_.m_t);
        push(from + wait, EvKind::Found, U256(miner), miner);
    }

    void broadcast(std::uint32_t origin, const U256& id) {
        // Attacker-hosting nodes observe everything instantly (strongest
        // adversary); all other deliveries ride the configured links.
        for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
            if (v != origin && nodes_[v].hosts_attacker) push(now_, EvKind::Deliver, id, v);
        }
        for (LinkState& link : links_) {
            if (link.from != origin || nodes_[link.to].hosts_attacker) continue;
            push(now_ + link.draw(), EvKind::Deliver, id, link.to);
        }
    }

    void trace_found(std::uint32_t node, const MinerState& m, const BlockRecord& rec) {
        TraceEvent ev;
        ev.t = now_;
        ev.kind = TraceKind::Found;
        ev.node = node;
        ev.miner = m.cfg.id;
        ev.id = rec.id;
        ev.parent = rec.parent;
        ev.level = rec.level;
        ev.sub_tip_ref = rec.sub_tip_ref;
        ev.n = rec.weight;
        ev.deliveries = novel_deliveries_;
        events_.push_back(std::move(ev));
    }

    // Runs insert_block, emits one Insert line per report, attributes the
    // reorg (if the node's tip moved off its old ancestry) to the last
    // report, and feeds attacker counters for newly stored honest subs.
    void apply_insert(std::uint32_t node_idx, const BlockRecord& rec) {
        NodeState& node = nodes_[node_idx];
        const HashValue old_tip = node.current_tip;
        std::vector<InsertReport> reports;
        try {
            reports = node.store->insert_block(rec);
        } catch (const InvalidBlockError&) {
            ++node.dropped_invalid;
            return;
        }
        const HashValue new_tip = node.store->best_tip(node.rule).id;
        std::uint64_t reorg = 0;
        if (!(new_tip == old_tip)) {
            reorg = node.store->reorg_depth(old_tip, new_tip);
            node.current_tip = new_tip;
        }
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const InsertReport& rep = reports[i];
            const BlockRecord& rrec = registry_.at(rep.id.value());
            TraceEvent ev;
            ev.t = now_;
            ev.kind = TraceKind::Insert;
            ev.node = node_idx;
            ev.id = rep.id;
            ev.parent = rrec.parent;
            ev.level = rrec.level;
            ev.sub_tip_ref = rrec.sub_tip_ref;
            ev.n = rrec.weight;
            ev.outcome = rep.outcome;
            ev.w_poem = rep.poem_weight;
            ev.w_hcr = rep.hcr_weight;
            ev.w_hcr_intrinsic = rep.hcr_intrinsic_weight;
            ev.tip = new_tip;
            ev.reorg = i + 1 == reports.size() ? reorg : 0;
            ev.deliveries = novel_deliveries_;
            events_.push_back(std::move(ev));

            // Withholding miners hosted here count newly stored honest subs.
            if (rep.outcome != InsertOutcome::Buffered &&
                rep.outcome != InsertOutcome::Duplicate && rrec.level == Level::Subordinate &&
                node.hosts_attacker) {
                bump_attacker_counters(node_idx, rrec.miner);
            }
        }
    }

    void bump_attacker_counters(std::uint32_t node_idx, const std::string& miner_id) {
        for (std::uint32_t m = 0; m < miners_.size(); ++m) {
            MinerState& attacker = miners_[m];
            if (attacker.node != node_idx ||
                attacker.cfg.strategy.kind != MinerStrategy::Kind::WithholdDominant ||
                attacker.cfg.id == miner_id || attacker.stash.empty()) {
                continue;
            }
            ++attacker.honest_subs_since_stash;
            if (!attacker.reveal_pending &&
                attacker.honest_subs_since_stash >= attacker.cfg.strategy.reveal_after) {
                attacker.reveal_pending = true;
                push(now_, EvKind::Reveal, attacker.stash.front().id.value(), m);
            }
        }
    }

    void on_found(const Event& ev) {
        if (mining_stopped_) return;
        MinerState& m = miners_[ev.dest];
        NodeState& node = nodes_[m.node];
        const mine::BlockDraw draw = mine::draw_block(m.rng, thresholds_, cfg_.mode);
        if (registry_.contains(draw.id.value())) {
            schedule_find(ev.dest, now_); // sampled id collision: retry
            return;
        }

        BlockRecord rec;
        rec.id = draw.id;
        rec.level = draw.level;
        rec.weight = draw.weight;
        rec.miner = m.cfg.id;
        rec.found_at = now_;
        if (draw.level == Level::Subordinate) {
            rec.parent = node.store->best_level_tip(Level::Subordinate, node.rule).id;
        } else {
            rec.parent = node.store->best_level_tip(Level::Dominant, node.rule).id;
            rec.sub_tip_ref = node.store->best_level_tip(Level::Subordinate, node.rule).id;
        }

        registry_.emplace(rec.id.value(), rec);
        ++found_count_;
        node.seen.insert(rec.id.value());
        trace_found(m.node, m, rec);
        apply_insert(m.node, rec);

        const bool withhold = m.cfg.strategy.kind == MinerStrategy::Kind::WithholdDominant &&
                              rec.level == Level::Dominant;
        if (withhold) {
            if (m.stash.empty()) m.honest_subs_since_stash = 0;
            m.stash.push_back(rec);
        } else {
            broadcast(m.node, rec.id.value());
        }

        after_state_change();
        schedule_find(ev.dest, now_);
    }

    void on_deliver(const Event& ev) {
        NodeState& node = nodes_[ev.dest];
        if (!node.seen.insert(ev.id).second) {
            ++node.duplicate_deliveries;
            TraceEvent tev;
            tev.t = now_;
            tev.kind = TraceKind::Deliver;
            tev.node = ev.dest;
            tev.id = HashValue(ev.id);
            tev.duplicate = true;
            tev.deliveries = novel_deliveries_;
            events_.push_back(std::move(tev));
            return;
        }
        ++novel_deliveries_;
        TraceEvent tev;
        tev.t = now_;
        tev.kind = TraceKind::Deliver;
        tev.node = ev.dest;
        tev.id = HashValue(ev.id);
        tev.duplicate = false;
        tev.deliveries = novel_deliveries_;
        events_.push_back(std::move(tev));

        const BlockRecord& rec = registry_.at(ev.id);
        apply_insert(ev.dest, rec);
        broadcast(ev.dest, ev.id); // first-seen flood
        after_state_change();
    }

    void on_reveal(const Event& ev) {
        MinerState& m = miners_[ev.dest];
        if (m.stash.empty()) return;
        TraceEvent tev;
        tev.t = now_;
        tev.kind = TraceKind::Reveal;
        tev.node = m.node;
        tev.miner = m.cfg.id;
        tev.reveal_count = m.stash.size();
        tev.deliveries = novel_deliveries_;
        events_.push_back(std::move(tev));
        for (const BlockRecord& rec : m.stash) {
            revealed_.insert(rec.id.value());
            broadcast(m.node, rec.id.value());
        }
        m.stash.clear();
        m.reveal_pending = false;
    }

    void after_state_change() {
        bool agree = true;
        const HashValue& first = nodes_.front().current_tip;
        for (const NodeState& node : nodes_) {
            if (!(node.current_tip == first)) {
                agree = false;
                break;
            }
        }
        if (agree != last_agree_) {
            last_agree_ = agree;
            TraceEvent ev;
            ev.t = now_;
            ev.kind = TraceKind::Agreement;
            ev.agree = agree;
            if (agree) ev.tip = first;
            ev.deliveries = novel_deliveries_;
            events_.push_back(std::move(ev));
        }

        if (!mining_stopped_) {
            const Store& observer = *nodes_.front().store;
            const HashValue tip = observer.best_tip(nodes_.front().rule).id;
            if (observer.closure_size(tip) >= cfg_.horizon_blocks) mining_stopped_ = true;
        }
    }

    RunResult finish() {
        RunResult run;
        run.config = cfg_;
        run.seed = seed_;
        run.digest = config_digest(cfg_);
        run.events = std::move(events_);
        run.found_count = found_count_;
        run.novel_deliveries = novel_deliveries_;

        const NodeState& observer = nodes_.front();
        const HashValue tip = observer.store->best_tip(observer.rule).id;
        for (const HashValue& id : observer.store->closure(tip)) {
            run.canonical.insert(id.value());
        }
        for (const HashValue& id : observer.store->insertion_order()) {
            run.stored_at_observer.insert(id.value());
        }
        for (const NodeState& node : nodes_) run.final_tips.push_back(node.current_tip);

        MetricsRecord& m = run.metrics;
        m.run_id = "run-" + std::to_string(seed_);
        m.seed = seed_;
        m.rule = cfg_.rule;
        m.m_t = cfg_.m_t;
        m.m_d = cfg_.m_d;
        m.blocks = found_count_;
        if (cfg_.rule == Rule::Poem) {
            m.min_overtake_k = WideInt(overtake_bound_entropy(thresholds_, 0).min_blocks);
        } else {
            m.min_overtake_k = overtake_bound_difficulty(thresholds_).min_blocks;
        }
        bool attack_succeeded = false;
        for (const U256& id : revealed_) {
            if (run.canonical.contains(id)) attack_succeeded = true;
        }
        m.attack_success = attack_succeeded ? 1.0 : 0.0;

        const OrphanStats stats = measure_orphans(run);
        m.orphan_rate = stats.orphan_rate;
        m.mean_fork_persistence = stats.mean_fork_persistence;
        m.max_reorg_depth = stats.max_reorg_depth;
        m.fork_episodes = stats.fork_episodes;
        m.canonical_blocks = stats.canonical_blocks;
        m.orphaned_blocks = stats.orphaned_blocks;
        m.in_flight_blocks = stats.in_flight_blocks;
        m.conservation_ok = stats.conservation_ok;
        m.agreed_at_end = stats.agreed_at_end;
        m.reorg_histogram = stats.reorg_histogram;
        return run;
    }

    SimConfig cfg_;
    std::uint64_t seed_;
    ThresholdSpec thresholds_;
    double attempts_per_ms_ = 0.0;
    Ticks max_ticks_ = 0;

    std::vector<NodeState> nodes_;
    std::vector<MinerState> miners_;
    std::vector<LinkState> links_;
    std::map<U256, BlockRecord> registry_; // every block found, by id
    std::set<U256> revealed_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t push_seq_ = 0;
    Ticks now_ = 0;
    bool mining_stopped_ = false;
    bool last_agree_ = true;
    std::uint64_t found_count_ = 0;
    std::uint64_t novel_deliveries_ = 0;
    std::vector<TraceEvent> events_;
};

} // namespace

RunResult run(const SimConfig& config, std::uint64_t seed) {
    Simulation sim(config, seed);
    return sim.execute();
}

OrphanStats measure_orphans(const RunResult& run) {
    OrphanStats stats;
    std::set<U256> found_ids;
    std::uint64_t found = 0;
    for (const TraceEvent& ev : run.events) {
        if (ev.kind == TraceKind::Found) {
            ++found;
            found_ids.insert(ev.id.value());
        }
        if (ev.kind == TraceKind::Insert && ev.reorg > 0) {
            ++stats.reorg_histogram[ev.reorg];
            stats.max_reorg_depth = std::max(stats.max_reorg_depth, ev.reorg);
        }
    }

    stats.canonical_blocks = run.canonical.size();
    stats.orphaned_blocks = run.stored_at_observer.size() - run.canonical.size();
    stats.in_flight_blocks = found - run.stored_at_observer.size();
    stats.orphan_rate =
        found == 0 ? 0.0
                   : round6(static_cast<double>(found - run.canonical.size()) /
                            static_cast<double>(found));

    // Conservation: canonical \subseteq stored \subseteq found, so every
    // found block lands in exactly one bucket.
    stats.conservation_ok = found == run.found_count;
    for (const U256& id : run.canonical) {
        if (!run.stored_at_observer.contains(id)) stats.conservation_ok = false;
    }
    for (const U256& id : run.stored_at_observer) {
        if (!found_ids.contains(id)) stats.conservation_ok = false;
    }

    // Fork persistence: novel deliveries between losing network-wide
    // agreement and regaining it.
    std::vector<std::uint64_t> persistences;
    bool open = false;
    std::uint64_t open_at = 0;
    for (const TraceEvent& ev : run.events) {
        if (ev.kind != TraceKind::Agreement) continue;
        if (!ev.agree && !open) {
            open = true;
            open_at = ev.deliveries;
        } else if (ev.agree && open) {
            open = false;
            persistences.push_back(ev.deliveries - open_at);
        }
    }
    if (open) {
        persistences.push_back(run.novel_deliveries - open_at);
        stats.agreed_at_end = false;
    }
    stats.fork_episodes = persistences.size();
    if (!persistences.empty()) {
        double sum = 0.0;
        for (std::uint64_t p : persistences) sum += static_cast<double>(p);
        stats.mean_fork_persistence = round6(sum / static_cast<double>(persistences.size()));
    }
    return stats;
}

WithholdingOutcome withholding_attack(const SimConfig& config, std::uint64_t seed) {
    validate_config(config);
    const MinerConfig* attacker = nullptr;
    for (const MinerConfig& m : config.miners) {
        if (m.strategy.kind == MinerStrategy::Kind::WithholdDominant) {
            if (attacker != nullptr) {
                throw ConfigError("withholding_attack expects exactly one withholding miner");
            }
            attacker = &m;
        }
    }
    if (attacker == nullptr) {
        throw ConfigError("withholding_attack needs a miner with strategy withhold-dominant");
    }

    const ThresholdSpec t = config.thresholds();
    if (t.dominant_extra_bits() < 1) {
        throw ConfigError("the withholding race needs m_d >= 1 so honest blocks can stay subordinate");
    }
    const unsigned k = attacker->strategy.reveal_after;
    const bool clamped = config.mode == mine::MiningModeKind::ClampedIntrinsic;
    PhiloxRng honest_rng(seed, 1);
    PhiloxRng attacker_rng(seed, 2);
    Store store(t, config.rule);
    std::set<U256> used;

    // k honest subordinate blocks arrive first (they are public); the
    // attacker's withheld dominant block, anchored at the withholding
    // point, is received last. One store judges all three rules with
    // identical receive-order tie semantics.
    HashValue parent = store.genesis_id();
    for (unsigned i = 0; i < k; ++i) {
        HashValue id;
        do {
            id = mine::sample_block_hash(honest_rng, t.field(), t.sub_bits());
        } while (mine::classify_level(id, t) == Level::Dominant || used.contains(id.value()));
        used.insert(id.value());
        BlockRecord rec;
        rec.id = id;
        rec.parent = parent;
        rec.level = Level::Subordinate;
        rec.miner = "honest";
        rec.weight = clamped ? IntrinsicWeight::from_bits(t.sub_bits())
                             : intrinsic_weight(id, t.field());
        store.insert_block(rec);
        parent = id;
    }

    HashValue dom_id;
    do {
        dom_id = mine::sample_block_hash(attacker_rng, t.field(), t.dominant_bits());
    } while (used.contains(dom_id.value()));
    BlockRecord dom;
    dom.id = dom_id;
    dom.parent = store.genesis_id();
    dom.level = Level::Dominant;
    dom.sub_tip_ref = store.genesis_id();
    dom.miner = attacker->id;
    dom.weight = clamped ? IntrinsicWeight::from_bits(t.dominant_bits())
                         : intrinsic_weight(dom_id, t.field());

    WithholdingOutcome outcome;
    outcome.reveal_after = k;
    HashValue old_tips[3];
    for (Rule rule : {Rule::Poem, Rule::Hcr, Rule::HcrIntrinsic}) {
        old_tips[static_cast<int>(rule)] = store.best_tip(rule).id;
    }
    store.insert_block(dom);
    for (Rule rule : {Rule::Poem, Rule::Hcr, Rule::HcrIntrinsic}) {
        const HashValue new_tip = store.best_tip(rule).id;
        WithholdingOutcome::PerRule& r = outcome.by_rule[static_cast<int>(rule)];
        r.success = new_tip == dom_id;
        r.reorg_depth =
            r.success ? store.reorg_depth(old_tips[static_cast<int>(rule)], new_tip) : 0;
    }
    return outcome;
}

} // namespace poemlab::net
