// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_NET_SIM_HPP
#define POEMLAB_NET_SIM_HPP

#include <array>
#include <cstdint>

#include <poemlab/net/config.hpp>
#include <poemlab/net/trace.hpp>

namespace poemlab::net {

/**
 * Execute one deterministic discrete-event run. Simultaneous events are
 * ordered by (time, kind, block id) with deliveries before finds before
 * reveals; identical (config, seed) pairs produce identical results on
 * every platform (consensus paths are fixed-point and integer only).
 *
 * Mining keeps going until the observer's canonical closure reaches
 * horizon_blocks (equal chain progress across rules), then in-flight
 * deliveries drain. Withholding miners keep dominant finds private and
 * reveal once enough honest subordinate blocks arrived; attackers see
 * honest blocks instantly, honest links carry configured delays.
 */
RunResult run(const SimConfig& config, std::uint64_t seed);

/** Derive orphan, fork-persistence, and reorg statistics from a finished run. */
OrphanStats measure_orphans(const RunResult& run);

/**
 * The scripted withholding race: the attacker's single withheld
 * dominant block (anchored at the withholding point) against
 * reveal_after honest subordinate blocks, judged under every rule on
 * one store with receive-order tie semantics. Clamped mode reproduces
 * the closed-form boundaries exactly; sampled mode draws weights from
 * the seed for Monte Carlo estimation.
 */
struct WithholdingOutcome {
    unsigned reveal_after = 0;
    struct PerRule {
        bool success = false;
        std::uint64_t reorg_depth = 0;
    };
    std::array<PerRule, 3> by_rule; // indexed by chain::Rule

    const PerRule& operator[](chain::Rule rule) const {
        return by_rule[static_cast<int>(rule)];
    }
};

WithholdingOutcome withholding_attack(const SimConfig& config, std::uint64_t seed);

} // namespace poemlab::net

#endif // POEMLAB_NET_SIM_HPP
