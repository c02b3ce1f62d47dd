// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_EXP_EXPERIMENTS_HPP
#define POEMLAB_EXP_EXPERIMENTS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <poemlab/net/sim.hpp>
#include <poemlab/net/trace.hpp>

namespace poemlab::exp {

/** One asserted fact inside an experiment. */
struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

/** A named experiment's verdicts plus the metrics rows it produced. */
struct ExperimentReport {
    std::string name;
    std::vector<CheckLine> checks;
    std::vector<net::MetricsRecord> rows;
    double elapsed_ms = 0.0;

    bool passed() const {
        for (const CheckLine& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

/**
 * The reference overtake race at m_t = 20, m_d = 5 with clamped
 * weights: one dominant block against a growing subordinate branch,
 * judged by every rule on one store. The heaviest-chain rules first
 * flip at k = 33 (exact tie at 32 keeps the dominant block); the
 * entropy rule flips at k = 2. Cross-checked against the analytic
 * bounds.
 */
ExperimentReport overtake_experiment();

/**
 * Finite finalization: random valid (m_t, m_d, extra) triples at a
 * 256-bit field all give an entropy overtake count in (1, 256].
 */
ExperimentReport finalization_experiment(std::uint64_t seed, std::uint64_t triples);

/**
 * Latency forks on a two-node, two-miner network with fixed positive
 * delays, run under the entropy rule and the heaviest-chain baseline
 * with matched seeds. For every clean same-parent fork (no third block
 * in flight during the exchange), the entropy rule must reach
 * network-wide agreement exactly when the winning block's cross
 * delivery lands, with an arrival-order-independent winner; the
 * baseline must stay split through the full exchange. Requires at
 * least 100 clean forks per rule in aggregate and zero violations.
 */
ExperimentReport latency_fork_experiment(std::uint64_t first_seed, unsigned runs);

/**
 * Tie-rate Monte Carlo, by default at a small field (l = 12, m_t = 4):
 * the probability that two independently mined same-parent blocks are
 * indistinguishable equals the chance of an identical hash,
 * 2^-(l - m_t) under the uniform-over-valid-region model; the
 * idealized full-field figure 2^-l is reported alongside. When the
 * valid region is small enough to enumerate, also verifies that every
 * pair of distinct valid hashes is strictly ordered.
 */
ExperimentReport tie_rate_experiment(std::uint64_t seed, std::uint64_t pairs,
                                     unsigned field_bits = 12, unsigned threshold_bits = 4);

/**
 * Withholding tolerance sweep at m_t = 20, m_d = 5 with clamped
 * weights: the heaviest-chain rules tolerate reveal-after-k for every
 * k <= 31, tie out at 32, and fail at 33; the entropy rule tolerates
 * only k = 1. Also Monte-Carlo-checks sampled-mode success frequencies
 * against an independent floating-point reimplementation.
 */
ExperimentReport withholding_experiment(std::uint64_t seed);

/**
 * Determinism: for every suite configuration and each of
 * seeds_per_config seeds, two independent runs must produce
 * byte-identical trace files and CSV rows (compared through real
 * files in a temporary directory).
 */
ExperimentReport determinism_experiment(std::uint64_t first_seed, unsigned seeds_per_config);

/** The configurations the determinism experiment sweeps. */
std::vector<net::SimConfig> paper_suite_configs();

/** Two-node fixed-delay configuration used by the latency experiment. */
net::SimConfig latency_config(chain::Rule rule);

/** All suite experiments with their canonical parameters, in print order. */
std::vector<ExperimentReport> paper_suite();

/** Human-readable pass/fail block for one experiment. */
void print_report(std::ostream& out, const ExperimentReport& report);

} // namespace poemlab::exp

#endif // POEMLAB_EXP_EXPERIMENTS_HPP
