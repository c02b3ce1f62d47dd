// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_NET_CONFIG_HPP
#define POEMLAB_NET_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <poemlab/chain/store.hpp>
#include <poemlab/mine/mining.hpp>

namespace poemlab::net {

/**
 * Link latency models. Times are configured in milliseconds (the only
 * place real-valued time appears) and converted to integer ticks when a
 * run starts.
 */
struct DelayModel {
    enum class Kind { Fixed, Exponential, Uniform };
    Kind kind = Kind::Fixed;
    double fixed_ms = 0.0;              // Fixed
    double mean_ms = 0.0;               // Exponential
    double lo_ms = 0.0, hi_ms = 0.0;    // Uniform

    static DelayModel fixed(double ms);
    static DelayModel exponential(double mean_ms);
    static DelayModel uniform(double lo_ms, double hi_ms);
};

struct NodeConfig {
    std::string id;
    /** Fork-choice rule; empty = the run-wide rule. */
    std::optional<chain::Rule> rule;
};

struct MinerConfig {
    std::string id;
    std::string node; // every miner attaches to exactly one node
    double hashrate_fraction = 0.0;
    mine::MinerStrategy strategy;
};

struct LinkConfig {
    std::string from;
    std::string to;
    DelayModel delay;
};

/**
 * One simulation run, fully specified. The first node is the observer:
 * the run ends when its canonical closure reaches horizon_blocks (so
 * rules are compared at equal chain progress), after which in-flight
 * deliveries drain.
 */
struct SimConfig {
    unsigned field_bits = 64;
    unsigned m_t = 16;
    unsigned m_d = 8;
    chain::Rule rule = chain::Rule::Poem;
    mine::MiningModeKind mode = mine::MiningModeKind::Sampled;
    double mean_block_ms = 1000.0; // network-wide mean subordinate inter-block time
    std::uint64_t horizon_blocks = 100;
    double max_time_ms = 0.0; // optional hard stop; 0 disables
    std::vector<NodeConfig> nodes;
    std::vector<LinkConfig> links;
    std::vector<MinerConfig> miners;

    entropy::ThresholdSpec thresholds() const;
    chain::Rule rule_of(std::size_t node_index) const;
};

/**
 * Full validation; throws ConfigError naming the offending field.
 * Checks thresholds, hashrate fractions summing to 1, unique ids,
 * resolvable attachments, non-negative delays, and strong connectivity
 * of the link graph when more than one node exists.
 */
void validate_config(const SimConfig& config);

/**
 * Canonical JSON round-trip. Parsing rejects unknown fields (silent
 * typos are the main reproducibility hazard); serialization emits
 * fields in one fixed order so parse -> serialize -> parse is the
 * identity and the digest is stable.
 */
SimConfig parse_config_json(const std::string& text);
std::string serialize_config_json(const SimConfig& config);

/** Hex SHA-256 of the canonical serialization; embedded in every output file. */
std::string config_digest(const SimConfig& config);

} // namespace poemlab::net

#endif // POEMLAB_NET_CONFIG_HPP
