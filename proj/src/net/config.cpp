// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/net/config.hpp>

#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <span>

#include <json.hpp>

#include <poemlab/errors.hpp>
#include <poemlab/mine/grind.hpp>

namespace poemlab::net {

using nlohmann::ordered_json;

DelayModel DelayModel::fixed(double ms) {
    DelayModel d;
    d.kind = Kind::Fixed;
    d.fixed_ms = ms;
    return d;
}

DelayModel DelayModel::exponential(double mean_ms) {
    DelayModel d;
    d.kind = Kind::Exponential;
    d.mean_ms = mean_ms;
    return d;
}

DelayModel DelayModel::uniform(double lo_ms, double hi_ms) {
    DelayModel d;
    d.kind = Kind::Uniform;
    d.lo_ms = lo_ms;
    d.hi_ms = hi_ms;
    return d;
}

entropy::ThresholdSpec SimConfig::thresholds() const {
    return entropy::ThresholdSpec(entropy::FieldSpec(field_bits), m_t, m_d);
}

chain::Rule SimConfig::rule_of(std::size_t node_index) const {
    const NodeConfig& node = nodes.at(node_index);
    return node.rule ? *node.rule : rule;
}

namespace {

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void check_finite(double v, const std::string& field) {
    if (!std::isfinite(v)) fail("field '" + field + "' must be finite");
}

std::size_t node_index_of(const SimConfig& c, const std::string& id, const std::string& field) {
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        if (c.nodes[i].id == id) return i;
    }
    fail("field '" + field + "' names unknown node '" + id + "'");
}

void validate_delay(const DelayModel& d, const std::string& field) {
    switch (d.kind) {
    case DelayModel::Kind::Fixed:
        check_finite(d.fixed_ms, field + ".delay_ms");
        if (d.fixed_ms < 0) fail("field '" + field + ".delay_ms' must be >= 0");
        return;
    case DelayModel::Kind::Exponential:
        check_finite(d.mean_ms, field + ".mean_ms");
        if (d.mean_ms <= 0) fail("field '" + field + ".mean_ms' must be > 0");
        return;
    case DelayModel::Kind::Uniform:
        check_finite(d.lo_ms, field + ".lo_ms");
        check_finite(d.hi_ms, field + ".hi_ms");
        if (d.lo_ms < 0) fail("field '" + field + ".lo_ms' must be >= 0");
        if (d.hi_ms < d.lo_ms) fail("field '" + field + ".hi_ms' must be >= lo_ms");
        return;
    }
    fail("field '" + field + "' has an unknown delay model");
}

void check_strongly_connected(const SimConfig& c) {
    const std::size_t n = c.nodes.size();
    std::vector<std::vector<std::size_t>> fwd(n), rev(n);
    for (const LinkConfig& l : c.links) {
        const std::size_t a = node_index_of(c, l.from, "links.from");
        const std::size_t b = node_index_of(c, l.to, "links.to");
        fwd[a].push_back(b);
        rev[b].push_back(a);
    }
    auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(n, false);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!q.empty()) {
            const std::size_t v = q.front();
            q.pop();
            for (std::size_t w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    q.push(w);
                }
            }
        }
        return count == n;
    };
    if (!reaches_all(fwd) || !reaches_all(rev)) {
        fail("field 'links' must form a strongly connected graph over the nodes");
    }
}

} // namespace

void validate_config(const SimConfig& c) {
    c.thresholds(); // validates field_bits, m_t, m_d

    if (c.mode == mine::MiningModeKind::Grind) {
        fail("field 'mode' does not support grind runs; use sampled or clamped");
    }
    check_finite(c.mean_block_ms, "mean_block_ms");
    if (c.mean_block_ms <= 0) fail("field 'mean_block_ms' must be > 0");
    check_finite(c.max_time_ms, "max_time_ms");
    if (c.max_time_ms < 0) fail("field 'max_time_ms' must be >= 0");
    if (c.horizon_blocks < 1) fail("field 'horizon_blocks' must be >= 1");

    if (c.nodes.empty()) fail("field 'nodes' must list at least one node");
    std::set<std::string> node_ids;
    for (const NodeConfig& node : c.nodes) {
        if (node.id.empty()) fail("field 'nodes.id' must be non-empty");
        if (!node_ids.insert(node.id).second) {
            fail("field 'nodes.id' repeats '" + node.id + "'");
        }
    }

    if (c.miners.empty()) fail("field 'miners' must list at least one miner");
    std::set<std::string> miner_ids;
    double fraction_sum = 0.0;
    for (const MinerConfig& m : c.miners) {
        if (m.id.empty()) fail("field 'miners.id' must be non-empty");
        if (!miner_ids.insert(m.id).second) fail("field 'miners.id' repeats '" + m.id + "'");
        node_index_of(c, m.node, "miners.node");
        check_finite(m.hashrate_fraction, "miners.hashrate_fraction");
        if (m.hashrate_fraction <= 0 || m.hashrate_fraction > 1) {
            fail("field 'miners.hashrate_fraction' must lie in (0, 1]");
        }
        fraction_sum += m.hashrate_fraction;
        if (m.strategy.kind == mine::MinerStrategy::Kind::WithholdDominant &&
            m.strategy.reveal_after < 1) {
            fail("field 'miners.reveal_after_sub_blocks' must be >= 1");
        }
    }
    if (std::fabs(fraction_sum - 1.0) > 1e-9) {
        fail("field 'miners.hashrate_fraction' values must sum to 1");
    }

    for (const LinkConfig& l : c.links) {
        const std::size_t a = node_index_of(c, l.from, "links.from");
        const std::size_t b = node_index_of(c, l.to, "links.to");
        if (a == b) fail("field 'links' must not loop a node to itself");
        validate_delay(l.delay, "links.delay");
    }
    if (c.nodes.size() > 1) check_strongly_connected(c);
}

namespace {

const ordered_json& require(const ordered_json& obj, const std::string& key,
                            const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail("missing field '" + (context.empty() ? key : context + "." + key) + "'");
    }
    return *it;
}

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> allowed,
                    const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) known = true;
        }
        if (!known) {
            fail("unknown field '" + (context.empty() ? key : context + "." + key) + "'");
        }
    }
}

template <typename T>
T get_as(const ordered_json& obj, const std::string& key, const std::string& context) {
    const ordered_json& v = require(obj, key, context);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        fail("field '" + (context.empty() ? key : context + "." + key) + "' has the wrong type");
    }
}

DelayModel parse_delay(const ordered_json& obj, const std::string& context) {
    if (!obj.is_object()) fail("field '" + context + "' must be an object");
    const std::string model = get_as<std::string>(obj, "model", context);
    if (model == "fixed") {
        reject_unknown(obj, {"model", "delay_ms"}, context);
        return DelayModel::fixed(get_as<double>(obj, "delay_ms", context));
    }
    if (model == "exponential") {
        reject_unknown(obj, {"model", "mean_ms"}, context);
        return DelayModel::exponential(get_as<double>(obj, "mean_ms", context));
    }
    if (model == "uniform") {
        reject_unknown(obj, {"model", "lo_ms", "hi_ms"}, context);
        return DelayModel::uniform(get_as<double>(obj, "lo_ms", context),
                                   get_as<double>(obj, "hi_ms", context));
    }
    fail("field '" + context + ".model' must be fixed, exponential, or uniform");
}

ordered_json delay_to_json(const DelayModel& d) {
    ordered_json j;
    switch (d.kind) {
    case DelayModel::Kind::Fixed:
        j["model"] = "fixed";
        j["delay_ms"] = d.fixed_ms;
        break;
    case DelayModel::Kind::Exponential:
        j["model"] = "exponential";
        j["mean_ms"] = d.mean_ms;
        break;
    case DelayModel::Kind::Uniform:
        j["model"] = "uniform";
        j["lo_ms"] = d.lo_ms;
        j["hi_ms"] = d.hi_ms;
        break;
    }
    return j;
}

std::string_view strategy_name(mine::MinerStrategy::Kind kind) {
    switch (kind) {
    case mine::MinerStrategy::Kind::Honest: return "honest";
    case mine::MinerStrategy::Kind::WithholdDominant: return "withhold-dominant";
    }
    throw Error("unreachable strategy");
}

} // namespace

SimConfig parse_config_json(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config root must be a JSON object");
    reject_unknown(root,
                   {"field_bits", "m_t", "m_d", "rule", "mode", "mean_block_ms", "horizon_blocks",
                    "max_time_ms", "nodes", "links", "miners"},
                   "");

    SimConfig c;
    c.field_bits = get_as<unsigned>(root, "field_bits", "");
    c.m_t = get_as<unsigned>(root, "m_t", "");
    c.m_d = get_as<unsigned>(root, "m_d", "");
    c.rule = chain::rule_from_name(get_as<std::string>(root, "rule", ""));
    c.mode = mine::mode_from_name(get_as<std::string>(root, "mode", ""));
    c.mean_block_ms = get_as<double>(root, "mean_block_ms", "");
    c.horizon_blocks = get_as<std::uint64_t>(root, "horizon_blocks", "");
    c.max_time_ms = root.contains("max_time_ms") ? get_as<double>(root, "max_time_ms", "") : 0.0;

    const ordered_json& nodes = require(root, "nodes", "");
    if (!nodes.is_array()) fail("field 'nodes' must be an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string ctx = "nodes[" + std::to_string(i) + "]";
        const ordered_json& jn = nodes[i];
        if (!jn.is_object()) fail("field '" + ctx + "' must be an object");
        reject_unknown(jn, {"id", "rule"}, ctx);
        NodeConfig node;
        node.id = get_as<std::string>(jn, "id", ctx);
        if (jn.contains("rule")) {
            node.rule = chain::rule_from_name(get_as<std::string>(jn, "rule", ctx));
        }
        c.nodes.push_back(std::move(node));
    }

    const ordered_json& links = root.contains("links") ? root["links"] : ordered_json::array();
    if (!links.is_array()) fail("field 'links' must be an array");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const std::string ctx = "links[" + std::to_string(i) + "]";
        const ordered_json& jl = links[i];
        if (!jl.is_object()) fail("field '" + ctx + "' must be an object");
        reject_unknown(jl, {"from", "to", "delay"}, ctx);
        LinkConfig link;
        link.from = get_as<std::string>(jl, "from", ctx);
        link.to = get_as<std::string>(jl, "to", ctx);
        link.delay = parse_delay(require(jl, "delay", ctx), ctx + ".delay");
        c.links.push_back(std::move(link));
    }

    const ordered_json& miners = require(root, "miners", "");
    if (!miners.is_array()) fail("field 'miners' must be an array");
    for (std::size_t i = 0; i < miners.size(); ++i) {
        const std::string ctx = "miners[" + std::to_string(i) + "]";
        const ordered_json& jm = miners[i];
        if (!jm.is_object()) fail("field '" + ctx + "' must be an object");
        reject_unknown(jm, {"id", "node", "hashrate_fraction", "strategy",
                            "reveal_after_sub_blocks"},
                       ctx);
        MinerConfig m;
        m.id = get_as<std::string>(jm, "id", ctx);
        m.node = get_as<std::string>(jm, "node", ctx);
        m.hashrate_fraction = get_as<double>(jm, "hashrate_fraction", ctx);
        const std::string strat =
            jm.contains("strategy") ? get_as<std::string>(jm, "strategy", ctx) : "honest";
        if (strat == "honest") {
            m.strategy.kind = mine::MinerStrategy::Kind::Honest;
            if (jm.contains("reveal_after_sub_blocks")) {
                fail("field '" + ctx + ".reveal_after_sub_blocks' applies to withhold-dominant only");
            }
        } else if (strat == "withhold-dominant") {
            m.strategy.kind = mine::MinerStrategy::Kind::WithholdDominant;
            m.strategy.reveal_after = get_as<unsigned>(jm, "reveal_after_sub_blocks", ctx);
        } else {
            fail("field '" + ctx + ".strategy' must be honest or withhold-dominant");
        }
        c.miners.push_back(std::move(m));
    }

    return c;
}

std::string serialize_config_json(const SimConfig& c) {
    ordered_json root;
    root["field_bits"] = c.field_bits;
    root["m_t"] = c.m_t;
    root["m_d"] = c.m_d;
    root["rule"] = chain::rule_name(c.rule);
    root["mode"] = mine::mode_name(c.mode);
    root["mean_block_ms"] = c.mean_block_ms;
    root["horizon_blocks"] = c.horizon_blocks;
    root["max_time_ms"] = c.max_time_ms;
    root["nodes"] = ordered_json::array();
    for (const NodeConfig& node : c.nodes) {
        ordered_json jn;
        jn["id"] = node.id;
        if (node.rule) jn["rule"] = chain::rule_name(*node.rule);
        root["nodes"].push_back(std::move(jn));
    }
    root["links"] = ordered_json::array();
    for (const LinkConfig& link : c.links) {
        ordered_json jl;
        jl["from"] = link.from;
        jl["to"] = link.to;
        jl["delay"] = delay_to_json(link.delay);
        root["links"].push_back(std::move(jl));
    }
    root["miners"] = ordered_json::array();
    for (const MinerConfig& m : c.miners) {
        ordered_json jm;
        jm["id"] = m.id;
        jm["node"] = m.node;
        jm["hashrate_fraction"] = m.hashrate_fraction;
        jm["strategy"] = strategy_name(m.strategy.kind);
        if (m.strategy.kind == mine::MinerStrategy::Kind::WithholdDominant) {
            jm["reveal_after_sub_blocks"] = m.strategy.reveal_after;
        }
        root["miners"].push_back(std::move(jm));
    }
    return root.dump(2) + "\n";
}

std::string config_digest(const SimConfig& c) {
    const std::string text = serialize_config_json(c);
    const auto digest = mine::sha256(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                      text.size()));
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xF]);
    }
    return out;
}

} // namespace poemlab::net
