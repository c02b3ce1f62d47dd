// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <poemlab/entropy/bounds.hpp>
#include <poemlab/errors.hpp>
#include <poemlab/exp/experiments.hpp>
#include <poemlab/net/config.hpp>
#include <poemlab/net/sim.hpp>
#include <poemlab/net/trace.hpp>
#include <poemlab/version.hpp>

namespace {

namespace fs = std::filesystem;
using namespace poemlab;

struct BoundsOpts {
    unsigned m_t = 0;
    unsigned m_d = 0;
    unsigned extra = 0;
    unsigned field_bits = 256;
};

struct RunOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string seeds_range;
    std::string rule;
    std::string out = "out";
    unsigned workers = 1;
    std::string format; // empty = both csv and jsonl
};

struct TieOpts {
    std::uint64_t seed = 7;
    std::uint64_t pairs = std::uint64_t(1) << 20;
    unsigned field_bits = 12;
    unsigned m_t = 4;
};

struct SuiteOpts {
    std::string out;
};

int cmd_bounds(const BoundsOpts& o) {
    const entropy::ThresholdSpec t(entropy::FieldSpec(o.field_bits), o.m_t, o.m_d);
    const auto d = entropy::overtake_bound_difficulty(t);
    const auto e = entropy::overtake_bound_entropy(t, 0);
    const auto x = entropy::overtake_bound_entropy(t, o.extra);
    std::printf("field_bits %u, m_t %u, m_d %u, extra_bits %u\n", o.field_bits, o.m_t,
                o.m_d, o.extra);
    std::printf("difficulty weighting: bound 2^%u = %s, min blocks to overtake %s\n", o.m_d,
                d.bound.str().c_str(), d.min_blocks.str().c_str());
    std::printf("entropy weighting:    bound %llu/%llu = %.6f, min blocks to overtake %llu\n",
                static_cast<unsigned long long>(e.numerator),
                static_cast<unsigned long long>(e.denominator), e.bound_value(),
                static_cast<unsigned long long>(e.min_blocks));
    std::printf("entropy with surplus: bound %llu/%llu = %.6f, min blocks to overtake %llu\n",
                static_cast<unsigned long long>(x.numerator),
                static_cast<unsigned long long>(x.denominator), x.bound_value(),
                static_cast<unsigned long long>(x.min_blocks));
    return 0;
}

std::vector<std::uint64_t> resolve_seeds(const RunOpts& o) {
    if (o.seed && o.seeds_range.empty()) return {*o.seed};
    if (!o.seed && !o.seeds_range.empty()) {
        const auto dots = o.seeds_range.find("..");
        if (dots == std::string::npos) {
            throw ConfigError("--seeds expects a range A..B, got '" + o.seeds_range + "'");
        }
        std::uint64_t first = 0, last = 0;
        try {
            first = std::stoull(o.seeds_range.substr(0, dots));
            last = std::stoull(o.seeds_range.substr(dots + 2));
        } catch (const std::exception&) {
            throw ConfigError("--seeds expects a range A..B, got '" + o.seeds_range + "'");
        }
        if (first > last) throw ConfigError("--seeds range is empty: first exceeds last");
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = first; s <= last; ++s) {
            seeds.push_back(s);
            if (s == last) break; // guards wrap at the 64-bit ceiling
        }
        return seeds;
    }
    throw ConfigError("provide exactly one of --seed N or --seeds A..B");
}

int cmd_run(const RunOpts& o) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + o.config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();

    net::SimConfig config = net::parse_config_json(text.str());
    if (!o.rule.empty()) config.rule = chain::rule_from_name(o.rule);
    net::validate_config(config);
    const std::string digest = net::config_digest(config);

    const std::vector<std::uint64_t> seeds = resolve_seeds(o);
    if (o.workers == 0) throw ConfigError("--workers must be at least 1");
    const bool want_jsonl = o.format.empty() || o.format == "jsonl";
    const bool want_csv = o.format.empty() || o.format == "csv";

    // Runs execute in parallel and share nothing; the files are written
    // afterwards by this one thread in seed order, so output is
    // deterministic regardless of the worker count.
    std::vector<net::RunResult> results(seeds.size());
    const unsigned workers =
        std::min<unsigned>(o.workers, static_cast<unsigned>(seeds.size()));
    if (workers > 1) {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = cursor.fetch_add(1)) < seeds.size();) {
                    results[i] = net::run(config, seeds[i]);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            results[i] = net::run(config, seeds[i]);
        }
    }

    fs::create_directories(o.out);
    if (want_jsonl) {
        for (const net::RunResult& run : results) {
            const fs::path path = fs::path(o.out) / ("trace-" + std::to_string(run.seed) +
                                                     ".jsonl");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error("cannot write '" + path.string() + "'");
            net::write_trace(out, run);
        }
    }
    if (want_csv) {
        const fs::path path = fs::path(o.out) / "metrics.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path.string() + "'");
        out << "# " << kToolName << ' ' << kToolVersion << " config_sha256=" << digest
            << '\n';
        out << net::kMetricsCsvHeader << '\n';
        std::vector<net::MetricsRecord> rows;
        rows.reserve(results.size());
        for (const net::RunResult& run : results) rows.push_back(run.metrics);
        for (const net::MetricsRecord& m : rows) out << net::metrics_csv_row(m) << '\n';
        if (rows.size() > 1) out << net::metrics_csv_row(net::aggregate_metrics(rows)) << '\n';
    }

    std::printf("%zu run%s, rule %s, config_sha256 %s, output in %s\n", seeds.size(),
                seeds.size() == 1 ? "" : "s",
                std::string(chain::rule_name(config.rule)).c_str(), digest.c_str(),
                o.out.c_str());
    return 0;
}

int cmd_tie_rate(const TieOpts& o) {
    const exp::ExperimentReport r =
        exp::tie_rate_experiment(o.seed, o.pairs, o.field_bits, o.m_t);
    exp::print_report(std::cout, r);
    return r.passed() ? 0 : 4;
}

int cmd_paper_suite(const SuiteOpts& o) {
    const std::vector<exp::ExperimentReport> reports = exp::paper_suite();
    for (const exp::ExperimentReport& r : reports) exp::print_report(std::cout, r);

    if (!o.out.empty()) {
        fs::create_directories(o.out);
        for (const exp::ExperimentReport& r : reports) {
            if (r.rows.empty()) continue;
            const fs::path path = fs::path(o.out) / (r.name + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error("cannot write '" + path.string() + "'");
            out << "# " << kToolName << ' ' << kToolVersion << " experiment=" << r.name
                << '\n';
            out << net::kMetricsCsvHeader << '\n';
            for (const net::MetricsRecord& m : r.rows) out << net::metrics_csv_row(m) << '\n';
        }
    }

    std::vector<std::string> failures;
    std::cout << "suite summary:\n";
    for (const exp::ExperimentReport& r : reports) {
        std::cout << "  " << (r.passed() ? "PASS" : "FAIL") << "  " << r.name << '\n';
        if (!r.passed()) failures.push_back(r.name);
    }
    if (!failures.empty()) {
        std::cout << "failed:";
        for (const std::string& name : failures) std::cout << ' ' << name;
        std::cout << '\n';
        return 4;
    }
    std::cout << "all experiments passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 ": a deterministic laboratory for entropy-minimizing fork choice"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    BoundsOpts bounds;
    CLI::App* cmd_b = app.add_subcommand(
        "bounds", "Print the analytic overtake bounds for a threshold pair");
    cmd_b->add_option("--m-t", bounds.m_t, "Subordinate threshold bits")->required();
    cmd_b->add_option("--m-d", bounds.m_d, "Extra dominant threshold bits");
    cmd_b->add_option("--extra", bounds.extra, "Surplus bits beyond the dominant threshold");
    cmd_b->add_option("--field-bits", bounds.field_bits, "Hash field width")
        ->capture_default_str();

    RunOpts run;
    CLI::App* cmd_r = app.add_subcommand("run", "Execute seeded simulation runs");
    cmd_r->add_option("--config", run.config_path, "Simulation config (JSON)")->required();
    CLI::Option* seed_opt = cmd_r->add_option("--seed", run.seed, "Single seed");
    cmd_r->add_option("--seeds", run.seeds_range, "Inclusive seed range A..B")
        ->excludes(seed_opt);
    cmd_r->add_option("--rule", run.rule, "Override the fork-choice rule")
        ->check(CLI::IsMember({"poem", "hcr", "hcr-intrinsic"}));
    cmd_r->add_option("--out", run.out, "Output directory")->capture_default_str();
    cmd_r->add_option("--workers", run.workers, "Concurrent runs")->capture_default_str();
    cmd_r->add_option("--format", run.format, "Restrict output to csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    TieOpts tie;
    CLI::App* cmd_t = app.add_subcommand("tie-rate", "Monte Carlo tie-rate estimate");
    cmd_t->add_option("--seed", tie.seed, "Seed")->capture_default_str();
    cmd_t->add_option("--pairs", tie.pairs, "Sampled block pairs")->capture_default_str();
    cmd_t->add_option("--field-bits", tie.field_bits, "Hash field width")
        ->capture_default_str();
    cmd_t->add_option("--m-t", tie.m_t, "Subordinate threshold bits")
        ->capture_default_str();

    SuiteOpts suite;
    CLI::App* cmd_s = app.add_subcommand(
        "paper-suite", "Run every named experiment and print the verdict table");
    cmd_s->add_option("--out", suite.out, "Directory for the experiments' CSV tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_b->parsed()) return cmd_bounds(bounds);
        if (cmd_r->parsed()) return cmd_run(run);
        if (cmd_t->parsed()) return cmd_tie_rate(tie);
        if (cmd_s->parsed()) return cmd_paper_suite(suite);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
