#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amt/address_map.hpp"
#include "amt/bench.hpp"
#include "amt/coding.hpp"
#include "amt/error.hpp"
#include "amt/metrics.hpp"
#include "amt/proof.hpp"
#include "amt/restructure.hpp"
#include "amt/snapshot.hpp"
#include "amt/workload.hpp"

namespace amt::cli {
namespace {

struct Options {
    std::string snapshot;
    std::string dist;
    std::string probs;
    std::string key;
    std::string out;
    std::string proof;
    std::string root;
    std::string payload_hex;
    std::string modes = "balanced,adaptive,huffman";
    std::string shape = "balanced";
    std::string script;
    std::string trace;
    std::string snapshots_dir;
    std::size_t arity = 2;
    std::size_t max_iters = default_max_swap_iterations;
    std::size_t events = 10000;
    std::size_t zipf_n = 0;
    double zipf_s = 1.0;
    std::uint64_t seed = 0;
    bool normalize = false;
};

class CommandFailed : public std::runtime_error {
public:
    CommandFailed(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] int code() const noexcept { return code_; }

private:
    int code_;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const Options& opt, std::ostream& out, const std::string& content) {
    if (opt.out.empty()) {
        out << content;
        return;
    }
    std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::io, "cannot write '" + opt.out + "'");
    file << content;
}

void require_out_distinct(const Options& opt) {
    if (opt.out.empty()) throw CommandFailed(exit_usage, "--out is required");
    std::error_code ec;
    if (!opt.snapshot.empty() && std::filesystem::equivalent(opt.snapshot, opt.out, ec)) {
        throw CommandFailed(exit_usage, "--out must not overwrite the input snapshot");
    }
}

Distribution load_dist(const Options& opt) {
    Distribution dist = load_distribution(opt.dist);
    return opt.normalize ? normalized(std::move(dist)) : dist;
}

int cmd_build(const Options& opt, std::ostream& out) {
    const Distribution dist = load_dist(opt);
    std::optional<AdaptiveTree> tree;
    if (opt.shape == "balanced") {
        tree = AdaptiveTree::build_balanced(to_leaf_specs(dist), TreeConfig{opt.arity, "sha-256"});
    } else if (opt.shape == "huffman") {
        tree = tree_from_codes(huffman_codes(to_probability_map(dist), opt.arity));
    } else if (opt.shape == "adaptive") {
        tree = build_adaptive(dist, opt.arity, BenchOptions{opt.max_iters});
    } else {
        throw CommandFailed(exit_usage, "unknown --shape '" + opt.shape + "'");
    }
    emit(opt, out, snapshot_to_json(*tree));
    return exit_ok;
}

int cmd_insert(const Options& opt, std::ostream& out) {
    require_out_distinct(opt);
    const AdaptiveTree tree = load_snapshot(opt.snapshot);
    Insertion insertion{opt.key, from_hex(opt.payload_hex), to_probability_map(load_distribution(opt.probs))};
    RestructureOutcome outcome = insert_leaf(tree, insertion);
    nlohmann::ordered_json audit = nlohmann::ordered_json::array();
    audit.push_back(nlohmann::ordered_json::parse(outcome_to_json(outcome)));
    AdaptiveTree result = outcome.tree_after;
    if (opt.max_iters > 0) {
        for (const auto& step : optimize_swaps(result, opt.max_iters)) {
            audit.push_back(nlohmann::ordered_json::parse(outcome_to_json(step)));
            result = step.tree_after;
        }
    }
    save_snapshot(result, opt.out);
    out << audit.dump(2) << '\n';
    return exit_ok;
}

int cmd_optimize(const Options& opt, std::ostream& out) {
    require_out_distinct(opt);
    AdaptiveTree tree = load_snapshot(opt.snapshot);
    if (!opt.probs.empty()) tree.set_probabilities(to_probability_map(load_distribution(opt.probs)));
    nlohmann::ordered_json audit = nlohmann::ordered_json::array();
    for (const auto& step : optimize_swaps(tree, std::max<std::size_t>(opt.max_iters, 1))) {
        audit.push_back(nlohmann::ordered_json::parse(outcome_to_json(step)));
        tree = step.tree_after;
    }
    save_snapshot(tree, opt.out);
    out << audit.dump(2) << '\n';
    return exit_ok;
}

int cmd_metrics(const Options& opt, std::ostream& out) {
    emit(opt, out, metrics_to_json(discrepancy_report(load_snapshot(opt.snapshot))));
    return exit_ok;
}

int cmd_prove(const Options& opt, std::ostream& out) {
    emit(opt, out, proof_to_json(prove(load_snapshot(opt.snapshot), opt.key)) + "\n");
    return exit_ok;
}

int cmd_verify(const Options& opt, std::ostream& out, const CLI::App& sub) {
    const MerkleProof proof = proof_from_json(read_text(opt.proof));
    const Digest root = digest_from_hex(opt.root);
    const std::size_t arity = sub.count("--arity") > 0 ? opt.arity : no_arity_bound;
    const VerifyStatus status = sub.count("--payload-hex") > 0
                                    ? verify_leaf(proof, from_hex(opt.payload_hex), root, arity)
                                    : verify(proof, root, arity);
    out << to_string(status) << '\n';
    switch (status) {
    case VerifyStatus::valid: return exit_ok;
    case VerifyStatus::mismatch: return exit_verification_failed;
    case VerifyStatus::malformed: return exit_validation;
    }
    return exit_validation;
}

int cmd_encode(const Options& opt, std::ostream& out) {
    std::ostringstream buf;
    if (!opt.snapshot.empty()) {
        const AdaptiveTree adaptive = load_snapshot(opt.snapshot);
        std::vector<LeafSpec> leaves;
        for (const auto& [key, p] : adaptive.probabilities()) leaves.push_back({key, {}, p});
        const AdaptiveTree balanced = AdaptiveTree::build_balanced(leaves, adaptive.config());
        write_address_csv(buf, build_mapping(balanced, adaptive));
    } else if (!opt.dist.empty()) {
        write_code_table_csv(buf, huffman_codes(to_probability_map(load_dist(opt)), opt.arity));
    } else {
        throw CommandFailed(exit_usage, "encode needs --dist or --snapshot");
    }
    emit(opt, out, buf.str());
    return exit_ok;
}

int cmd_bench(const Options& opt, std::ostream& out) {
    const BenchReport report =
        run_bench(load_dist(opt), opt.arity, parse_variants(opt.modes), BenchOptions{opt.max_iters});
    if (!opt.snapshots_dir.empty()) {
        std::filesystem::create_directories(opt.snapshots_dir);
        for (const auto& v : report.variants) {
            save_snapshot(v.tree, std::filesystem::path(opt.snapshots_dir) / (std::string(to_string(v.variant)) + ".json"));
        }
    }
    std::ostringstream buf;
    write_variants_csv(buf, report);
    emit(opt, out, buf.str());
    return exit_ok;
}

int cmd_replay(const Options& opt, std::ostream& out) {
    const ReplayResult result = replay_iterations(load_replay_script(opt.script));
    std::ostringstream buf;
    write_iterations_csv(buf, result.iterations);
    emit(opt, out, buf.str());
    return exit_ok;
}

int cmd_trace(const Options& opt, std::ostream& out) {
    Distribution dist;
    if (!opt.dist.empty()) {
        dist = load_dist(opt);
    } else if (opt.zipf_n > 0) {
        dist = label_distribution(zipf_distribution(opt.zipf_n, opt.zipf_s));
    } else {
        throw CommandFailed(exit_usage, "trace needs --dist or --zipf-n");
    }
    std::ostringstream buf;
    write_trace(buf, generate_trace(dist, opt.events, opt.seed));
    emit(opt, out, buf.str());
    return exit_ok;
}

int cmd_estimate(const Options& opt, std::ostream& out) {
    std::istringstream in(read_text(opt.trace));
    Distribution dist;
    for (const auto& [key, p] : estimate_probabilities(read_trace(in))) dist.push_back({key, p});
    std::ostringstream buf;
    write_distribution_csv(buf, dist);
    emit(opt, out, buf.str());
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Frequency-adaptive m-ary Merkle trees"};
    app.name("amt");
    app.require_subcommand(1, 1);
    app.fallthrough();

    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "Output file (default: stdout)"); };
    auto add_arity = [&](CLI::App* sub) {
        sub->add_option("--arity", opt.arity, "Maximum children per node")->check(CLI::Range(2, 1 << 16));
    };

    auto* build = app.add_subcommand("build", "Build a tree snapshot from a distribution CSV");
    build->add_option("--dist", opt.dist, "Distribution CSV (key,probability)")->required();
    add_arity(build);
    build->add_option("--shape", opt.shape, "balanced | huffman | adaptive")
        ->check(CLI::IsMember({"balanced", "huffman", "adaptive"}));
    build->add_option("--max-iters", opt.max_iters, "Swap iterations for the adaptive shape");
    build->add_flag("--normalize", opt.normalize, "Rescale probabilities to sum to 1");
    add_out(build);

    auto* insert = app.add_subcommand("insert", "Add one leaf with the minimal-discrepancy restructuring");
    insert->add_option("--snapshot", opt.snapshot, "Input snapshot JSON")->required();
    insert->add_option("--key", opt.key, "New leaf key")->required();
    insert->add_option("--probs", opt.probs, "Full distribution after insertion (CSV)")->required();
    insert->add_option("--payload-hex", opt.payload_hex, "Leaf payload as lowercase hex");
    insert->add_option("--max-iters", opt.max_iters, "Swap iterations after the insertion (0 = none)");
    add_out(insert);

    auto* optimize = app.add_subcommand("optimize", "Apply leaf-pair swaps while they lower the discrepancy");
    optimize->add_option("--snapshot", opt.snapshot, "Input snapshot JSON")->required();
    optimize->add_option("--probs", opt.probs, "Replace the distribution before optimizing (CSV)");
    optimize->add_option("--max-iters", opt.max_iters, "Maximum swap iterations");
    add_out(optimize);

    auto* metrics = app.add_subcommand("metrics", "Report k_A, H and discrepancies of a snapshot");
    metrics->add_option("--snapshot", opt.snapshot, "Input snapshot JSON")->required();
    add_out(metrics);

    auto* prove_cmd = app.add_subcommand("prove", "Emit the Merkle proof of one leaf");
    prove_cmd->add_option("--snapshot", opt.snapshot, "Input snapshot JSON")->required();
    prove_cmd->add_option("--key", opt.key, "Leaf key")->required();
    add_out(prove_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Check a proof against a root hash");
    verify_cmd->add_option("--proof", opt.proof, "Proof JSON")->required();
    verify_cmd->add_option("--root", opt.root, "Expected root hash (hex)")->required();
    verify_cmd->add_option("--payload-hex", opt.payload_hex, "Also check the leaf payload");
    add_arity(verify_cmd);

    auto* encode = app.add_subcommand("encode", "Export a Huffman code table or an address map");
    encode->add_option("--dist", opt.dist, "Distribution CSV: emit key,probability,code,length");
    encode->add_option("--snapshot", opt.snapshot, "Snapshot: emit address,probability,balanced_code,adaptive_code");
    encode->add_flag("--normalize", opt.normalize, "Rescale probabilities to sum to 1");
    add_arity(encode);
    add_out(encode);

    auto* bench = app.add_subcommand("bench", "Compare balanced, adaptive and Huffman trees");
    bench->add_option("--dist", opt.dist, "Distribution CSV")->required();
    add_arity(bench);
    bench->add_option("--modes", opt.modes, "Comma-separated variants");
    bench->add_option("--max-iters", opt.max_iters, "Swap iterations for the adaptive variant");
    bench->add_option("--snapshots-dir", opt.snapshots_dir, "Write one snapshot per variant here");
    bench->add_flag("--normalize", opt.normalize, "Rescale probabilities to sum to 1");
    add_out(bench);

    auto* replay = app.add_subcommand("replay", "Run an iteration script and emit per-iteration audit rows");
    replay->add_option("--script", opt.script, "Replay script JSON")->required();
    add_out(replay);

    auto* trace = app.add_subcommand("trace", "Generate a seeded access trace");
    trace->add_option("--dist", opt.dist, "Sample from this distribution CSV");
    trace->add_option("--zipf-n", opt.zipf_n, "Sample from a Zipf law over n keys");
    trace->add_option("--zipf-s", opt.zipf_s, "Zipf exponent");
    trace->add_option("--events", opt.events, "Number of accesses");
    trace->add_flag("--normalize", opt.normalize, "Rescale probabilities to sum to 1");
    add_out(trace);

    auto* estimate = app.add_subcommand("estimate", "Estimate a distribution from a trace file");
    estimate->add_option("--trace", opt.trace, "Trace file, one key per line")->required();
    add_out(estimate);

    app.add_option("--seed", opt.seed, "Seed for trace generation (default 0)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (build->parsed()) return cmd_build(opt, out);
        if (insert->parsed()) return cmd_insert(opt, out);
        if (optimize->parsed()) return cmd_optimize(opt, out);
        if (metrics->parsed()) return cmd_metrics(opt, out);
        if (prove_cmd->parsed()) return cmd_prove(opt, out);
        if (verify_cmd->parsed()) return cmd_verify(opt, out, *verify_cmd);
        if (encode->parsed()) return cmd_encode(opt, out);
        if (bench->parsed()) return cmd_bench(opt, out);
        if (replay->parsed()) return cmd_replay(opt, out);
        if (trace->parsed()) return cmd_trace(opt, out);
        if (estimate->parsed()) return cmd_estimate(opt, out);
    } catch (const CommandFailed& e) {
        err << "amt: " << e.what() << '\n';
        return e.code();
    } catch (const Error& e) {
        err << "amt: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "amt: " << e.what() << '\n';
        return exit_validation;
    }
    return exit_usage;
}

} // namespace amt::cli
