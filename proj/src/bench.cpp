#include "amt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "amt/coding.hpp"
#include "amt/error.hpp"
#include "amt/proof.hpp"
#include "io_util.hpp"

namespace amt {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
    case Variant::balanced: return "balanced";
    case Variant::adaptive: return "adaptive";
    case Variant::huffman: return "huffman";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    for (auto v : {Variant::balanced, Variant::adaptive, Variant::huffman}) {
        if (to_string(v) == name) return v;
    }
    throw Error(ErrorKind::invalid_argument, "unknown variant '" + std::string(name) + "'");
}

std::vector<Variant> parse_variants(std::string_view list) {
    std::vector<Variant> out;
    for (const auto& name : detail::split_fields(list)) {
        const Variant v = parse_variant(name);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

const VariantReport& BenchReport::at(Variant v) const {
    for (const auto& r : variants) {
        if (r.variant == v) return r;
    }
    throw Error(ErrorKind::not_found, "variant '" + std::string(to_string(v)) + "' was not run");
}

double improvement_pct(double balanced_k, double variant_k) {
    if (balanced_k <= 0.0) return 0.0;
    return (balanced_k - variant_k) / balanced_k * 100.0;
}

namespace {

AdaptiveTree swap_optimized(AdaptiveTree tree, const BenchOptions& options) {
    if (options.max_swap_iterations == 0) return tree;
    auto steps = optimize_swaps(tree, options.max_swap_iterations);
    return steps.empty() ? tree : steps.back().tree_after;
}

} // namespace

AdaptiveTree build_adaptive(const Distribution& dist, std::size_t arity, const BenchOptions& options) {
    if (dist.empty()) throw Error(ErrorKind::empty_input, "empty distribution");
    const ProbabilityMap full = to_probability_map(dist);
    check_distribution(full);

    Distribution order = dist;
    std::stable_sort(order.begin(), order.end(), [](const WeightedKey& a, const WeightedKey& b) {
        return a.probability != b.probability ? a.probability > b.probability : a.key < b.key;
    });

    const std::vector<LeafSpec> first{{order.front().key, {}, 1.0}};
    AdaptiveTree tree = AdaptiveTree::build_balanced(first, TreeConfig{arity, "sha-256"});
    double prefix_total = order.front().probability;
    for (std::size_t i = 1; i < order.size(); ++i) {
        prefix_total += order[i].probability;
        Insertion insertion;
        insertion.key = order[i].key;
        for (std::size_t j = 0; j <= i; ++j) {
            insertion.probabilities.emplace(order[j].key,
                                            prefix_total > 0.0 ? order[j].probability / prefix_total
                                                               : 1.0 / static_cast<double>(i + 1));
        }
        tree = insert_leaf(tree, insertion).tree_after;
    }
    tree.set_probabilities(full);
    tree = swap_optimized(std::move(tree), options);

    // Greedy insertion can end above the balanced baseline; never adopt a
    // restructured tree that is worse than swapping within the balanced one.
    AdaptiveTree fallback =
        swap_optimized(AdaptiveTree::build_balanced(to_leaf_specs(dist), TreeConfig{arity, "sha-256"}), options);
    if (discrepancy_report(fallback).k_a < discrepancy_report(tree).k_a - strict_improvement) return fallback;
    return tree;
}

VariantReport evaluate_variant(Variant variant, AdaptiveTree tree, double balanced_k) {
    VariantReport report{variant, discrepancy_report(tree), 0.0, 0.0, 0.0, std::move(tree)};
    for (const auto& leaf : report.metrics.per_leaf) {
        const VerificationCost cost = verification_cost(prove(report.tree, leaf.key));
        report.mean_proof_bytes += leaf.p * static_cast<double>(cost.proof_bytes);
        report.mean_hash_invocations += leaf.p * static_cast<double>(cost.hash_invocations);
    }
    report.improvement_pct = improvement_pct(balanced_k, report.metrics.k_a);
    return report;
}

BenchReport run_bench(const Distribution& dist, std::size_t arity, const std::vector<Variant>& modes,
                      const BenchOptions& options) {
    if (arity < 2) throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    const auto specs = to_leaf_specs(dist);
    AdaptiveTree balanced = AdaptiveTree::build_balanced(specs, TreeConfig{arity, "sha-256"});

    BenchReport report;
    report.balanced_k = discrepancy_report(balanced).k_a;
    for (auto v : modes) {
        switch (v) {
        case Variant::balanced:
            report.variants.push_back(evaluate_variant(v, balanced, report.balanced_k));
            break;
        case Variant::adaptive:
            report.variants.push_back(evaluate_variant(v, build_adaptive(dist, arity, options), report.balanced_k));
            break;
        case Variant::huffman:
            report.variants.push_back(evaluate_variant(
                v, tree_from_codes(huffman_codes(to_probability_map(dist), arity)), report.balanced_k));
            break;
        }
    }
    return report;
}

void write_variants_csv(std::ostream& out, const BenchReport& report) {
    using detail::format_double;
    out << "variant,k_A,H,delta,mean_proof_bytes,improvement_pct\n";
    for (const auto& v : report.variants) {
        out << to_string(v.variant) << ',' << format_double(v.metrics.k_a) << ',' << format_double(v.metrics.entropy)
            << ',' << format_double(v.metrics.delta) << ',' << format_double(v.mean_proof_bytes) << ','
            << format_double(v.improvement_pct) << '\n';
    }
}

namespace {

double parse_probability(const nlohmann::json& value) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) throw Error(ErrorKind::malformed, "probability must be a number or \"a/b\"");
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    double num = 0.0;
    double den = 1.0;
    const bool ok = slash == std::string::npos
                        ? detail::parse_double(text, num)
                        : detail::parse_double(std::string_view(text).substr(0, slash), num) &&
                              detail::parse_double(std::string_view(text).substr(slash + 1), den);
    if (!ok || den == 0.0) throw Error(ErrorKind::malformed, "invalid probability '" + text + "'");
    return num / den;
}

} // namespace

ReplayScript parse_replay_script(std::string_view json_text) {
    try {
        const auto doc = nlohmann::ordered_json::parse(json_text);
        ReplayScript script;
        script.arity = doc.at("arity").get<std::size_t>();
        for (const auto& leaf : doc.at("initial")) {
            script.initial.push_back({leaf.at("key").get<std::string>(), parse_probability(leaf.at("p"))});
        }
        for (const auto& s : doc.value("steps", nlohmann::ordered_json::array())) {
            ReplayStep step;
            if (s.contains("add")) step.new_key = s.at("add").get<std::string>();
            for (const auto& [key, value] : s.at("probabilities").items()) {
                step.probabilities[key] = parse_probability(value);
            }
            step.swap_iterations =
                s.value("swap_iterations", step.new_key ? std::size_t{0} : default_max_swap_iterations);
            script.steps.push_back(std::move(step));
        }
        return script;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::malformed, std::string("replay script: ") + e.what());
    }
}

ReplayScript load_replay_script(const std::filesystem::path& path) {
    return parse_replay_script(detail::read_file(path));
}

ReplayResult replay_iterations(const ReplayScript& script) {
    ReplayResult result;
    if (script.steps.empty()) return result;

    AdaptiveTree tree = AdaptiveTree::build_balanced(to_leaf_specs(script.initial), TreeConfig{script.arity, "sha-256"});
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const ReplayStep& step = script.steps[i];
        IterationRecord record;
        record.iter = i + 1;

        std::vector<Alternative> alternatives;
        RestructureOutcome outcome = [&] {
            if (step.new_key) {
                Insertion insertion{*step.new_key, {}, step.probabilities};
                alternatives = enumerate_add_alternatives(tree, insertion);
                return apply_best(tree, alternatives, &insertion);
            }
            AdaptiveTree reweighted = tree;
            reweighted.set_probabilities(step.probabilities);
            alternatives = enumerate_swap_alternatives(reweighted);
            return apply_best(reweighted, alternatives);
        }();

        record.alt_count = alternatives.size();
        record.min_delta = outcome.considered.front().resulting_delta;
        for (const auto& alt : outcome.considered) {
            record.min_delta = std::min(record.min_delta, alt.resulting_delta);
        }
        record.min_count = static_cast<std::size_t>(
            std::count_if(alternatives.begin(), alternatives.end(), [&](const Alternative& a) {
                return std::abs(a.resulting_delta - record.min_delta) <= delta_tolerance;
            }));
        record.chosen = outcome.chosen;

        if (step.new_key) {
            tree = std::move(outcome.tree_after);
            if (step.swap_iterations > 0) {
                auto swaps = optimize_swaps(tree, step.swap_iterations);
                record.swaps_applied = swaps.size();
                if (!swaps.empty()) tree = swaps.back().tree_after;
            }
        } else if (step.swap_iterations > 0) {
            // The pass evaluated above counts as the first swap iteration.
            const bool moved = record.chosen.kind == AlternativeKind::swap;
            tree = std::move(outcome.tree_after);
            if (moved && step.swap_iterations > 1) {
                auto swaps = optimize_swaps(tree, step.swap_iterations - 1);
                record.swaps_applied = swaps.size();
                if (!swaps.empty()) tree = swaps.back().tree_after;
            }
            record.swaps_applied += moved ? 1 : 0;
        } else {
            tree.set_probabilities(step.probabilities);
        }
        record.delta_after = discrepancy_report(tree).delta;
        result.iterations.push_back(std::move(record));
    }
    result.final_tree = std::move(tree);
    return result;
}

void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
    out << "iter,alt_count,min_delta,chosen_kind,chosen_target\n";
    for (const auto& r : records) {
        out << r.iter << ',' << r.alt_count << ',' << detail::format_double(r.min_delta) << ','
            << to_string(r.chosen.kind) << ',' << r.chosen.label() << '\n';
    }
}

} // namespace amt
