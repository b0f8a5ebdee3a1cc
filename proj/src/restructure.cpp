#include "amt/restructure.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "amt/error.hpp"
#include "amt/metrics.hpp"

namespace amt {
namespace {

struct LeafState {
    std::string key;
    double p = 0.0;
    std::size_t depth = 0;
    double delta_i = 0.0;
};

std::vector<LeafState> leaf_states(const AdaptiveTree& tree, const ProbabilityMap& probs) {
    std::vector<LeafState> out;
    const std::size_t m = tree.arity();
    for (const auto& key : tree.leaf_keys()) {
        LeafState s;
        s.key = key;
        s.p = probs.find(key)->second;
        s.depth = tree.depth(key);
        s.delta_i = elemental_discrepancy(s.p, s.depth, m);
        out.push_back(std::move(s));
    }
    return out;
}

double total_delta(const std::vector<LeafState>& leaves) {
    double sum = 0.0;
    for (const auto& s : leaves) sum += s.delta_i;
    return sum;
}

std::string node_label(const AdaptiveTree& tree, NodeId id) {
    std::string out = "@";
    bool first = true;
    for (auto index : tree.path_indices(id)) {
        if (!first) out.push_back('.');
        out += std::to_string(index);
        first = false;
    }
    return out;
}

bool allowed_leaf(const LeafFilter& allowed, std::string_view key) {
    return !allowed || allowed->contains(key);
}

long long rank_bucket(double delta) { return std::llround(delta / rank_resolution); }

void check_insertion(const AdaptiveTree& tree, const Insertion& insertion) {
    if (tree.contains(insertion.key)) {
        throw Error(ErrorKind::duplicate_key, "leaf '" + insertion.key + "' already exists");
    }
    const auto& probs = insertion.probabilities;
    if (probs.size() != tree.leaf_count() + 1 || !probs.contains(insertion.key)) {
        throw Error(ErrorKind::key_set_mismatch, "distribution must cover every existing leaf plus '" +
                                                     insertion.key + "'");
    }
    for (const auto& key : tree.leaf_keys()) {
        if (!probs.contains(key)) {
            throw Error(ErrorKind::key_set_mismatch, "distribution is missing leaf '" + key + "'");
        }
    }
    check_distribution(probs);
}

} // namespace

std::string_view to_string(AlternativeKind kind) noexcept {
    switch (kind) {
    case AlternativeKind::attach: return "attach";
    case AlternativeKind::split: return "split";
    case AlternativeKind::swap: return "swap";
    case AlternativeKind::no_op: return "no_op";
    }
    return "unknown";
}

std::string Alternative::label() const {
    if (kind == AlternativeKind::swap) return target + ":" + partner;
    return target;
}

bool rank_less(const Alternative& a, const Alternative& b) {
    return std::tuple(rank_bucket(a.resulting_delta), a.kind, std::string_view(a.target), std::string_view(a.partner)) <
           std::tuple(rank_bucket(b.resulting_delta), b.kind, std::string_view(b.target), std::string_view(b.partner));
}

std::vector<Alternative> enumerate_add_alternatives(const AdaptiveTree& tree, const Insertion& insertion,
                                                    const LeafFilter& allowed) {
    check_insertion(tree, insertion);
    const std::size_t m = tree.arity();
    const auto leaves = leaf_states(tree, insertion.probabilities);
    const double base = total_delta(leaves);
    const double p_new = insertion.probabilities.find(insertion.key)->second;

    std::vector<Alternative> out;
    for (auto id : tree.internal_nodes()) {
        if (tree.node(id).children.size() >= m) continue;
        Alternative alt;
        alt.kind = AlternativeKind::attach;
        alt.node = id;
        alt.target = node_label(tree, id);
        alt.resulting_delta = base + elemental_discrepancy(p_new, tree.depth_of(id) + 1, m);
        out.push_back(std::move(alt));
    }
    for (const auto& leaf : leaves) {
        if (!allowed_leaf(allowed, leaf.key)) continue;
        Alternative alt;
        alt.kind = AlternativeKind::split;
        alt.node = tree.leaf_id(leaf.key);
        alt.target = leaf.key;
        alt.resulting_delta = base - leaf.delta_i + elemental_discrepancy(leaf.p, leaf.depth + 1, m) +
                              elemental_discrepancy(p_new, leaf.depth + 1, m);
        out.push_back(std::move(alt));
    }
    return out;
}

std::vector<Alternative> enumerate_swap_alternatives(const AdaptiveTree& tree, const LeafFilter& allowed) {
    const std::size_t m = tree.arity();
    check_distribution(tree.probabilities());
    auto leaves = leaf_states(tree, tree.probabilities());
    const double current = total_delta(leaves);

    std::vector<const LeafState*> candidates;
    for (const auto& leaf : leaves) {
        if (std::abs(leaf.delta_i) > delta_tolerance && allowed_leaf(allowed, leaf.key)) {
            candidates.push_back(&leaf);
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const LeafState* a, const LeafState* b) { return a->key < b->key; });

    std::vector<Alternative> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const LeafState& a = *candidates[i];
            const LeafState& b = *candidates[j];
            if (a.depth == b.depth) continue;
            Alternative alt;
            alt.kind = AlternativeKind::swap;
            alt.target = a.key;
            alt.partner = b.key;
            alt.resulting_delta = current - a.delta_i - b.delta_i + elemental_discrepancy(a.p, b.depth, m) +
                                  elemental_discrepancy(b.p, a.depth, m);
            out.push_back(std::move(alt));
        }
    }
    Alternative keep;
    keep.kind = AlternativeKind::no_op;
    keep.resulting_delta = current;
    out.push_back(std::move(keep));
    return out;
}

AdaptiveTree apply_alternative(const AdaptiveTree& tree, const Alternative& alternative, const Insertion* insertion) {
    AdaptiveTree out = tree;
    switch (alternative.kind) {
    case AlternativeKind::attach:
    case AlternativeKind::split:
        if (insertion == nullptr) {
            throw Error(ErrorKind::invalid_argument, "attach/split alternatives need the inserted leaf");
        }
        if (alternative.kind == AlternativeKind::attach) {
            (void)out.attach_leaf(alternative.node, insertion->key, insertion->payload);
        } else {
            (void)out.split_leaf(alternative.target, insertion->key, insertion->payload);
        }
        out.set_probabilities(insertion->probabilities);
        break;
    case AlternativeKind::swap:
        out.swap_leaves(alternative.target, alternative.partner);
        break;
    case AlternativeKind::no_op:
        break;
    }
    return out;
}

RestructureOutcome apply_best(const AdaptiveTree& tree, std::vector<Alternative> alternatives,
                              const Insertion* insertion) {
    if (alternatives.empty()) {
        throw Error(ErrorKind::empty_input, "no restructuring alternatives to choose from");
    }
    std::stable_sort(alternatives.begin(), alternatives.end(), rank_less);

    const Alternative* chosen = &alternatives.front();
    const auto keep = std::find_if(alternatives.begin(), alternatives.end(),
                                   [](const Alternative& a) { return a.kind == AlternativeKind::no_op; });
    if (keep != alternatives.end() && chosen->resulting_delta >= keep->resulting_delta - strict_improvement) {
        chosen = &*keep;
    }

    RestructureOutcome outcome{*chosen, {}, apply_alternative(tree, *chosen, insertion), 0.0, 0.0};
    outcome.considered = std::move(alternatives);
    try {
        outcome.delta_before = discrepancy_report(tree).delta;
    } catch (const Error&) {
        // The input tree may not carry a usable distribution yet (e.g. right
        // after a raw mutation); there is no meaningful "before" value then.
        outcome.delta_before = std::nan("");
    }
    outcome.delta_after = discrepancy_report(outcome.tree_after).delta;
    return outcome;
}

RestructureOutcome insert_leaf(const AdaptiveTree& tree, const Insertion& insertion, const LeafFilter& allowed) {
    return apply_best(tree, enumerate_add_alternatives(tree, insertion, allowed), &insertion);
}

std::vector<RestructureOutcome> optimize_swaps(const AdaptiveTree& tree, std::size_t max_iters,
                                               const LeafFilter& allowed) {
    if (max_iters < 1) {
        throw Error(ErrorKind::invalid_argument, "max_iters must be at least 1");
    }
    std::vector<RestructureOutcome> steps;
    AdaptiveTree current = tree;
    for (std::size_t i = 0; i < max_iters; ++i) {
        if (discrepancy_report(current).delta <= delta_tolerance) break;
        RestructureOutcome step = apply_best(current, enumerate_swap_alternatives(current, allowed));
        if (step.chosen.kind == AlternativeKind::no_op) break;
        current = step.tree_after;
        steps.push_back(std::move(step));
    }
    return steps;
}

namespace {

nlohmann::ordered_json alternative_json(const Alternative& alt) {
    nlohmann::ordered_json out;
    out["kind"] = to_string(alt.kind);
    switch (alt.kind) {
    case AlternativeKind::swap: out["target"] = {alt.target, alt.partner}; break;
    case AlternativeKind::no_op: out["target"] = nullptr; break;
    default: out["target"] = alt.target; break;
    }
    out["delta"] = alt.resulting_delta;
    return out;
}

} // namespace

std::string outcome_to_json(const RestructureOutcome& outcome, int indent) {
    nlohmann::ordered_json doc;
    doc["chosen"] = alternative_json(outcome.chosen);
    auto considered = nlohmann::ordered_json::array();
    for (const auto& alt : outcome.considered) considered.push_back(alternative_json(alt));
    doc["considered"] = std::move(considered);
    if (std::isnan(outcome.delta_before)) {
        doc["delta_before"] = nullptr;
    } else {
        doc["delta_before"] = outcome.delta_before;
    }
    doc["delta_after"] = outcome.delta_after;
    return doc.dump(indent) + (indent >= 0 ? "\n" : "");
}

} // namespace amt
