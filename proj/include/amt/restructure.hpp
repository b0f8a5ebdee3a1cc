#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

/// Declaration order is the tie-break order between kinds.
enum class AlternativeKind { attach, split, swap, no_op };

[[nodiscard]] std::string_view to_string(AlternativeKind kind) noexcept;

/// One candidate restructuring of a tree.
///
/// attach: `node` is the internal node receiving the new leaf, `target` its
///         label ("@" followed by the dot-joined child indices from the root).
/// split:  `target` is the leaf that becomes a two-leaf branch.
/// swap:   `target` < `partner` are the leaves that exchange positions.
/// no_op:  tree left unchanged.
struct Alternative {
    AlternativeKind kind = AlternativeKind::no_op;
    NodeId node = no_node;
    std::string target;
    std::string partner;
    double resulting_delta = 0.0;

    /// "@1.0", "C", "B:H" or "" for no_op.
    [[nodiscard]] std::string label() const;
};

/// Discrepancies closer than this are treated as equal when ranking.
inline constexpr double rank_resolution = 1e-9;

/// A swap must lower Δ by more than this to be preferred over leaving the
/// tree unchanged.
inline constexpr double strict_improvement = 1e-12;

/// Strict weak order on (Δ rounded to rank_resolution, kind, labels).
[[nodiscard]] bool rank_less(const Alternative& a, const Alternative& b);

/// New leaf plus the full distribution that holds once it is in the tree.
struct Insertion {
    std::string key;
    Bytes payload;
    ProbabilityMap probabilities;
};

/// Leaves available for restructuring. std::nullopt means every leaf.
using LeafFilter = std::optional<std::set<std::string, std::less<>>>;

struct RestructureOutcome {
    Alternative chosen;
    std::vector<Alternative> considered;  // sorted by rank_less
    AdaptiveTree tree_after;
    double delta_before = 0.0;
    double delta_after = 0.0;
};

/// One split per (allowed) leaf and one attach per internal node that still
/// has a free slot, each evaluated under the insertion's distribution.
[[nodiscard]] std::vector<Alternative> enumerate_add_alternatives(const AdaptiveTree& tree,
                                                                  const Insertion& insertion,
                                                                  const LeafFilter& allowed = std::nullopt);

/// Every unordered pair of out-of-place leaves (|Δi| > 1e-9) at different
/// depths, plus one no_op carrying the current Δ.
[[nodiscard]] std::vector<Alternative> enumerate_swap_alternatives(const AdaptiveTree& tree,
                                                                   const LeafFilter& allowed = std::nullopt);

/// Applies one alternative to a copy of `tree`. Attach and split need the
/// insertion that produced them.
[[nodiscard]] AdaptiveTree apply_alternative(const AdaptiveTree& tree, const Alternative& alternative,
                                             const Insertion* insertion = nullptr);

/// Picks the minimum alternative by rank_less and applies it. When a no_op
/// candidate is present, anything that does not beat it by more than
/// strict_improvement loses to it.
[[nodiscard]] RestructureOutcome apply_best(const AdaptiveTree& tree, std::vector<Alternative> alternatives,
                                            const Insertion* insertion = nullptr);

/// enumerate_add_alternatives + apply_best.
[[nodiscard]] RestructureOutcome insert_leaf(const AdaptiveTree& tree, const Insertion& insertion,
                                             const LeafFilter& allowed = std::nullopt);

inline constexpr std::size_t default_max_swap_iterations = 64;

/// Repeated swap passes. Returns only the applied steps; stops when no_op
/// wins, Δ <= 1e-9 or `max_iters` steps were taken.
[[nodiscard]] std::vector<RestructureOutcome> optimize_swaps(const AdaptiveTree& tree,
                                                             std::size_t max_iters = default_max_swap_iterations,
                                                             const LeafFilter& allowed = std::nullopt);

/// {"chosen":{"kind","target","delta"},"considered":[...],"delta_before","delta_after"}
[[nodiscard]] std::string outcome_to_json(const RestructureOutcome& outcome, int indent = 2);

} // namespace amt
