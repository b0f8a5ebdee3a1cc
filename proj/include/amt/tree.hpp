#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amt/hash.hpp"

namespace amt {

/// Tolerance for Σp = 1 checks on probability distributions.
inline constexpr double probability_tolerance = 1e-9;

/// Largest arity for which paths can be spelled with one character per
/// level (0-9 then a-z).
inline constexpr std::size_t max_code_arity = 36;

struct NodeId {
    std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

    [[nodiscard]] constexpr bool valid() const noexcept {
        return value != std::numeric_limits<std::uint32_t>::max();
    }
    constexpr auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId no_node{};

enum class NodeKind { leaf, internal };

struct TreeConfig {
    std::size_t arity = 2;
    std::string hash_algorithm = "sha-256";
};

struct TreeNode {
    NodeKind kind = NodeKind::leaf;
    NodeId parent = no_node;
    std::vector<NodeId> children;  // internal only
    std::string key;               // leaf only
    Bytes payload;                 // leaf only
    Digest hash{};

    [[nodiscard]] bool is_leaf() const noexcept { return kind == NodeKind::leaf; }
};

struct LeafSpec {
    std::string key;
    Bytes payload;
    double probability = 0.0;
};

using ProbabilityMap = std::map<std::string, double, std::less<>>;

/// Node description used to assemble a tree from an external source
/// (snapshot files, code tables). Children refer to indices in the same
/// description vector.
struct NodeSpec {
    NodeKind kind = NodeKind::leaf;
    std::vector<std::size_t> children;
    std::string key;
    Bytes payload;
};

[[nodiscard]] char code_digit(std::size_t index);
/// Returns the slot index encoded by `c`, or max_code_arity if `c` is not a
/// code digit.
[[nodiscard]] std::size_t code_digit_value(char c) noexcept;

/// Throws Error(probability_sum / negative_probability) for an unusable
/// distribution.
void check_distribution(const ProbabilityMap& probs);

/// m-ary Merkle tree whose leaves carry access probabilities.
///
/// Internal nodes hold between 2 and arity children once a mutation has
/// finished. Child order is significant: slot i of a node is the code digit i
/// on every path through it. Node hashes are cached and refreshed along the
/// root path(s) touched by each mutation.
///
/// Mutations require exclusive access; const member functions may run
/// concurrently between mutations.
class AdaptiveTree {
public:
    /// Complete-as-possible m-ary tree over `leaves`, left-to-right order
    /// preserved. Leaves that do not fit at the shallow level are placed in
    /// the leftmost bottom-level groups.
    static AdaptiveTree build_balanced(std::span<const LeafSpec> leaves, TreeConfig config);

    /// Assembles a tree from node descriptions. Validates shape, key
    /// uniqueness and probabilities, then computes all hashes.
    static AdaptiveTree from_nodes(TreeConfig config, std::span<const NodeSpec> nodes,
                                   std::size_t root, ProbabilityMap probabilities);

    [[nodiscard]] const TreeConfig& config() const noexcept { return config_; }
    [[nodiscard]] std::size_t arity() const noexcept { return config_.arity; }
    [[nodiscard]] NodeId root() const noexcept { return root_; }
    [[nodiscard]] const TreeNode& node(NodeId id) const;
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t leaf_count() const noexcept { return leaf_index_.size(); }

    [[nodiscard]] bool contains(std::string_view key) const;
    [[nodiscard]] NodeId leaf_id(std::string_view key) const;
    [[nodiscard]] std::size_t depth(std::string_view key) const;
    [[nodiscard]] std::size_t depth_of(NodeId id) const;
    [[nodiscard]] std::size_t height() const;

    /// Slot index of `id` within its parent (0 for the root).
    [[nodiscard]] std::size_t child_index(NodeId id) const;
    /// Child indices from the root down to `id`.
    [[nodiscard]] std::vector<std::size_t> path_indices(NodeId id) const;
    /// path_indices() spelled with code_digit(); requires arity <= 36.
    [[nodiscard]] std::string path_code(NodeId id) const;

    /// Leaf keys in left-to-right order.
    [[nodiscard]] std::vector<std::string> leaf_keys() const;
    /// Internal node ids in pre-order.
    [[nodiscard]] std::vector<NodeId> internal_nodes() const;

    [[nodiscard]] const ProbabilityMap& probabilities() const noexcept { return probabilities_; }
    [[nodiscard]] double probability(std::string_view key) const;

    [[nodiscard]] const Digest& root_hash() const { return node(root_).hash; }

    /// Replaces leaf `target` by an internal node with children
    /// [target, new leaf]. The new leaf gets probability 0 until the caller
    /// installs a new distribution. Returns the new leaf's id.
    NodeId split_leaf(std::string_view target, std::string new_key, Bytes payload = {});

    /// Appends a new leaf as the last child of internal node `parent`.
    /// The new leaf gets probability 0. Returns its id.
    NodeId attach_leaf(NodeId parent, std::string new_key, Bytes payload = {});

    /// Exchanges the tree positions of two leaves.
    void swap_leaves(std::string_view key_a, std::string_view key_b);

    /// Replaces the whole distribution. Structure and hashes are untouched.
    void set_probabilities(ProbabilityMap probs);

    /// Root hash computed from scratch without touching the cache.
    [[nodiscard]] Digest recompute_root_hash() const;

    /// Full structural audit: parent links, child-count bounds, key index,
    /// probability key set and every cached hash. Throws Error(malformed).
    void validate() const;

private:
    AdaptiveTree() = default;

    NodeId add_node(TreeNode node);
    TreeNode& mut(NodeId id) { return nodes_[id.value]; }
    void rehash(NodeId id);
    void rehash_to_root(NodeId id);
    void require_new_key(std::string_view key) const;
    Digest compute_hash(NodeId id) const;

    TreeConfig config_;
    std::vector<TreeNode> nodes_;
    NodeId root_ = no_node;
    std::map<std::string, NodeId, std::less<>> leaf_index_;
    ProbabilityMap probabilities_;
};

} // namespace amt
