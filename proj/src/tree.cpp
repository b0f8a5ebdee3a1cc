#include "amt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "amt/error.hpp"

namespace amt {
namespace {

std::size_t smallest_cover_depth(std::size_t n, std::size_t m) {
    std::size_t depth = 0;
    std::size_t capacity = 1;
    while (capacity < n) {
        capacity = capacity > n / m ? n : capacity * m;
        ++depth;
    }
    return depth;
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    while (exp-- > 0) out *= base;
    return out;
}

} // namespace

char code_digit(std::size_t index) {
    static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    if (index >= max_code_arity) {
        throw Error(ErrorKind::too_large, "child index " + std::to_string(index) +
                                              " has no single-character code digit");
    }
    return digits[index];
}

std::size_t code_digit_value(char c) noexcept {
    if (c >= '0' && c <= '9') return static_cast<std::size_t>(c - '0');
    if (c >= 'a' && c <= 'z') return static_cast<std::size_t>(c - 'a') + 10;
    return max_code_arity;
}

void check_distribution(const ProbabilityMap& probs) {
    if (probs.empty()) {
        throw Error(ErrorKind::empty_input, "probability distribution is empty");
    }
    double sum = 0.0;
    for (const auto& [key, p] : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw Error(ErrorKind::negative_probability,
                        "probability of '" + key + "' must be a finite non-negative number");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > probability_tolerance) {
        throw Error(ErrorKind::probability_sum,
                    "probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
}

AdaptiveTree AdaptiveTree::build_balanced(std::span<const LeafSpec> leaves, TreeConfig config) {
    if (config.arity < 2) {
        throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    }
    if (leaves.empty()) {
        throw Error(ErrorKind::empty_input, "cannot build a tree without leaves");
    }
    ProbabilityMap probs;
    for (const auto& leaf : leaves) {
        if (!probs.emplace(leaf.key, leaf.probability).second) {
            throw Error(ErrorKind::duplicate_key, "duplicate leaf key '" + leaf.key + "'");
        }
    }
    check_distribution(probs);

    AdaptiveTree tree;
    tree.config_ = std::move(config);
    tree.probabilities_ = std::move(probs);
    const std::size_t m = tree.config_.arity;
    const std::size_t n = leaves.size();

    std::vector<NodeId> leaf_ids;
    leaf_ids.reserve(n);
    for (const auto& spec : leaves) {
        TreeNode leaf;
        leaf.key = spec.key;
        leaf.payload = spec.payload;
        leaf.hash = leaf_digest(leaf.key, leaf.payload);
        const NodeId id = tree.add_node(std::move(leaf));
        tree.leaf_index_.emplace(spec.key, id);
        leaf_ids.push_back(id);
    }
    if (n == 1) {
        tree.root_ = leaf_ids.front();
        return tree;
    }

    auto make_parent = [&tree](std::span<const NodeId> children) {
        TreeNode parent;
        parent.kind = NodeKind::internal;
        parent.children.assign(children.begin(), children.end());
        const NodeId id = tree.add_node(std::move(parent));
        for (auto child : children) tree.mut(child).parent = id;
        tree.rehash(id);
        return id;
    };

    // The level just above the bottom has m^(d-1) slots. `groups` of them
    // become internal nodes holding the `overflow` leaves that do not fit.
    const std::size_t depth = smallest_cover_depth(n, m);
    const std::size_t slots = int_pow(m, depth - 1);
    const std::size_t excess = n - slots;
    const std::size_t groups = (excess + m - 2) / (m - 1);
    const std::size_t grouped = excess + groups;

    std::vector<NodeId> level;
    level.reserve(slots);
    std::size_t next = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t take = g + 1 < groups ? m : grouped - next;
        level.push_back(make_parent(std::span(leaf_ids).subspan(next, take)));
        next += take;
    }
    for (; next < n; ++next) level.push_back(leaf_ids[next]);

    while (level.size() > 1) {
        std::vector<NodeId> upper;
        upper.reserve(level.size() / m + 1);
        for (std::size_t i = 0; i < level.size(); i += m) {
            const std::size_t take = std::min(m, level.size() - i);
            upper.push_back(make_parent(std::span(level).subspan(i, take)));
        }
        level = std::move(upper);
    }
    tree.root_ = level.front();
    return tree;
}

AdaptiveTree AdaptiveTree::from_nodes(TreeConfig config, std::span<const NodeSpec> nodes,
                                      std::size_t root, ProbabilityMap probabilities) {
    if (config.arity < 2) {
        throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    }
    if (nodes.empty()) {
        throw Error(ErrorKind::empty_input, "tree has no nodes");
    }
    if (root >= nodes.size()) {
        throw Error(ErrorKind::malformed, "root index out of range");
    }

    AdaptiveTree tree;
    tree.config_ = std::move(config);
    tree.nodes_.resize(nodes.size());
    std::vector<int> references(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeSpec& spec = nodes[i];
        TreeNode& node = tree.nodes_[i];
        node.kind = spec.kind;
        if (spec.kind == NodeKind::leaf) {
            if (!spec.children.empty()) {
                throw Error(ErrorKind::malformed, "leaf '" + spec.key + "' has children");
            }
            node.key = spec.key;
            node.payload = spec.payload;
            if (!tree.leaf_index_.emplace(spec.key, NodeId{static_cast<std::uint32_t>(i)}).second) {
                throw Error(ErrorKind::duplicate_key, "duplicate leaf key '" + spec.key + "'");
            }
            continue;
        }
        if (spec.children.size() < 2 || spec.children.size() > tree.config_.arity) {
            throw Error(ErrorKind::malformed,
                        "internal node " + std::to_string(i) + " has " +
                            std::to_string(spec.children.size()) + " children; expected 2.." +
                            std::to_string(tree.config_.arity));
        }
        for (auto child : spec.children) {
            if (child >= nodes.size() || child == root || child == i) {
                throw Error(ErrorKind::malformed, "invalid child reference in node " + std::to_string(i));
            }
            ++references[child];
            node.children.push_back(NodeId{static_cast<std::uint32_t>(child)});
            tree.nodes_[child].parent = NodeId{static_cast<std::uint32_t>(i)};
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i != root && references[i] != 1) {
            throw Error(ErrorKind::malformed,
                        "node " + std::to_string(i) + " is referenced " +
                            std::to_string(references[i]) + " times; expected exactly once");
        }
    }
    tree.root_ = NodeId{static_cast<std::uint32_t>(root)};
    tree.nodes_[root].parent = no_node;

    // Every node referenced once plus a single root still allows detached
    // cycles; reachability rules them out.
    std::size_t reached = 0;
    std::vector<NodeId> stack{tree.root_};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        ++reached;
        for (auto child : tree.nodes_[id.value].children) stack.push_back(child);
        if (reached > nodes.size()) break;
    }
    if (reached != nodes.size()) {
        throw Error(ErrorKind::malformed, "not every node is reachable from the root");
    }

    std::set<std::string, std::less<>> prob_keys;
    for (const auto& [key, p] : probabilities) prob_keys.insert(key);
    for (const auto& [key, id] : tree.leaf_index_) {
        if (!prob_keys.contains(key)) {
            throw Error(ErrorKind::key_set_mismatch, "leaf '" + key + "' has no probability");
        }
    }
    if (prob_keys.size() != tree.leaf_index_.size()) {
        throw Error(ErrorKind::key_set_mismatch, "probabilities name leaves absent from the tree");
    }
    check_distribution(probabilities);
    tree.probabilities_ = std::move(probabilities);

    // Post-order hash computation.
    std::vector<std::pair<NodeId, bool>> work{{tree.root_, false}};
    while (!work.empty()) {
        auto [id, expanded] = work.back();
        work.pop_back();
        if (expanded || tree.nodes_[id.value].is_leaf()) {
            tree.rehash(id);
            continue;
        }
        work.emplace_back(id, true);
        for (auto child : tree.nodes_[id.value].children) work.emplace_back(child, false);
    }
    return tree;
}

const TreeNode& AdaptiveTree::node(NodeId id) const {
    if (!id.valid() || id.value >= nodes_.size()) {
        throw Error(ErrorKind::invalid_argument, "node id out of range");
    }
    return nodes_[id.value];
}

bool AdaptiveTree::contains(std::string_view key) const {
    return leaf_index_.find(key) != leaf_index_.end();
}

NodeId AdaptiveTree::leaf_id(std::string_view key) const {
    const auto it = leaf_index_.find(key);
    if (it == leaf_index_.end()) {
        throw Error(ErrorKind::unknown_key, "unknown leaf '" + std::string(key) + "'");
    }
    return it->second;
}

std::size_t AdaptiveTree::depth(std::string_view key) const { return depth_of(leaf_id(key)); }

std::size_t AdaptiveTree::depth_of(NodeId id) const {
    std::size_t depth = 0;
    for (NodeId cur = node(id).parent; cur.valid(); cur = nodes_[cur.value].parent) ++depth;
    return depth;
}

std::size_t AdaptiveTree::height() const {
    std::size_t best = 0;
    for (const auto& [key, id] : leaf_index_) best = std::max(best, depth_of(id));
    return best;
}

std::size_t AdaptiveTree::child_index(NodeId id) const {
    const NodeId parent = node(id).parent;
    if (!parent.valid()) return 0;
    const auto& siblings = nodes_[parent.value].children;
    return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
}

std::vector<std::size_t> AdaptiveTree::path_indices(NodeId id) const {
    std::vector<std::size_t> out;
    for (NodeId cur = id; node(cur).parent.valid(); cur = nodes_[cur.value].parent) {
        out.push_back(child_index(cur));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string AdaptiveTree::path_code(NodeId id) const {
    if (config_.arity > max_code_arity) {
        throw Error(ErrorKind::too_large, "path codes need arity <= 36");
    }
    std::string code;
    for (auto index : path_indices(id)) code.push_back(code_digit(index));
    return code;
}

std::vector<std::string> AdaptiveTree::leaf_keys() const {
    std::vector<std::string> keys;
    keys.reserve(leaf_index_.size());
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const TreeNode& cur = nodes_[stack.back().value];
        stack.pop_back();
        if (cur.is_leaf()) {
            keys.push_back(cur.key);
            continue;
        }
        for (auto it = cur.children.rbegin(); it != cur.children.rend(); ++it) stack.push_back(*it);
    }
    return keys;
}

std::vector<NodeId> AdaptiveTree::internal_nodes() const {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        const TreeNode& cur = nodes_[id.value];
        if (cur.is_leaf()) continue;
        out.push_back(id);
        for (auto it = cur.children.rbegin(); it != cur.children.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

double AdaptiveTree::probability(std::string_view key) const {
    const auto it = probabilities_.find(key);
    if (it == probabilities_.end()) {
        throw Error(ErrorKind::unknown_key, "unknown leaf '" + std::string(key) + "'");
    }
    return it->second;
}

NodeId AdaptiveTree::split_leaf(std::string_view target, std::string new_key, Bytes payload) {
    const NodeId old_leaf = leaf_id(target);
    require_new_key(new_key);

    const NodeId parent = nodes_[old_leaf.value].parent;
    const std::size_t slot = child_index(old_leaf);

    TreeNode fresh;
    fresh.key = new_key;
    fresh.payload = std::move(payload);
    const NodeId new_leaf = add_node(std::move(fresh));

    TreeNode branch;
    branch.kind = NodeKind::internal;
    branch.parent = parent;
    branch.children = {old_leaf, new_leaf};
    const NodeId branch_id = add_node(std::move(branch));

    mut(old_leaf).parent = branch_id;
    mut(new_leaf).parent = branch_id;
    if (parent.valid()) {
        mut(parent).children[slot] = branch_id;
    } else {
        root_ = branch_id;
    }
    leaf_index_.emplace(new_key, new_leaf);
    probabilities_.emplace(std::move(new_key), 0.0);

    rehash(new_leaf);
    rehash_to_root(branch_id);
    return new_leaf;
}

NodeId AdaptiveTree::attach_leaf(NodeId parent, std::string new_key, Bytes payload) {
    const TreeNode& target = node(parent);
    if (target.is_leaf()) {
        throw Error(ErrorKind::not_internal, "cannot attach to leaf '" + target.key + "'");
    }
    if (target.children.size() >= config_.arity) {
        throw Error(ErrorKind::parent_full, "node already has " + std::to_string(config_.arity) + " children");
    }
    require_new_key(new_key);

    TreeNode fresh;
    fresh.key = new_key;
    fresh.payload = std::move(payload);
    fresh.parent = parent;
    const NodeId new_leaf = add_node(std::move(fresh));
    mut(parent).children.push_back(new_leaf);
    leaf_index_.emplace(new_key, new_leaf);
    probabilities_.emplace(std::move(new_key), 0.0);

    rehash(new_leaf);
    rehash_to_root(parent);
    return new_leaf;
}

void AdaptiveTree::swap_leaves(std::string_view key_a, std::string_view key_b) {
    if (key_a == key_b) {
        throw Error(ErrorKind::invalid_argument, "cannot swap leaf '" + std::string(key_a) + "' with itself");
    }
    const NodeId a = leaf_id(key_a);
    const NodeId b = leaf_id(key_b);
    const NodeId parent_a = nodes_[a.value].parent;
    const NodeId parent_b = nodes_[b.value].parent;
    const std::size_t slot_a = child_index(a);
    const std::size_t slot_b = child_index(b);

    mut(parent_a).children[slot_a] = b;
    mut(parent_b).children[slot_b] = a;
    mut(a).parent = parent_b;
    mut(b).parent = parent_a;

    rehash_to_root(parent_a);
    if (parent_b != parent_a) rehash_to_root(parent_b);
}

void AdaptiveTree::set_probabilities(ProbabilityMap probs) {
    if (probs.size() != leaf_index_.size()) {
        throw Error(ErrorKind::key_set_mismatch, "distribution has " + std::to_string(probs.size()) +
                                                     " keys, tree has " + std::to_string(leaf_index_.size()) +
                                                     " leaves");
    }
    for (const auto& [key, p] : probs) {
        if (!contains(key)) {
            throw Error(ErrorKind::key_set_mismatch, "distribution names unknown leaf '" + key + "'");
        }
    }
    check_distribution(probs);
    probabilities_ = std::move(probs);
}

Digest AdaptiveTree::recompute_root_hash() const {
    std::vector<Digest> computed(nodes_.size());
    std::vector<std::pair<NodeId, bool>> work{{root_, false}};
    while (!work.empty()) {
        auto [id, expanded] = work.back();
        work.pop_back();
        const TreeNode& cur = nodes_[id.value];
        if (cur.is_leaf()) {
            computed[id.value] = leaf_digest(cur.key, cur.payload);
        } else if (expanded) {
            std::vector<Digest> children;
            children.reserve(cur.children.size());
            for (auto child : cur.children) children.push_back(computed[child.value]);
            computed[id.value] = internal_digest(children);
        } else {
            work.emplace_back(id, true);
            for (auto child : cur.children) work.emplace_back(child, false);
        }
    }
    return computed[root_.value];
}

void AdaptiveTree::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::malformed, what); };
    if (!root_.valid() || root_.value >= nodes_.size()) fail("missing root");
    if (nodes_[root_.value].parent.valid()) fail("root has a parent");

    std::vector<int> seen(nodes_.size(), 0);
    std::vector<NodeId> stack{root_};
    std::size_t leaves = 0;
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (seen[id.value]++ != 0) fail("node reachable more than once");
        const TreeNode& cur = nodes_[id.value];
        if (cur.is_leaf()) {
            ++leaves;
            if (!cur.children.empty()) fail("leaf with children");
            const auto it = leaf_index_.find(cur.key);
            if (it == leaf_index_.end() || it->second != id) fail("leaf index out of sync for '" + cur.key + "'");
        } else {
            if (cur.children.size() < 2 || cur.children.size() > config_.arity) {
                fail("internal node child count out of bounds");
            }
            for (auto child : cur.children) {
                if (nodes_[child.value].parent != id) fail("parent pointer mismatch");
                stack.push_back(child);
            }
        }
        if (cur.hash != compute_hash(id)) fail("stale cached hash");
    }
    if (leaves != leaf_index_.size()) fail("leaf index size mismatch");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (seen[i] == 0) fail("unreachable node " + std::to_string(i));
    }
    if (probabilities_.size() != leaf_index_.size()) fail("probability key set mismatch");
    for (const auto& [key, p] : probabilities_) {
        if (!contains(key)) fail("probability for unknown leaf '" + key + "'");
    }
    if (recompute_root_hash() != root_hash()) fail("root hash does not match full recompute");
}

NodeId AdaptiveTree::add_node(TreeNode node) {
    nodes_.push_back(std::move(node));
    return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Digest AdaptiveTree::compute_hash(NodeId id) const {
    const TreeNode& cur = nodes_[id.value];
    if (cur.is_leaf()) return leaf_digest(cur.key, cur.payload);
    std::vector<Digest> children;
    children.reserve(cur.children.size());
    for (auto child : cur.children) children.push_back(nodes_[child.value].hash);
    return internal_digest(children);
}

void AdaptiveTree::rehash(NodeId id) { mut(id).hash = compute_hash(id); }

void AdaptiveTree::rehash_to_root(NodeId id) {
    for (NodeId cur = id; cur.valid(); cur = nodes_[cur.value].parent) rehash(cur);
}

void AdaptiveTree::require_new_key(std::string_view key) const {
    if (contains(key)) {
        throw Error(ErrorKind::duplicate_key, "leaf '" + std::string(key) + "' already exists");
    }
}

} // namespace amt
