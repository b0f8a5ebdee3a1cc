#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "amt/error.hpp"
#include "amt/tree.hpp"
#include "ref_sha256.hpp"

namespace testing {

// Root hash folded recursively with the reference SHA-256 straight from the
// node structure, never reading the cached hashes.
inline amt::Digest reference_hash(const amt::AdaptiveTree& tree, amt::NodeId id) {
    const amt::TreeNode& n = tree.node(id);
    std::vector<std::uint8_t> buf;
    if (n.is_leaf()) {
        buf.push_back(0x00);
        buf.insert(buf.end(), n.key.begin(), n.key.end());
        buf.insert(buf.end(), n.payload.begin(), n.payload.end());
    } else {
        buf.push_back(0x01);
        for (auto child : n.children) {
            const auto h = reference_hash(tree, child);
            buf.insert(buf.end(), h.begin(), h.end());
        }
    }
    return ref::sha256(buf);
}

inline amt::Digest reference_root(const amt::AdaptiveTree& tree) { return reference_hash(tree, tree.root()); }

// Kind of the amt::Error thrown by `f`; fails loudly if nothing is thrown.
inline amt::ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const amt::Error& e) {
        return e.kind();
    }
    throw std::logic_error("expected amt::Error");
}

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n, bool allow_zero = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
        x = u(rng);
        x = x * x * x;  // skewed, like access frequencies
        if (allow_zero && u(rng) < 0.1) x = 0.0;
        sum += x;
    }
    if (sum == 0.0) {
        w[0] = 1.0;
        sum = 1.0;
    }
    for (auto& x : w) x /= sum;
    return w;
}

inline std::string key_name(std::size_t i) {
    std::string s = "k";
    if (i < 10) s += '0';
    return s + std::to_string(i);
}

// Random valid tree over keys k00..k{n-1}: each new leaf either splits a
// random leaf or fills a free slot, so every internal node ends with 2..m
// children.
inline amt::AdaptiveTree random_tree(std::mt19937_64& rng, std::size_t n, std::size_t arity,
                                     const std::vector<double>& probs) {
    std::vector<amt::LeafSpec> first{{key_name(0), {}, 1.0}};
    auto tree = amt::AdaptiveTree::build_balanced(first, amt::TreeConfig{arity, "sha-256"});
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<amt::NodeId> open;
        for (auto id : tree.internal_nodes()) {
            if (tree.node(id).children.size() < arity) open.push_back(id);
        }
        const auto keys = tree.leaf_keys();
        std::uniform_int_distribution<std::size_t> pick(0, keys.size() + open.size() - 1);
        const std::size_t choice = pick(rng);
        std::vector<std::uint8_t> payload{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8)};
        if (choice < keys.size()) {
            tree.split_leaf(keys[choice], key_name(i), payload);
        } else {
            tree.attach_leaf(open[choice - keys.size()], key_name(i), payload);
        }
    }
    amt::ProbabilityMap map;
    for (std::size_t i = 0; i < n; ++i) map[key_name(i)] = probs[i];
    tree.set_probabilities(std::move(map));
    return tree;
}

} // namespace testing
