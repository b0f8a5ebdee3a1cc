#include "amt/coding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>

#include "amt/error.hpp"
#include "amt/metrics.hpp"
#include "io_util.hpp"

namespace amt {
namespace {

struct MergeNode {
    std::vector<std::size_t> children;
    std::string key;  // leaves only
};

struct Group {
    double weight;
    bool dummy;
    std::string min_key;
    std::size_t sequence;
    std::size_t node;  // index into merge nodes; unused for dummies
};

// Greater-than so std::priority_queue pops the smallest group first.
struct LaterGroup {
    bool operator()(const Group& a, const Group& b) const {
        return std::tuple(a.weight, !a.dummy, std::string_view(a.min_key), a.sequence) >
               std::tuple(b.weight, !b.dummy, std::string_view(b.min_key), b.sequence);
    }
};

void finish_table(CodeTable& table) {
    std::vector<double> probs;
    table.avg_length = 0.0;
    for (const auto& e : table.entries) {
        probs.push_back(e.probability);
        table.avg_length += e.probability * static_cast<double>(e.code.size());
    }
    table.entropy = entropy(probs, table.arity);
}

void check_code_arity(std::size_t arity) {
    if (arity < 2) throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    if (arity > max_code_arity) {
        throw Error(ErrorKind::too_large, "code tables support arity up to 36");
    }
}

} // namespace

const CodeEntry& CodeTable::at(std::string_view key) const {
    for (const auto& e : entries) {
        if (e.key == key) return e;
    }
    throw Error(ErrorKind::not_found, "no code for '" + std::string(key) + "'");
}

CodeTable huffman_codes(const ProbabilityMap& probs, std::size_t arity) {
    check_code_arity(arity);
    check_distribution(probs);

    std::vector<MergeNode> nodes;
    std::priority_queue<Group, std::vector<Group>, LaterGroup> queue;
    std::size_t sequence = 0;
    for (const auto& [key, p] : probs) {
        nodes.push_back({{}, key});
        queue.push({p, false, key, sequence++, nodes.size() - 1});
    }
    const std::size_t n = probs.size();
    const std::size_t dummies = n > 1 ? (arity - 1 - (n - 1) % (arity - 1)) % (arity - 1) : 0;
    for (std::size_t i = 0; i < dummies; ++i) queue.push({0.0, true, std::string{}, sequence++, 0});

    while (queue.size() > 1) {
        MergeNode merged;
        double weight = 0.0;
        std::string min_key;
        for (std::size_t i = 0; i < arity && !queue.empty(); ++i) {
            Group g = queue.top();
            queue.pop();
            weight += g.weight;
            if (g.dummy) continue;
            if (merged.children.empty() || g.min_key < min_key) min_key = g.min_key;
            merged.children.push_back(g.node);
        }
        nodes.push_back(std::move(merged));
        queue.push({weight, false, std::move(min_key), sequence++, nodes.size() - 1});
    }

    CodeTable table;
    table.arity = arity;
    std::map<std::string, std::string, std::less<>> codes;
    std::vector<std::pair<std::size_t, std::string>> stack{{queue.top().node, std::string{}}};
    while (!stack.empty()) {
        auto [index, prefix] = std::move(stack.back());
        stack.pop_back();
        const MergeNode& cur = nodes[index];
        if (cur.children.empty()) {
            codes.emplace(cur.key, std::move(prefix));
            continue;
        }
        for (std::size_t d = 0; d < cur.children.size(); ++d) {
            stack.emplace_back(cur.children[d], prefix + code_digit(d));
        }
    }
    for (const auto& [key, p] : probs) table.entries.push_back({key, p, codes.find(key)->second});
    finish_table(table);
    return table;
}

double brute_force_min_avg_length(std::span<const double> probs, std::size_t arity) {
    if (arity < 2) throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    if (probs.empty()) throw Error(ErrorKind::empty_input, "no probabilities");
    if (probs.size() > brute_force_limit) {
        throw Error(ErrorKind::too_large, "brute force search is limited to 10 symbols");
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (std::abs(sum - 1.0) > probability_tolerance) {
        throw Error(ErrorKind::probability_sum, "probabilities must sum to 1");
    }
    const std::size_t n = probs.size();
    if (n == 1) return 0.0;

    // Longest useful depth: a full m-ary tree with n leaves has at most
    // ceil((n-1)/(m-1)) internal nodes on any path.
    const std::size_t max_depth = (n - 1 + arity - 2) / (arity - 1);
    std::uint64_t capacity = 1;  // m^max_depth, Kraft sums are kept in these units
    for (std::size_t i = 0; i < max_depth; ++i) capacity *= arity;

    // Sorted descending, an optimal assignment gives non-decreasing depths,
    // so enumerating depth multisets in that order covers every candidate.
    std::vector<double> sorted(probs.begin(), probs.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, std::uint64_t, double)> search =
        [&](std::size_t i, std::size_t min_depth, std::uint64_t used, double cost) {
            if (i == n) {
                best = std::min(best, cost);
                return;
            }
            std::uint64_t weight = capacity;
            for (std::size_t d = 1; d < min_depth; ++d) weight /= arity;
            for (std::size_t d = min_depth; d <= max_depth; ++d) {
                weight /= arity;
                // Every later symbol needs at least one unit slot.
                if (used + weight + (n - i - 1) > capacity) continue;
                search(i + 1, d, used + weight, cost + sorted[i] * static_cast<double>(d));
            }
        };
    search(0, 1, 0, 0.0);
    return best;
}

bool is_prefix_free(std::span<const std::string> codes) {
    std::vector<std::string> sorted(codes.begin(), codes.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0) return false;
    }
    return true;
}

AdaptiveTree tree_from_codes(const CodeTable& codes, const std::map<std::string, Bytes, std::less<>>& payloads) {
    check_code_arity(codes.arity);
    if (codes.entries.empty()) throw Error(ErrorKind::empty_input, "code table is empty");

    std::vector<std::string> strings;
    for (const auto& e : codes.entries) strings.push_back(e.code);
    if (!is_prefix_free(strings)) throw Error(ErrorKind::not_prefix_free, "codes are not prefix-free");

    struct TrieNode {
        std::map<std::size_t, std::size_t> children;  // digit -> trie index
        const CodeEntry* entry = nullptr;
    };
    std::vector<TrieNode> trie(1);
    ProbabilityMap probs;
    for (const auto& e : codes.entries) {
        if (!probs.emplace(e.key, e.probability).second) {
            throw Error(ErrorKind::duplicate_key, "duplicate key '" + e.key + "' in code table");
        }
        std::size_t cur = 0;
        for (char c : e.code) {
            const std::size_t digit = code_digit_value(c);
            if (digit >= codes.arity) {
                throw Error(ErrorKind::malformed, "code '" + e.code + "' has a digit outside arity " +
                                                      std::to_string(codes.arity));
            }
            auto it = trie[cur].children.find(digit);
            if (it == trie[cur].children.end()) {
                trie.emplace_back();
                it = trie[cur].children.emplace(digit, trie.size() - 1).first;
            }
            cur = it->second;
        }
        trie[cur].entry = &e;
    }

    std::vector<NodeSpec> specs(trie.size());
    for (std::size_t i = 0; i < trie.size(); ++i) {
        if (trie[i].entry != nullptr) {
            specs[i].kind = NodeKind::leaf;
            specs[i].key = trie[i].entry->key;
            if (auto it = payloads.find(specs[i].key); it != payloads.end()) specs[i].payload = it->second;
            continue;
        }
        specs[i].kind = NodeKind::internal;
        std::size_t expected = 0;
        for (const auto& [digit, child] : trie[i].children) {
            if (digit != expected++) {
                throw Error(ErrorKind::malformed, "code set skips a child slot; slots must be contiguous");
            }
            specs[i].children.push_back(child);
        }
        if (specs[i].children.size() < 2) {
            throw Error(ErrorKind::malformed, "code set leaves an internal node with a single child");
        }
    }
    return AdaptiveTree::from_nodes(TreeConfig{codes.arity, "sha-256"}, specs, 0, std::move(probs));
}

CodeTable codes_from_tree(const AdaptiveTree& tree) {
    check_code_arity(tree.arity());
    CodeTable table;
    table.arity = tree.arity();
    for (const auto& [key, p] : tree.probabilities()) {
        table.entries.push_back({key, p, tree.path_code(tree.leaf_id(key))});
    }
    finish_table(table);
    return table;
}

void write_code_table_csv(std::ostream& out, const CodeTable& table) {
    out << "key,probability,code,length\n";
    for (const auto& e : table.entries) {
        out << e.key << ',' << detail::format_double(e.probability) << ',' << e.code << ',' << e.code.size() << '\n';
    }
}

} // namespace amt
