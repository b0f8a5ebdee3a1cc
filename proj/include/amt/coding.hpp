#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

struct CodeEntry {
    std::string key;
    double probability = 0.0;
    std::string code;  // digits 0..m-1 spelled with code_digit()
};

struct CodeTable {
    std::size_t arity = 2;
    std::vector<CodeEntry> entries;  // ascending key order
    double avg_length = 0.0;
    double entropy = 0.0;

    [[nodiscard]] const CodeEntry& at(std::string_view key) const;
};

/// Optimal m-ary prefix code. For m > 2 the alphabet is padded with
/// zero-weight dummies so every merge takes exactly m nodes; merge ties go
/// to the group whose smallest contained key sorts first.
[[nodiscard]] CodeTable huffman_codes(const ProbabilityMap& probs, std::size_t arity);

inline constexpr std::size_t brute_force_limit = 10;

/// Minimum Σ p·l over every depth multiset satisfying Kraft for arity m.
/// Exhaustive; n must not exceed brute_force_limit.
[[nodiscard]] double brute_force_min_avg_length(std::span<const double> probs, std::size_t arity);

/// Tree whose child indices spell each code. The code set must describe a
/// finished tree: prefix-free, digits < arity, contiguous slots, and no
/// internal node with a single child.
[[nodiscard]] AdaptiveTree tree_from_codes(const CodeTable& codes,
                                           const std::map<std::string, Bytes, std::less<>>& payloads = {});

/// Path codes of every leaf, read back from a tree.
[[nodiscard]] CodeTable codes_from_tree(const AdaptiveTree& tree);

[[nodiscard]] bool is_prefix_free(std::span<const std::string> codes);

/// key,probability,code,length
void write_code_table_csv(std::ostream& out, const CodeTable& table);

} // namespace amt
