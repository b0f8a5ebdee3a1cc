#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "amt/tree.hpp"

namespace amt {

/// Snapshot JSON:
///   {"config":{"arity":m,"hash":"sha-256"},
///    "nodes":[{"id","kind","children"?,"key"?,"payload_hex"?,"hash_hex"}],
///    "root_id":id, "probabilities":{key:p}}
[[nodiscard]] std::string snapshot_to_json(const AdaptiveTree& tree, int indent = 2);

/// Rebuilds the tree and checks every stored hash against the recomputed
/// one. Throws Error(malformed) on any inconsistency.
[[nodiscard]] AdaptiveTree snapshot_from_json(std::string_view text);

void save_snapshot(const AdaptiveTree& tree, const std::filesystem::path& path);
[[nodiscard]] AdaptiveTree load_snapshot(const std::filesystem::path& path);

} // namespace amt
