#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

struct Sibling {
    std::size_t index = 0;
    Digest hash{};
};

struct ProofStep {
    std::size_t position = 0;        // slot of the path node in its parent
    std::vector<Sibling> siblings;   // every other child, ascending index
};

/// Membership proof; steps run from the leaf up to the root. Positions are
/// explicit because an unbalanced tree cannot derive them from a leaf index.
struct MerkleProof {
    std::string key;
    Digest leaf_hash{};
    std::vector<ProofStep> steps;
};

enum class VerifyStatus {
    valid,
    mismatch,   // well-formed, but folds to a different root
    malformed,  // index collision, out-of-range or non-contiguous slots
};

[[nodiscard]] std::string_view to_string(VerifyStatus status) noexcept;

[[nodiscard]] MerkleProof prove(const AdaptiveTree& tree, std::string_view key);

/// Checks structure first, then folds the leaf hash up through every step.
/// Pass no_arity_bound to skip the per-step arity limit.
inline constexpr std::size_t no_arity_bound = std::numeric_limits<std::size_t>::max();
[[nodiscard]] VerifyStatus verify(const MerkleProof& proof, const Digest& expected_root, std::size_t arity);

/// verify() after checking that the proof commits to `payload` under its key.
[[nodiscard]] VerifyStatus verify_leaf(const MerkleProof& proof, std::span<const std::uint8_t> payload,
                                       const Digest& expected_root, std::size_t arity);

struct VerificationCost {
    std::size_t hash_invocations = 0;
    std::size_t proof_bytes = 0;
};

/// One hash per step; proof_bytes is the size of the canonical JSON.
[[nodiscard]] VerificationCost verification_cost(const MerkleProof& proof);

/// Canonical form: {"key","leaf_hash_hex","steps":[{"position","siblings":[{"index","hash_hex"}]}]}
/// with no whitespace when indent < 0.
[[nodiscard]] std::string proof_to_json(const MerkleProof& proof, int indent = -1);
[[nodiscard]] MerkleProof proof_from_json(std::string_view text);

} // namespace amt
