#include "amt/proof.hpp"

#include <algorithm>

#include <json.hpp>

#include "amt/error.hpp"

namespace amt {
namespace {

bool well_formed(const ProofStep& step, std::size_t arity) {
    // A lone child would mean a one-child internal node, which trees never hold.
    const std::size_t slots = step.siblings.size() + 1;
    if (slots < 2 || slots > arity || step.position >= slots) return false;
    // The path node and its siblings must occupy exactly slots 0..k.
    std::vector<bool> used(slots, false);
    used[step.position] = true;
    for (const auto& s : step.siblings) {
        if (s.index >= slots || used[s.index]) return false;
        used[s.index] = true;
    }
    return true;
}

} // namespace

std::string_view to_string(VerifyStatus status) noexcept {
    switch (status) {
    case VerifyStatus::valid: return "valid";
    case VerifyStatus::mismatch: return "mismatch";
    case VerifyStatus::malformed: return "malformed";
    }
    return "unknown";
}

MerkleProof prove(const AdaptiveTree& tree, std::string_view key) {
    const NodeId leaf = tree.leaf_id(key);
    MerkleProof proof;
    proof.key = std::string(key);
    proof.leaf_hash = tree.node(leaf).hash;
    for (NodeId cur = leaf; tree.node(cur).parent.valid(); cur = tree.node(cur).parent) {
        const TreeNode& parent = tree.node(tree.node(cur).parent);
        ProofStep step;
        for (std::size_t i = 0; i < parent.children.size(); ++i) {
            if (parent.children[i] == cur) {
                step.position = i;
            } else {
                step.siblings.push_back({i, tree.node(parent.children[i]).hash});
            }
        }
        proof.steps.push_back(std::move(step));
    }
    return proof;
}

VerifyStatus verify(const MerkleProof& proof, const Digest& expected_root, std::size_t arity) {
    if (arity < 2) return VerifyStatus::malformed;
    for (const auto& step : proof.steps) {
        if (!well_formed(step, arity)) return VerifyStatus::malformed;
    }
    Digest running = proof.leaf_hash;
    std::vector<Digest> children;
    for (const auto& step : proof.steps) {
        children.assign(step.siblings.size() + 1, Digest{});
        children[step.position] = running;
        for (const auto& s : step.siblings) children[s.index] = s.hash;
        running = internal_digest(children);
    }
    return running == expected_root ? VerifyStatus::valid : VerifyStatus::mismatch;
}

VerifyStatus verify_leaf(const MerkleProof& proof, std::span<const std::uint8_t> payload,
                         const Digest& expected_root, std::size_t arity) {
    const VerifyStatus status = verify(proof, expected_root, arity);
    if (status != VerifyStatus::valid) return status;
    return leaf_digest(proof.key, payload) == proof.leaf_hash ? VerifyStatus::valid : VerifyStatus::mismatch;
}

VerificationCost verification_cost(const MerkleProof& proof) {
    return {proof.steps.size(), proof_to_json(proof).size()};
}

std::string proof_to_json(const MerkleProof& proof, int indent) {
    nlohmann::ordered_json doc;
    doc["key"] = proof.key;
    doc["leaf_hash_hex"] = to_hex(proof.leaf_hash);
    auto steps = nlohmann::ordered_json::array();
    for (const auto& step : proof.steps) {
        auto siblings = nlohmann::ordered_json::array();
        for (const auto& s : step.siblings) siblings.push_back({{"index", s.index}, {"hash_hex", to_hex(s.hash)}});
        nlohmann::ordered_json entry;
        entry["position"] = step.position;
        entry["siblings"] = std::move(siblings);
        steps.push_back(std::move(entry));
    }
    doc["steps"] = std::move(steps);
    return doc.dump(indent);
}

MerkleProof proof_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        MerkleProof proof;
        proof.key = doc.at("key").get<std::string>();
        proof.leaf_hash = digest_from_hex(doc.at("leaf_hash_hex").get<std::string>());
        for (const auto& s : doc.at("steps")) {
            ProofStep step;
            step.position = s.at("position").get<std::size_t>();
            for (const auto& sib : s.at("siblings")) {
                step.siblings.push_back(
                    {sib.at("index").get<std::size_t>(), digest_from_hex(sib.at("hash_hex").get<std::string>())});
            }
            proof.steps.push_back(std::move(step));
        }
        return proof;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::malformed, std::string("proof JSON: ") + e.what());
    }
}

} // namespace amt
