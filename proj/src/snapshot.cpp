#include "amt/snapshot.hpp"

#include <map>

#include <json.hpp>

#include "amt/error.hpp"
#include "io_util.hpp"

namespace amt {

using ordered_json = nlohmann::ordered_json;

std::string snapshot_to_json(const AdaptiveTree& tree, int indent) {
    ordered_json doc;
    doc["config"] = {{"arity", tree.arity()}, {"hash", tree.config().hash_algorithm}};
    ordered_json nodes = ordered_json::array();
    for (std::uint32_t i = 0; i < tree.node_count(); ++i) {
        const TreeNode& n = tree.node(NodeId{i});
        ordered_json entry;
        entry["id"] = i;
        entry["kind"] = n.is_leaf() ? "leaf" : "internal";
        if (n.is_leaf()) {
            entry["key"] = n.key;
            entry["payload_hex"] = to_hex(n.payload);
        } else {
            ordered_json children = ordered_json::array();
            for (auto c : n.children) children.push_back(c.value);
            entry["children"] = std::move(children);
        }
        entry["hash_hex"] = to_hex(n.hash);
        nodes.push_back(std::move(entry));
    }
    doc["nodes"] = std::move(nodes);
    doc["root_id"] = tree.root().value;
    ordered_json probs = ordered_json::object();
    for (const auto& [key, p] : tree.probabilities()) probs[key] = p;
    doc["probabilities"] = std::move(probs);
    return doc.dump(indent) + (indent >= 0 ? "\n" : "");
}

AdaptiveTree snapshot_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::malformed, std::string("snapshot is not valid JSON: ") + e.what());
    }
    try {
        TreeConfig config;
        config.arity = doc.at("config").at("arity").get<std::size_t>();
        config.hash_algorithm = doc.at("config").at("hash").get<std::string>();
        if (config.hash_algorithm != "sha-256") {
            throw Error(ErrorKind::malformed, "unsupported hash '" + config.hash_algorithm + "'");
        }

        const auto& entries = doc.at("nodes");
        std::map<std::uint64_t, std::size_t> index_of;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!index_of.emplace(entries[i].at("id").get<std::uint64_t>(), i).second) {
                throw Error(ErrorKind::malformed, "duplicate node id in snapshot");
            }
        }
        auto resolve = [&index_of](std::uint64_t id) {
            const auto it = index_of.find(id);
            if (it == index_of.end()) {
                throw Error(ErrorKind::malformed, "snapshot references unknown node id " + std::to_string(id));
            }
            return it->second;
        };

        std::vector<NodeSpec> specs(entries.size());
        std::vector<Digest> stored(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            const auto kind = e.at("kind").get<std::string>();
            if (kind == "leaf") {
                specs[i].kind = NodeKind::leaf;
                specs[i].key = e.at("key").get<std::string>();
                specs[i].payload = from_hex(e.value("payload_hex", std::string{}));
            } else if (kind == "internal") {
                specs[i].kind = NodeKind::internal;
                for (const auto& c : e.at("children")) specs[i].children.push_back(resolve(c.get<std::uint64_t>()));
            } else {
                throw Error(ErrorKind::malformed, "unknown node kind '" + kind + "'");
            }
            stored[i] = digest_from_hex(e.at("hash_hex").get<std::string>());
        }

        ProbabilityMap probs;
        for (const auto& [key, value] : doc.at("probabilities").items()) probs[key] = value.get<double>();

        const std::size_t root = resolve(doc.at("root_id").get<std::uint64_t>());
        AdaptiveTree tree = AdaptiveTree::from_nodes(std::move(config), specs, root, std::move(probs));
        for (std::uint32_t i = 0; i < stored.size(); ++i) {
            if (tree.node(NodeId{i}).hash != stored[i]) {
                throw Error(ErrorKind::malformed,
                            "stored hash of node " + entries[i].at("id").dump() + " does not match its content");
            }
        }
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::malformed, std::string("snapshot has unexpected shape: ") + e.what());
    }
}

void save_snapshot(const AdaptiveTree& tree, const std::filesystem::path& path) {
    detail::write_file(path, snapshot_to_json(tree));
}

AdaptiveTree load_snapshot(const std::filesystem::path& path) {
    return snapshot_from_json(detail::read_file(path));
}

} // namespace amt
