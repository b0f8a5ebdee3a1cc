#include "amt/metrics.hpp"

#include <cmath>

#include <json.hpp>

#include "amt/error.hpp"

namespace amt {
namespace {

void check_sum(double sum) {
    if (std::abs(sum - 1.0) > probability_tolerance) {
        throw Error(ErrorKind::probability_sum,
                    "probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
}

void check_nonnegative(double p) {
    if (p < 0.0 || std::isnan(p)) {
        throw Error(ErrorKind::negative_probability, "probability " + std::to_string(p) + " is negative");
    }
}

} // namespace

double log_base(double p, std::size_t m) {
    return std::log2(p) / std::log2(static_cast<double>(m));
}

double elemental_discrepancy(double p, std::size_t depth, std::size_t m) {
    if (p <= 0.0) return 0.0;
    return p * (static_cast<double>(depth) + log_base(p, m));
}

double avg_path_length(std::span<const PathStat> stats) {
    double sum = 0.0;
    double k = 0.0;
    for (const auto& s : stats) {
        check_nonnegative(s.probability);
        sum += s.probability;
        k += s.probability * static_cast<double>(s.depth);
    }
    check_sum(sum);
    return k;
}

double entropy(std::span<const double> probs, std::size_t m) {
    if (m < 2) throw Error(ErrorKind::invalid_argument, "arity must be at least 2");
    double sum = 0.0;
    double h = 0.0;
    for (double p : probs) {
        check_nonnegative(p);
        sum += p;
        if (p > 0.0) h -= p * log_base(p, m);
    }
    check_sum(sum);
    return h;
}

MetricsReport discrepancy_report(const AdaptiveTree& tree) {
    MetricsReport report;
    const std::size_t m = tree.arity();
    double sum = 0.0;
    for (const auto& key : tree.leaf_keys()) {
        LeafStats s;
        s.key = key;
        s.p = tree.probability(key);
        s.l = tree.depth(key);
        s.delta_i = elemental_discrepancy(s.p, s.l, m);
        sum += s.p;
        report.k_a += s.p * static_cast<double>(s.l);
        if (s.p > 0.0) report.entropy -= s.p * log_base(s.p, m);
        report.delta += s.delta_i;
        report.per_leaf.push_back(std::move(s));
    }
    check_sum(sum);
    return report;
}

std::string metrics_to_json(const MetricsReport& report, int indent) {
    nlohmann::ordered_json doc;
    doc["k_A"] = report.k_a;
    doc["H"] = report.entropy;
    doc["delta"] = report.delta;
    auto leaves = nlohmann::ordered_json::array();
    for (const auto& s : report.per_leaf) {
        leaves.push_back({{"key", s.key}, {"p", s.p}, {"l", s.l}, {"delta_i", s.delta_i}});
    }
    doc["per_leaf"] = std::move(leaves);
    return doc.dump(indent) + (indent >= 0 ? "\n" : "");
}

} // namespace amt
