#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

/// Tolerance used when comparing discrepancies.
inline constexpr double delta_tolerance = 1e-9;

struct PathStat {
    double probability = 0.0;
    std::size_t depth = 0;
};

struct LeafStats {
    std::string key;
    double p = 0.0;
    std::size_t l = 0;
    double delta_i = 0.0;
};

struct MetricsReport {
    double k_a = 0.0;      // Σ p·l
    double entropy = 0.0;  // -Σ p·log_m p
    double delta = 0.0;    // Σ delta_i
    std::vector<LeafStats> per_leaf;
};

/// log_m(p); exact for powers of two when m is a power of two.
[[nodiscard]] double log_base(double p, std::size_t m);

/// p·(l + log_m p), with the p = 0 term defined as 0.
[[nodiscard]] double elemental_discrepancy(double p, std::size_t depth, std::size_t m);

[[nodiscard]] double avg_path_length(std::span<const PathStat> stats);
[[nodiscard]] double entropy(std::span<const double> probs, std::size_t m);

/// Per-leaf discrepancies in left-to-right leaf order plus totals.
[[nodiscard]] MetricsReport discrepancy_report(const AdaptiveTree& tree);

/// {"k_A","H","delta","per_leaf":[{"key","p","l","delta_i"}]}
[[nodiscard]] std::string metrics_to_json(const MetricsReport& report, int indent = 2);

} // namespace amt
