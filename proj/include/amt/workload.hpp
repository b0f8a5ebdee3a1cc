#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

struct WeightedKey {
    std::string key;
    double probability = 0.0;
};

/// Ordered distribution; order is the left-to-right leaf order of a
/// balanced build.
using Distribution = std::vector<WeightedKey>;

struct AccessTrace {
    std::vector<std::string> events;
    std::map<std::string, std::uint64_t, std::less<>> counts;

    static AccessTrace from_events(std::vector<std::string> events);
};

/// p_i = count_i / total. Throws Error(empty_input) for an empty trace.
[[nodiscard]] ProbabilityMap estimate_probabilities(const AccessTrace& trace);

/// p_k = k^-s / Σ j^-s for k = 1..n.
[[nodiscard]] std::vector<double> zipf_distribution(std::size_t n, double s);

/// The 16-leaf address distribution A..P as printed (sums to 0.9998).
[[nodiscard]] Distribution sixteen_address_distribution();

/// Divides every probability by the total.
[[nodiscard]] Distribution normalized(Distribution dist);

[[nodiscard]] ProbabilityMap to_probability_map(const Distribution& dist);
[[nodiscard]] std::vector<LeafSpec> to_leaf_specs(const Distribution& dist);

/// Keys "k01", "k02", ... zero-padded to the width of n.
[[nodiscard]] Distribution label_distribution(const std::vector<double>& probs, std::string_view prefix = "k");

/// Seeded i.i.d. sampling from `dist` (mt19937_64, inverse CDF).
[[nodiscard]] AccessTrace generate_trace(const Distribution& dist, std::size_t events, std::uint64_t seed);

/// key,probability with header.
void write_distribution_csv(std::ostream& out, const Distribution& dist);
[[nodiscard]] Distribution read_distribution_csv(std::istream& in);
[[nodiscard]] Distribution load_distribution(const std::filesystem::path& path);

/// One key per line.
void write_trace(std::ostream& out, const AccessTrace& trace);
[[nodiscard]] AccessTrace read_trace(std::istream& in);

} // namespace amt
