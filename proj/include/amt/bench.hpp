#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amt/metrics.hpp"
#include "amt/restructure.hpp"
#include "amt/tree.hpp"
#include "amt/workload.hpp"

namespace amt {

enum class Variant { balanced, adaptive, huffman };

[[nodiscard]] std::string_view to_string(Variant v) noexcept;
[[nodiscard]] Variant parse_variant(std::string_view name);
/// Comma-separated list, e.g. "balanced,huffman".
[[nodiscard]] std::vector<Variant> parse_variants(std::string_view list);

struct VariantReport {
    Variant variant = Variant::balanced;
    MetricsReport metrics;
    double mean_proof_bytes = 0.0;       // Σ p·|canonical proof JSON|
    double mean_hash_invocations = 0.0;  // Σ p·steps
    double improvement_pct = 0.0;        // relative to the balanced baseline
    AdaptiveTree tree;
};

struct BenchReport {
    double balanced_k = 0.0;
    std::vector<VariantReport> variants;

    [[nodiscard]] const VariantReport& at(Variant v) const;
};

struct BenchOptions {
    std::size_t max_swap_iterations = default_max_swap_iterations;
};

/// Leaves inserted one at a time in descending probability order (ties by
/// key), each step restructured under the renormalized prefix distribution,
/// then swap passes under the full distribution. If swapping within the
/// balanced tree gives a lower k_A, that tree is returned instead.
[[nodiscard]] AdaptiveTree build_adaptive(const Distribution& dist, std::size_t arity,
                                          const BenchOptions& options = {});

/// (k_balanced - k_variant) / k_balanced × 100, or 0 when k_balanced = 0.
[[nodiscard]] double improvement_pct(double balanced_k, double variant_k);

[[nodiscard]] VariantReport evaluate_variant(Variant variant, AdaptiveTree tree, double balanced_k);

[[nodiscard]] BenchReport run_bench(const Distribution& dist, std::size_t arity, const std::vector<Variant>& modes,
                                    const BenchOptions& options = {});

/// variant,k_A,H,delta,mean_proof_bytes,improvement_pct
void write_variants_csv(std::ostream& out, const BenchReport& report);

// Iteration scripts ---------------------------------------------------------

struct ReplayStep {
    std::optional<std::string> new_key;  // absent: re-weight only
    ProbabilityMap probabilities;
    std::size_t swap_iterations = 0;     // swap passes after the step
};

struct ReplayScript {
    std::size_t arity = 2;
    Distribution initial;
    std::vector<ReplayStep> steps;
};

struct IterationRecord {
    std::size_t iter = 0;
    std::size_t alt_count = 0;
    std::size_t min_count = 0;  // alternatives tied at min_delta
    double min_delta = 0.0;
    Alternative chosen;
    std::size_t swaps_applied = 0;
    double delta_after = 0.0;   // after any swap passes
};

struct ReplayResult {
    std::vector<IterationRecord> iterations;
    std::optional<AdaptiveTree> final_tree;
};

/// JSON fixture:
///   {"arity":m, "initial":[{"key":"A","p":"7/8"},...],
///    "steps":[{"add":"C", "probabilities":{"A":"1/2",...}, "swap_iterations":0}, ...]}
/// Probabilities may be numbers or "a/b" strings. Re-weight steps (no "add")
/// default to 64 swap iterations, add steps to 0.
[[nodiscard]] ReplayScript parse_replay_script(std::string_view json_text);
[[nodiscard]] ReplayScript load_replay_script(const std::filesystem::path& path);

[[nodiscard]] ReplayResult replay_iterations(const ReplayScript& script);

/// iter,alt_count,min_delta,chosen_kind,chosen_target
void write_iterations_csv(std::ostream& out, const std::vector<IterationRecord>& records);

} // namespace amt
