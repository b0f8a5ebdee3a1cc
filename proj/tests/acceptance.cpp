// Acceptance runner: one PASS/FAIL line per criterion. Exits 1 on any FAIL
// that is not listed in `unattainable`; those still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "amt/bench.hpp"
#include "amt/coding.hpp"
#include "amt/metrics.hpp"
#include "amt/proof.hpp"
#include "amt/restructure.hpp"
#include "support.hpp"

using namespace amt;

namespace {

constexpr double exact = 1e-9;
constexpr double table_tol = 0.005;
constexpr double runtime_limit_s = 60.0;
constexpr int property_cases = 500;

// Criteria that contradict the rest of the contract. Each one is still
// checked as written and reported FAIL.
const std::map<int, std::string> unattainable = {
    {1, "split-A delta is 1/2 - 1/4 + 0 = 1/4 = k_A - H (1.75 - 1.5); 1/2 would break the identity in 10"},
};

int failures = 0;
int excused = 0;

void report(int id, const std::string& name, const std::function<std::string()>& check) {
    std::string detail;
    try {
        detail = check();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const bool pass = detail.empty();
    const auto known = unattainable.find(id);
    if (!pass) ++(known != unattainable.end() ? excused : failures);
    std::printf("%s %2d %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(), pass ? "" : " -- ", detail.c_str());
    if (!pass && known != unattainable.end()) std::printf("        unattainable: %s\n", known->second.c_str());
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fixture(const char* name) { return std::string(AMT_FIXTURE_DIR) + "/" + name; }

AdaptiveTree replay_prefix(std::size_t m, std::size_t steps) {
    const auto script = load_replay_script(fixture("growth_binary.json"));
    const std::vector<LeafSpec> start{{"A", {}, 0.875}, {"B", {}, 0.125}};
    AdaptiveTree tree = AdaptiveTree::build_balanced(start, TreeConfig{m, "sha-256"});
    for (std::size_t i = 0; i < steps; ++i) {
        const auto& s = script.steps[i];
        tree = insert_leaf(tree, Insertion{*s.new_key, {}, s.probabilities}).tree_after;
    }
    return tree;
}

Insertion script_step(std::size_t i) {
    const auto script = load_replay_script(fixture("growth_binary.json"));
    return Insertion{*script.steps[i].new_key, {}, script.steps[i].probabilities};
}

AdaptiveTree from_codes(std::size_t m, std::vector<CodeEntry> entries) {
    CodeTable t;
    t.arity = m;
    t.entries = std::move(entries);
    return tree_from_codes(t);
}

double swap_delta(const std::vector<Alternative>& alts, const std::string& a, const std::string& b) {
    for (const auto& alt : alts) {
        if (alt.kind == AlternativeKind::swap && alt.target == a && alt.partner == b) return alt.resulting_delta;
    }
    return std::nan("");
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

std::string c1() {
    const auto tree = replay_prefix(2, 0);
    const auto ins = script_step(0);
    const auto alts = enumerate_add_alternatives(tree, ins);
    if (alts.size() != 2) return "expected 2 alternatives, got " + std::to_string(alts.size());
    std::vector<double> d{alts[0].resulting_delta, alts[1].resulting_delta};
    std::sort(d.begin(), d.end());
    if (!near(d[0], 0.0, exact) || !near(d[1], 0.5, exact)) return "deltas " + fmt(d[0]) + ", " + fmt(d[1]);
    const auto out = apply_best(tree, alts, &ins);
    if (out.chosen.kind != AlternativeKind::split || out.chosen.target != "B") return "chose " + out.chosen.label();
    if (!near(out.delta_after, 0.0, exact)) return "delta after " + fmt(out.delta_after);
    return {};
}

std::string c2() {
    const auto tree = replay_prefix(2, 1);
    const auto ins = script_step(1);
    const auto alts = enumerate_add_alternatives(tree, ins);
    if (alts.size() != 3) return "expected 3 alternatives";
    const double expected[][3] = {{2.0, 1.75, 0.25}, {1.75, 1.75, 0.0}, {1.875, 1.75, 0.125}};
    std::vector<bool> matched(3, false);
    for (const auto& alt : alts) {
        const auto r = discrepancy_report(apply_alternative(tree, alt, &ins));
        for (int i = 0; i < 3; ++i) {
            if (near(r.k_a, expected[i][0], exact) && near(r.entropy, expected[i][1], exact) &&
                near(r.delta, expected[i][2], exact)) {
                matched[i] = true;
            }
        }
    }
    if (std::count(matched.begin(), matched.end(), true) != 3) return "reported triples differ";
    const auto out = apply_best(tree, alts, &ins);
    if (!near(out.delta_after, 0.0, exact)) return "alternative (b) not chosen";
    return {};
}

std::string c3() {
    const auto tree = replay_prefix(2, 3);
    const auto ins = script_step(3);
    const auto alts = enumerate_add_alternatives(tree, ins);
    std::vector<double> d;
    for (const auto& a : alts) d.push_back(a.resulting_delta);
    std::sort(d.begin(), d.end(), std::greater<>());
    const std::vector<double> expected{0.4375, 0.3125, 0.125, 0.125, 0.125};
    if (d.size() != expected.size()) return "expected 5 alternatives";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!near(d[i], expected[i], exact)) return "delta " + fmt(d[i]) + " vs " + fmt(expected[i]);
    }
    const auto out = apply_best(tree, alts, &ins);
    if (out.chosen.kind != AlternativeKind::split || out.chosen.target != "C") return "chose " + out.chosen.label();
    return {};
}

std::string c4() {
    const auto r = replay_iterations(load_replay_script(fixture("growth_binary.json")));
    const double expected[] = {0.125, 0.25, 0.1875, 0.125, 0.185, 0.185};
    for (int i = 0; i < 6; ++i) {
        const double got = r.iterations.at(4 + i).min_delta;
        if (!near(got, expected[i], table_tol)) {
            return "iteration " + std::to_string(5 + i) + " min delta " + fmt(got);
        }
    }
    const std::size_t counts[] = {3, 4, 5};
    for (int i = 0; i < 3; ++i) {
        if (r.iterations.at(1 + i).alt_count != counts[i]) {
            return "iteration " + std::to_string(2 + i) + " count " + std::to_string(r.iterations[1 + i].alt_count);
        }
    }
    return {};
}

std::string c5() {
    const auto r = replay_iterations(load_replay_script(fixture("growth_quad.json")));
    const double first[] = {0.25, 0.125, 0.25, 0.375};
    const std::size_t counts[] = {3, 4, 4, 6};
    for (int i = 0; i < 4; ++i) {
        if (!near(r.iterations.at(i).min_delta, first[i], exact)) return "iteration " + std::to_string(i + 1);
        if (r.iterations[i].alt_count != counts[i]) return "count at iteration " + std::to_string(i + 1);
    }
    const double later[] = {0.34375, 0.25, 0.21875, 0.15625, 0.21875, 0.21875};
    for (int i = 0; i < 6; ++i) {
        const double got = r.iterations.at(4 + i).min_delta;
        if (!near(got, later[i], table_tol)) return "iteration " + std::to_string(5 + i) + " min delta " + fmt(got);
    }
    return {};
}

std::string c6() {
    const auto tree = from_codes(2, {{"A", 0.25, "00"},
                                     {"H", 0.0625, "01"},
                                     {"B", 0.25, "100"},
                                     {"D", 0.125, "101"},
                                     {"C", 0.0625, "1100"},
                                     {"E", 0.0625, "1101"},
                                     {"F", 0.125, "1110"},
                                     {"G", 0.0625, "1111"}});
    std::vector<std::string> candidates;
    for (const auto& leaf : discrepancy_report(tree).per_leaf) {
        if (std::abs(leaf.delta_i) > delta_tolerance) candidates.push_back(leaf.key);
    }
    std::sort(candidates.begin(), candidates.end());
    if (candidates != std::vector<std::string>{"B", "F", "H"}) return "candidate set differs";
    const auto alts = enumerate_swap_alternatives(tree);
    if (!near(swap_delta(alts, "B", "F"), 0.375, exact) || !near(swap_delta(alts, "B", "H"), 0.0625, exact) ||
        !near(swap_delta(alts, "F", "H"), 0.125, exact)) {
        return "swap deltas differ";
    }
    const auto steps = optimize_swaps(tree);
    if (steps.size() != 2) return std::to_string(steps.size()) + " iterations";
    if (steps[0].chosen.label() != "B:H" || steps[1].chosen.label() != "F:H") return "swap order differs";
    if (!near(steps[1].delta_after, 0.0, exact)) return "final delta " + fmt(steps[1].delta_after);
    return {};
}

std::string c7() {
    const auto tree = from_codes(4, {{"A", 0.5, "0"},
                                     {"C", 0.0625, "1"},
                                     {"D", 0.0625, "2"},
                                     {"B", 0.25, "30"},
                                     {"E", 0.0625, "31"},
                                     {"F", 0.0625, "32"}});
    const auto alts = enumerate_swap_alternatives(tree);
    if (!near(swap_delta(alts, "A", "B"), 0.625, exact) || !near(swap_delta(alts, "B", "C"), 0.1875, exact) ||
        !near(swap_delta(alts, "B", "D"), 0.1875, exact)) {
        return "swap deltas differ";
    }
    const auto best = apply_best(tree, alts);
    if (!near(best.delta_before, 0.375, exact) || !near(best.delta_after, 0.1875, exact)) {
        return "delta " + fmt(best.delta_before) + " -> " + fmt(best.delta_after);
    }
    return {};
}

std::string c8() {
    const auto dist = normalized(sixteen_address_distribution());
    const auto codes = huffman_codes(to_probability_map(dist), 2);
    if (!near(codes.avg_length, 3.49, 0.01)) return "avg length " + fmt(codes.avg_length);
    if (!near(codes.entropy, 3.46, 0.01)) return "entropy " + fmt(codes.entropy);
    const auto report = run_bench(dist, 2, {Variant::balanced, Variant::huffman});
    if (!near(report.balanced_k, 4.0, exact)) return "balanced k " + fmt(report.balanced_k);
    const double pct = report.at(Variant::huffman).improvement_pct;
    if (!near(pct, 12.75, 1.0)) return "improvement " + fmt(pct);
    std::vector<std::size_t> lengths;
    for (const auto& e : codes.entries) lengths.push_back(e.code.size());
    std::sort(lengths.begin(), lengths.end());
    if (lengths != std::vector<std::size_t>{2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 7, 7, 7}) return "length multiset";
    return {};
}

std::string c9() {
    // Printed values cover 0.999996 of the mass; rescale before use.
    const Distribution printed{{"A", 0.003906}, {"B", 0.0625}, {"C", 0.16529}, {"D", 0.0625},  {"E", 0.0625},
                               {"F", 0.0625},   {"G", 0.0625}, {"H", 0.0625},  {"I", 0.003906}, {"J", 0.0625},
                               {"K", 0.0625},   {"L", 0.0625}, {"M", 0.0625},  {"N", 0.003906}, {"O", 0.0625},
                               {"P", 0.000244}, {"Q", 0.0625}, {"R", 0.01},    {"S", 0.0625},  {"T", 0.000244}};
    const auto dist = normalized(printed);
    std::vector<double> probs;
    for (const auto& w : dist) probs.push_back(w.probability);

    std::mt19937_64 rng(2023);
    int started = 0;
    for (int attempt = 0; attempt < 2000 && started < 200; ++attempt) {
        const auto tree = testing::random_tree(rng, dist.size(), 16, probs);
        const double start = discrepancy_report(tree).delta;
        if (start <= 0.12) continue;
        ++started;
        const auto steps = optimize_swaps(tree, 1000);
        if (steps.size() >= 1000) return "did not terminate within 1000 swaps";
        double previous = start;
        for (const auto& s : steps) {
            if (!(s.delta_after < previous)) return "delta did not strictly decrease";
            previous = s.delta_after;
        }
    }
    if (started < 50) return "only " + std::to_string(started) + " starting trees with delta > 0.12";
    return {};
}

std::string c10() {
    std::mt19937_64 rng(4242);
    static const std::size_t arities[] = {2, 3, 4, 8, 16};
    for (int c = 0; c < property_cases; ++c) {
        const std::size_t m = arities[rng() % std::size(arities)];
        const std::size_t n = 1 + rng() % 64;
        const auto probs = testing::random_distribution(rng, n, true);
        auto tree = testing::random_tree(rng, n, m, probs);

        const auto r = discrepancy_report(tree);
        double k = 0.0, h = 0.0, sum_i = 0.0, kraft = 0.0;
        for (const auto& leaf : r.per_leaf) {
            k += leaf.p * double(leaf.l);
            if (leaf.p > 0.0) h -= leaf.p * std::log(leaf.p) / std::log(double(m));
            sum_i += leaf.delta_i;
            kraft += std::pow(double(m), -double(leaf.l));
        }
        if (!near(r.delta, k - h, exact) || !near(r.delta, sum_i, exact)) return "delta identity";
        if (r.delta < -exact) return "negative delta";
        if (kraft > 1.0 + 1e-12) return "Kraft";

        const auto keys = tree.leaf_keys();
        const auto& key = keys[rng() % keys.size()];
        const auto proof = prove(tree, key);
        if (verify(proof, tree.root_hash(), m) != VerifyStatus::valid) return "round trip";
        std::string text = proof_to_json(proof);
        const std::size_t pos = rng() % text.size();
        text[pos] = static_cast<char>(text[pos] ^ (1 + rng() % 255));
        try {
            const auto mutated = proof_from_json(text);
            if (verify_leaf(mutated, tree.node(tree.leaf_id(key)).payload, tree.root_hash(), m) ==
                VerifyStatus::valid) {
                return "mutated proof verified";
            }
        } catch (const Error&) {
        }

        const Digest root = tree.root_hash();
        const auto fresh = testing::random_distribution(rng, n);
        ProbabilityMap map;
        for (std::size_t i = 0; i < n; ++i) map[testing::key_name(i)] = fresh[i];
        tree.set_probabilities(map);
        if (tree.root_hash() != root || testing::reference_root(tree) != root) return "root hash changed";

        const std::size_t small_m = 2 + rng() % 3;
        const std::size_t small_n = 1 + rng() % 8;
        const auto small = testing::random_distribution(rng, small_n, true);
        ProbabilityMap small_map;
        for (std::size_t i = 0; i < small_n; ++i) small_map[testing::key_name(i)] = small[i];
        if (!near(huffman_codes(small_map, small_m).avg_length, brute_force_min_avg_length(small, small_m), exact)) {
            return "Huffman differs from brute force";
        }
    }
    return {};
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    report(1, "first insertion alternatives", c1);
    report(2, "second insertion metrics", c2);
    report(3, "fourth insertion tie break", c3);
    report(4, "binary iteration table", c4);
    report(5, "four-ary iteration table", c5);
    report(6, "binary swap suite", c6);
    report(7, "four-ary swap suite", c7);
    report(8, "sixteen-address Huffman bench", c8);
    report(9, "hexary swap descent", c9);
    report(10, "property suites", c10);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(11, "runtime under 60 s", [&]() -> std::string {
        if (elapsed < runtime_limit_s) return {};
        return fmt(elapsed) + " s";
    });
    std::printf("elapsed %.2f s; %d unexpected FAIL, %d unattainable FAIL\n", elapsed, failures, excused);
    return failures == 0 ? 0 : 1;
}
