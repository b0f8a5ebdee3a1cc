#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "amt/coding.hpp"
#include "amt/metrics.hpp"
#include "amt/workload.hpp"
#include "support.hpp"

using namespace amt;
using testing::error_kind;

namespace {

CodeTable table_of(std::size_t m, std::vector<CodeEntry> entries) {
    CodeTable t;
    t.arity = m;
    t.entries = std::move(entries);
    return t;
}

std::vector<std::size_t> lengths(const CodeTable& t) {
    std::vector<std::size_t> out;
    for (const auto& e : t.entries) out.push_back(e.code.size());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("binary Huffman on a dyadic source is exact") {
    const ProbabilityMap probs{{"A", 0.5}, {"B", 0.25}, {"C", 0.125}, {"D", 0.125}};
    const auto t = huffman_codes(probs, 2);
    CHECK(t.at("A").code.size() == 1);
    CHECK(t.at("B").code.size() == 2);
    CHECK(t.at("C").code.size() == 3);
    CHECK(t.at("D").code.size() == 3);
    CHECK(t.avg_length == doctest::Approx(1.75));
    CHECK(t.entropy == doctest::Approx(1.75));
    std::vector<std::string> codes;
    for (const auto& e : t.entries) codes.push_back(e.code);
    CHECK(is_prefix_free(codes));
}

TEST_CASE("Huffman over the sixteen-address distribution") {
    const auto t = huffman_codes(to_probability_map(normalized(sixteen_address_distribution())), 2);
    CHECK(std::abs(t.avg_length - 3.49) <= 0.01);
    CHECK(std::abs(t.entropy - 3.46) <= 0.01);
    CHECK(lengths(t) == std::vector<std::size_t>{2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 7, 7, 7});
    CHECK(t.at("A").code.size() == 2);
    CHECK(t.at("P").code.size() == 7);
}

TEST_CASE("m-ary Huffman pads with dummies") {
    // n = 4, m = 3: one dummy so the first merge takes two real symbols.
    const ProbabilityMap probs{{"A", 0.4}, {"B", 0.3}, {"C", 0.2}, {"D", 0.1}};
    const auto t = huffman_codes(probs, 3);
    CHECK(lengths(t) == std::vector<std::size_t>{1, 1, 2, 2});
    const std::vector<double> p{0.4, 0.3, 0.2, 0.1};
    CHECK(t.avg_length == doctest::Approx(brute_force_min_avg_length(p, 3)));
    const auto tree = tree_from_codes(t);
    tree.validate();
    CHECK(tree.node(tree.root()).children.size() == 3);
}

TEST_CASE("single symbol gets the empty code") {
    const auto t = huffman_codes({{"only", 1.0}}, 4);
    CHECK(t.at("only").code.empty());
    CHECK(t.avg_length == 0.0);
    const auto tree = tree_from_codes(t);
    CHECK(tree.node_count() == 1);
}

TEST_CASE("merge ties go to the smallest key") {
    const ProbabilityMap probs{{"A", 0.25}, {"B", 0.25}, {"C", 0.25}, {"D", 0.25}};
    const auto first = huffman_codes(probs, 2);
    const auto again = huffman_codes(probs, 2);
    for (std::size_t i = 0; i < first.entries.size(); ++i) CHECK(first.entries[i].code == again.entries[i].code);
    CHECK(first.at("A").code == "00");
    CHECK(first.at("B").code == "01");
}

TEST_CASE("brute force oracle") {
    const std::vector<double> dyadic{0.5, 0.25, 0.125, 0.125};
    CHECK(brute_force_min_avg_length(dyadic, 2) == doctest::Approx(1.75));
    const std::vector<double> uniform5(5, 0.2);
    CHECK(brute_force_min_avg_length(uniform5, 2) == doctest::Approx(2.4));
    CHECK(brute_force_min_avg_length(uniform5, 4) == doctest::Approx(1.4));
    CHECK(brute_force_min_avg_length(std::vector<double>{1.0}, 2) == 0.0);
    const std::vector<double> eleven(11, 1.0 / 11.0);
    CHECK(error_kind([&] { (void)brute_force_min_avg_length(eleven, 2); }) == ErrorKind::too_large);
}

TEST_CASE("tree_from_codes validation") {
    CHECK(error_kind([] { (void)tree_from_codes(table_of(2, {{"A", 0.5, "0"}, {"B", 0.5, "01"}})); }) ==
          ErrorKind::not_prefix_free);
    CHECK(error_kind([] { (void)tree_from_codes(table_of(2, {{"A", 0.5, "0"}, {"B", 0.5, "2"}})); }) ==
          ErrorKind::malformed);
    CHECK(error_kind([] { (void)tree_from_codes(table_of(3, {{"A", 0.5, "0"}, {"B", 0.5, "2"}})); }) ==
          ErrorKind::malformed);
    CHECK(error_kind([] { (void)tree_from_codes(table_of(2, {{"A", 0.5, "00"}, {"B", 0.5, "1"}})); }) ==
          ErrorKind::malformed);
    CHECK(error_kind([] { (void)huffman_codes({{"A", 1.0}}, 37); }) == ErrorKind::too_large);
}

TEST_CASE("codes_from_tree reads back path codes") {
    const auto t = huffman_codes({{"A", 0.4}, {"B", 0.3}, {"C", 0.2}, {"D", 0.1}}, 2);
    const auto back = codes_from_tree(tree_from_codes(t));
    for (const auto& e : t.entries) CHECK(back.at(e.key).code == e.code);
    CHECK(back.avg_length == doctest::Approx(t.avg_length));
}

TEST_CASE("code table CSV") {
    std::ostringstream out;
    write_code_table_csv(out, huffman_codes({{"A", 0.5}, {"B", 0.5}}, 2));
    CHECK(out.str() == "key,probability,code,length\nA,0.5,0,1\nB,0.5,1,1\n");
}

TEST_CASE("small oracle values") {
    CHECK(brute_force_min_avg_length(std::vector<double>{0.5, 0.25, 0.25}, 2) == doctest::Approx(1.5));
    for (std::size_t m : {2u, 3u, 5u}) {
        const std::vector<double> uniform(m, 1.0 / double(m));
        CHECK(brute_force_min_avg_length(uniform, m) == doctest::Approx(1.0));
    }
    const auto tree = tree_from_codes(huffman_codes(to_probability_map(normalized(sixteen_address_distribution())), 2));
    CHECK(tree.depth("A") == 2);
    CHECK(tree.depth("M") == 7);
}
