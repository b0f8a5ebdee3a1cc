#include "amt/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "amt/error.hpp"
#include "io_util.hpp"

namespace amt {

AccessTrace AccessTrace::from_events(std::vector<std::string> events) {
    AccessTrace trace;
    for (const auto& e : events) ++trace.counts[e];
    trace.events = std::move(events);
    return trace;
}

ProbabilityMap estimate_probabilities(const AccessTrace& trace) {
    std::uint64_t total = 0;
    for (const auto& [key, count] : trace.counts) total += count;
    if (total == 0) throw Error(ErrorKind::empty_input, "trace holds no accesses");
    ProbabilityMap out;
    for (const auto& [key, count] : trace.counts) {
        out.emplace(key, static_cast<double>(count) / static_cast<double>(total));
    }
    return out;
}

std::vector<double> zipf_distribution(std::size_t n, double s) {
    if (n == 0) throw Error(ErrorKind::invalid_argument, "zipf needs n >= 1");
    if (!(s >= 0.0)) throw Error(ErrorKind::invalid_argument, "zipf exponent must be >= 0");
    std::vector<double> out(n);
    double norm = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        out[k - 1] = std::pow(static_cast<double>(k), -s);
        norm += out[k - 1];
    }
    for (auto& p : out) p /= norm;
    return out;
}

Distribution sixteen_address_distribution() {
    return {{"A", 0.2041}, {"B", 0.1531}, {"C", 0.1224}, {"D", 0.1020}, {"E", 0.0816}, {"F", 0.0714},
            {"G", 0.0612}, {"H", 0.0510}, {"I", 0.0408}, {"J", 0.0306}, {"K", 0.0204}, {"L", 0.0204},
            {"M", 0.0102}, {"N", 0.0102}, {"O", 0.0102}, {"P", 0.0102}};
}

Distribution normalized(Distribution dist) {
    double total = 0.0;
    for (const auto& w : dist) {
        if (!std::isfinite(w.probability) || w.probability < 0.0) {
            throw Error(ErrorKind::negative_probability, "probability of '" + w.key + "' is negative");
        }
        total += w.probability;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::probability_sum, "distribution has zero total weight");
    for (auto& w : dist) w.probability /= total;
    return dist;
}

ProbabilityMap to_probability_map(const Distribution& dist) {
    ProbabilityMap out;
    for (const auto& w : dist) {
        if (!out.emplace(w.key, w.probability).second) {
            throw Error(ErrorKind::duplicate_key, "duplicate key '" + w.key + "'");
        }
    }
    return out;
}

std::vector<LeafSpec> to_leaf_specs(const Distribution& dist) {
    std::vector<LeafSpec> out;
    out.reserve(dist.size());
    for (const auto& w : dist) out.push_back({w.key, {}, w.probability});
    return out;
}

Distribution label_distribution(const std::vector<double>& probs, std::string_view prefix) {
    const std::size_t width = std::to_string(probs.size()).size();
    Distribution out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        std::string digits = std::to_string(i + 1);
        digits.insert(0, width - digits.size(), '0');
        out.push_back({std::string(prefix) + digits, probs[i]});
    }
    return out;
}

AccessTrace generate_trace(const Distribution& dist, std::size_t events, std::uint64_t seed) {
    if (dist.empty()) throw Error(ErrorKind::empty_input, "cannot sample from an empty distribution");
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& w : dist) {
        acc += w.probability;
        cdf.push_back(acc);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::string> out;
    out.reserve(events);
    for (std::size_t i = 0; i < events; ++i) {
        // 53 random bits mapped to [0, total); avoids the implementation
        // latitude of std::uniform_real_distribution.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        out.push_back(dist[static_cast<std::size_t>(it - cdf.begin())].key);
    }
    return AccessTrace::from_events(std::move(out));
}

void write_distribution_csv(std::ostream& out, const Distribution& dist) {
    out << "key,probability\n";
    for (const auto& w : dist) out << w.key << ',' << detail::format_double(w.probability) << '\n';
}

Distribution read_distribution_csv(std::istream& in) {
    std::string line;
    if (!detail::next_line(in, line) || line != "key,probability") {
        throw Error(ErrorKind::malformed, "line 1: expected header 'key,probability'");
    }
    Distribution out;
    std::set<std::string, std::less<>> seen;
    for (std::size_t line_no = 2; detail::next_line(in, line); ++line_no) {
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        WeightedKey w;
        if (fields.size() != 2 || fields[0].empty() || !detail::parse_double(fields[1], w.probability)) {
            throw Error(ErrorKind::malformed, "line " + std::to_string(line_no) + ": expected key,probability");
        }
        if (!seen.insert(fields[0]).second) {
            throw Error(ErrorKind::duplicate_key, "line " + std::to_string(line_no) + ": duplicate key '" +
                                                      fields[0] + "'");
        }
        w.key = fields[0];
        out.push_back(std::move(w));
    }
    return out;
}

Distribution load_distribution(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    return read_distribution_csv(in);
}

void write_trace(std::ostream& out, const AccessTrace& trace) {
    for (const auto& e : trace.events) out << e << '\n';
}

AccessTrace read_trace(std::istream& in) {
    std::vector<std::string> events;
    std::string line;
    while (detail::next_line(in, line)) {
        if (!line.empty()) events.push_back(line);
    }
    return AccessTrace::from_events(std::move(events));
}

} // namespace amt
