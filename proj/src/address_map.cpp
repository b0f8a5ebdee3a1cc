#include "amt/address_map.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "amt/coding.hpp"
#include "amt/error.hpp"
#include "io_util.hpp"

namespace amt {
namespace {

constexpr std::string_view address_header = "address,probability,balanced_code,adaptive_code";

std::string fixed_width_code(std::size_t ordinal, std::size_t width, std::size_t arity) {
    std::string code(width, '0');
    for (std::size_t i = width; i-- > 0;) {
        code[i] = code_digit(ordinal % arity);
        ordinal /= arity;
    }
    return code;
}

bool all_code_digits(std::string_view code) {
    for (char c : code) {
        if (code_digit_value(c) >= max_code_arity) return false;
    }
    return true;
}

} // namespace

AddressTable::AddressTable(std::vector<AddressRecord> records) : records_(std::move(records)) {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (!index_.emplace(r.address, i).second) {
            throw Error(ErrorKind::duplicate_key, "duplicate address '" + r.address + "'");
        }
        if (!all_code_digits(r.balanced_code) || !all_code_digits(r.adaptive_code)) {
            throw Error(ErrorKind::malformed, "address '" + r.address + "' has a non-digit code");
        }
        if (r.balanced_code.size() != records_.front().balanced_code.size()) {
            throw Error(ErrorKind::malformed, "balanced codes must all have the same length");
        }
        codes.push_back(r.adaptive_code);
    }
    if (!is_prefix_free(codes)) {
        throw Error(ErrorKind::not_prefix_free, "adaptive codes are not prefix-free");
    }
}

const AddressRecord* AddressTable::find(std::string_view address) const {
    const auto it = index_.find(address);
    return it == index_.end() ? nullptr : &records_[it->second];
}

const AddressRecord& AddressTable::lookup(std::string_view address) const {
    if (const auto* r = find(address)) return *r;
    throw Error(ErrorKind::not_found, "address '" + std::string(address) + "' is not in the table");
}

double AddressTable::average_adaptive_length() const {
    double sum = 0.0;
    for (const auto& r : records_) sum += r.probability * static_cast<double>(r.adaptive_code.size());
    return sum;
}

AddressTable build_mapping(const AdaptiveTree& balanced, const AdaptiveTree& adaptive) {
    if (balanced.arity() != adaptive.arity()) {
        throw Error(ErrorKind::invalid_argument, "trees must share an arity");
    }
    const auto order = balanced.leaf_keys();
    if (order.size() != adaptive.leaf_count()) {
        throw Error(ErrorKind::key_set_mismatch, "trees hold different numbers of leaves");
    }
    const std::size_t m = balanced.arity();
    std::size_t width = 0;
    for (std::size_t capacity = 1; capacity < order.size(); capacity *= m) ++width;

    std::vector<AddressRecord> records;
    records.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& key = order[i];
        if (!adaptive.contains(key)) {
            throw Error(ErrorKind::key_set_mismatch, "leaf '" + key + "' is missing from the adaptive tree");
        }
        records.push_back({key, fixed_width_code(i, width, m), adaptive.path_code(adaptive.leaf_id(key)),
                           adaptive.probability(key)});
    }
    return AddressTable(std::move(records));
}

void write_address_csv(std::ostream& out, const AddressTable& table) {
    out << address_header << '\n';
    for (const auto& r : table.records()) {
        out << r.address << ',' << detail::format_double(r.probability) << ',' << r.balanced_code << ','
            << r.adaptive_code << '\n';
    }
}

AddressTable read_address_csv(std::istream& in) {
    std::string line;
    if (!detail::next_line(in, line) || line != address_header) {
        throw Error(ErrorKind::malformed, "line 1: expected header '" + std::string(address_header) + "'");
    }
    std::vector<AddressRecord> records;
    for (std::size_t line_no = 2; detail::next_line(in, line); ++line_no) {
        auto where = [line_no] { return "line " + std::to_string(line_no) + ": "; };
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4) {
            throw Error(ErrorKind::malformed, where() + "expected 4 columns, found " + std::to_string(fields.size()));
        }
        AddressRecord r;
        r.address = fields[0];
        if (r.address.empty()) throw Error(ErrorKind::malformed, where() + "empty address");
        if (!detail::parse_double(fields[1], r.probability) || r.probability < 0.0) {
            throw Error(ErrorKind::malformed, where() + "invalid probability '" + fields[1] + "'");
        }
        r.balanced_code = fields[2];
        r.adaptive_code = fields[3];
        if (!all_code_digits(r.balanced_code) || !all_code_digits(r.adaptive_code)) {
            throw Error(ErrorKind::malformed, where() + "code contains a non-digit character");
        }
        records.push_back(std::move(r));
    }
    return AddressTable(std::move(records));
}

void save_address_table(const AddressTable& table, const std::filesystem::path& path) {
    std::ostringstream out;
    write_address_csv(out, table);
    detail::write_file(path, out.str());
}

AddressTable load_address_table(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    return read_address_csv(in);
}

} // namespace amt
