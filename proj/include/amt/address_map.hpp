#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "amt/tree.hpp"

namespace amt {

struct AddressRecord {
    std::string address;
    std::string balanced_code;  // fixed width ceil(log_m n)
    std::string adaptive_code;  // root-to-leaf child indices in the adaptive tree
    double probability = 0.0;

    friend bool operator==(const AddressRecord&, const AddressRecord&) = default;
};

/// "Address -> path encoding" table linking the legacy fixed-width code of
/// each account with its position in the adaptive tree. Immutable once
/// built; rebuild it after the adaptive tree changes.
class AddressTable {
public:
    AddressTable() = default;
    /// Validates the record set (unique addresses, prefix-free adaptive codes,
    /// equal balanced widths). Throws Error(malformed / not_prefix_free).
    explicit AddressTable(std::vector<AddressRecord> records);

    [[nodiscard]] const std::vector<AddressRecord>& records() const noexcept { return records_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }

    /// Throws Error(not_found) for an unknown address.
    [[nodiscard]] const AddressRecord& lookup(std::string_view address) const;
    [[nodiscard]] const AddressRecord* find(std::string_view address) const;

    /// Σ p·|adaptive_code|
    [[nodiscard]] double average_adaptive_length() const;

    friend bool operator==(const AddressTable& a, const AddressTable& b) { return a.records_ == b.records_; }

private:
    std::vector<AddressRecord> records_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// The balanced code of a leaf is its left-to-right ordinal in `balanced`
/// written in base m with ceil(log_m n) digits; for n = m^d it coincides with
/// the leaf's path in that tree.
[[nodiscard]] AddressTable build_mapping(const AdaptiveTree& balanced, const AdaptiveTree& adaptive);

/// CSV: address,probability,balanced_code,adaptive_code (header, LF endings).
void write_address_csv(std::ostream& out, const AddressTable& table);
[[nodiscard]] AddressTable read_address_csv(std::istream& in);

void save_address_table(const AddressTable& table, const std::filesystem::path& path);
[[nodiscard]] AddressTable load_address_table(const std::filesystem::path& path);

} // namespace amt
