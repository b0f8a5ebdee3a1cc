#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amt {

enum class ErrorKind {
    invalid_argument,
    empty_input,
    duplicate_key,
    unknown_key,
    probability_sum,
    negative_probability,
    key_set_mismatch,
    parent_full,
    not_internal,
    not_prefix_free,
    malformed,
    not_found,
    too_large,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every library failure is reported as an Error; kind() tells callers
/// which precondition was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace amt
