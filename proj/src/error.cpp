#include "amt/error.hpp"

namespace amt {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::duplicate_key: return "duplicate_key";
    case ErrorKind::unknown_key: return "unknown_key";
    case ErrorKind::probability_sum: return "probability_sum";
    case ErrorKind::negative_probability: return "negative_probability";
    case ErrorKind::key_set_mismatch: return "key_set_mismatch";
    case ErrorKind::parent_full: return "parent_full";
    case ErrorKind::not_internal: return "not_internal";
    case ErrorKind::not_prefix_free: return "not_prefix_free";
    case ErrorKind::malformed: return "malformed";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::too_large: return "too_large";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace amt
