#include "amt/hash.hpp"

#include <memory>

#include <openssl/evp.h>

#include "amt/error.hpp"

namespace amt {
namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256: EVP init failed");
        }
    }

    void update(std::span<const std::uint8_t> data) {
        if (!data.empty() && EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
            throw std::runtime_error("sha256: EVP update failed");
        }
    }

    Digest finish() {
        Digest out{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
            throw std::runtime_error("sha256: EVP final failed");
        }
        return out;
    }

private:
    struct Free {
        void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
    };
    std::unique_ptr<EVP_MD_CTX, Free> ctx_;
};

int hex_value(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

} // namespace

Digest sha256(std::span<const std::uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

Digest leaf_digest(std::string_view key, std::span<const std::uint8_t> payload) {
    Sha256 h;
    const std::uint8_t prefix = leaf_prefix;
    h.update({&prefix, 1});
    h.update({reinterpret_cast<const std::uint8_t*>(key.data()), key.size()});
    h.update(payload);
    return h.finish();
}

Digest internal_digest(std::span<const Digest> children) {
    Sha256 h;
    const std::uint8_t prefix = internal_prefix;
    h.update({&prefix, 1});
    for (const auto& child : children) h.update(child);
    return h.finish();
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorKind::malformed, "hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorKind::malformed, "invalid hex digit in '" + std::string(hex) + "'");
        }
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

Digest digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw Error(ErrorKind::malformed, "digest must be 64 hex characters");
    }
    const Bytes raw = from_hex(hex);
    Digest out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

} // namespace amt
