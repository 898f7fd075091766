#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idensity {

/// Owned octet string. Every string the estimators see goes through this type.
class ByteString {
public:
    ByteString() = default;
    explicit ByteString(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
    explicit ByteString(std::string_view text) : bytes_(text.begin(), text.end()) {}
    ByteString(std::span<const std::uint8_t> bytes) : bytes_(bytes.begin(), bytes.end()) {}

    std::size_t size() const noexcept { return bytes_.size(); }
    bool empty() const noexcept { return bytes_.empty(); }
    std::uint64_t bit_length() const noexcept { return 8ULL * bytes_.size(); }

    std::span<const std::uint8_t> span() const noexcept { return bytes_; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
    std::string_view view() const noexcept {
        return {reinterpret_cast<const char*>(bytes_.data()), bytes_.size()};
    }
    std::string str() const { return std::string(view()); }

    void append(std::span<const std::uint8_t> more) { bytes_.insert(bytes_.end(), more.begin(), more.end()); }
    void append(const ByteString& more) { append(more.span()); }
    void push_back(std::uint8_t b) { bytes_.push_back(b); }

    std::string hex() const;
    static ByteString from_hex(std::string_view hex);

    friend bool operator==(const ByteString&, const ByteString&) = default;
    friend auto operator<=>(const ByteString& a, const ByteString& b) { return a.bytes_ <=> b.bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

/// Stable 64-bit FNV-1a digest rendered as 16 hex digits.
std::string digest(std::span<const std::uint8_t> data);
inline std::string digest(const ByteString& s) { return digest(s.span()); }

}  // namespace idensity
