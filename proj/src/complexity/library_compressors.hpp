#pragma once

#include "idensity/compressor.hpp"

namespace idensity::complexity {

/// zlib deflate at level 9, prefixed with the 4-byte original length.
class DeflateCompressor final : public Compressor {
public:
    std::string_view id() const noexcept override { return "deflate"; }
    std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const override;
    std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> packed) const override;
};

/// liblzma .xz stream, preset 9e, no integrity check.
class XzCompressor final : public Compressor {
public:
    std::string_view id() const noexcept override { return "xz"; }
    std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const override;
    std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> packed) const override;
};

}  // namespace idensity::complexity
