#pragma once

#include "idensity/compressor.hpp"

namespace idensity::complexity {

class BwtCompressor final : public Compressor {
public:
    static constexpr std::size_t kMaxBlock = std::size_t{1} << 24;

    std::string_view id() const noexcept override { return kReferenceCompressorId; }
    std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const override;
    std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> packed) const override;
};

}  // namespace idensity::complexity
