#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idensity::complexity {

/// Lossless, deterministic byte compressor. Implementations hold no mutable
/// state, so one instance may be shared by any number of threads.
class Compressor {
public:
    virtual ~Compressor() = default;

    virtual std::string_view id() const noexcept = 0;
    virtual std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const = 0;
    virtual std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> packed) const = 0;
};

/// Identifier of the bundled block-sorting compressor all thresholds are pinned to.
inline constexpr std::string_view kReferenceCompressorId = "bwt";

/// Upper bound on what the bundled compressor emits for an empty input, in bits.
/// Tolerances throughout the library are expressed in multiples of this.
inline constexpr double kContainerOverheadBits = 64.0;

/// Looks a compressor up by identifier ("bwt", "deflate", "xz").
/// Throws ArgumentError for unknown identifiers.
const Compressor& compressor_by_id(std::string_view id);

const Compressor& reference_compressor();

std::vector<std::string> compressor_ids();

}  // namespace idensity::complexity
