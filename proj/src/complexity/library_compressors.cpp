// Alternate compressors backed by zlib and liblzma. Thresholds are pinned
// to the bundled block-sorting compressor; these exist for comparison runs.

#include "library_compressors.hpp"

#include <lzma.h>
#include <zlib.h>

#include "idensity/errors.hpp"

namespace idensity::complexity {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = v << 8 | in[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace

std::vector<std::uint8_t> DeflateCompressor::compress(std::span<const std::uint8_t> input) const {
    uLongf bound = compressBound(static_cast<uLong>(input.size()));
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(input.size()));
    out.resize(4 + bound);
    const int rc = compress2(out.data() + 4, &bound, input.data(), static_cast<uLong>(input.size()), 9);
    if (rc != Z_OK) throw EstimatorError(std::string(id()), "zlib compress2 failed");
    out.resize(4 + bound);
    return out;
}

std::vector<std::uint8_t> DeflateCompressor::decompress(std::span<const std::uint8_t> packed) const {
    if (packed.size() < 4) throw EstimatorError(std::string(id()), "truncated header");
    uLongf size = get_u32(packed);
    std::vector<std::uint8_t> out(size);
    const int rc = uncompress(out.data(), &size, packed.data() + 4, static_cast<uLong>(packed.size() - 4));
    if (rc != Z_OK || size != out.size()) throw EstimatorError(std::string(id()), "zlib uncompress failed");
    return out;
}

std::vector<std::uint8_t> XzCompressor::compress(std::span<const std::uint8_t> input) const {
    std::vector<std::uint8_t> out(lzma_stream_buffer_bound(input.size()));
    std::size_t pos = 0;
    const auto rc = lzma_easy_buffer_encode(9 | LZMA_PRESET_EXTREME, LZMA_CHECK_NONE, nullptr, input.data(),
                                            input.size(), out.data(), &pos, out.size());
    if (rc != LZMA_OK) throw EstimatorError(std::string(id()), "lzma encode failed");
    out.resize(pos);
    return out;
}

std::vector<std::uint8_t> XzCompressor::decompress(std::span<const std::uint8_t> packed) const {
    std::uint64_t memlimit = UINT64_MAX;
    std::size_t in_pos = 0;
    std::vector<std::uint8_t> out(std::max<std::size_t>(64, packed.size() * 8));
    for (;;) {
        std::size_t out_pos = 0;
        in_pos = 0;
        const auto rc = lzma_stream_buffer_decode(&memlimit, 0, nullptr, packed.data(), &in_pos, packed.size(),
                                                  out.data(), &out_pos, out.size());
        if (rc == LZMA_OK) {
            out.resize(out_pos);
            return out;
        }
        if (rc != LZMA_BUF_ERROR || out.size() > (std::size_t{1} << 30)) {
            throw EstimatorError(std::string(id()), "lzma decode failed");
        }
        out.resize(out.size() * 4);
    }
}

}  // namespace idensity::complexity
