#include "bwt_compressor.hpp"
#include "idensity/errors.hpp"
#include "library_compressors.hpp"

namespace idensity::complexity {

namespace {

const BwtCompressor kBwt;
const DeflateCompressor kDeflate;
const XzCompressor kXz;

}  // namespace

const Compressor& compressor_by_id(std::string_view id) {
    if (id == kBwt.id()) return kBwt;
    if (id == kDeflate.id()) return kDeflate;
    if (id == kXz.id()) return kXz;
    throw ArgumentError("unknown compressor: " + std::string(id));
}

const Compressor& reference_compressor() { return kBwt; }

std::vector<std::string> compressor_ids() {
    return {std::string(kBwt.id()), std::string(kDeflate.id()), std::string(kXz.id())};
}

}  // namespace idensity::complexity
