#pragma once

#include <istream>
#include <ostream>

#include "idensity/systems.hpp"

namespace idensity::systems {

/// One JSON object per step: {"step", "input_hex", "output_hex", "scratchpad_bits"}.
void write_jsonl(std::ostream& out, const Trace& t);
/// Inverse of write_jsonl. Throws ArgumentError on malformed lines or
/// out-of-order steps.
Trace read_jsonl(std::istream& in);

}  // namespace idensity::systems
