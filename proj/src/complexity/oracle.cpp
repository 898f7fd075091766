// Interrogator that knows each reference system's generator. For arithmetic
// systems the conditional cost of an output is the bits of the operands the
// other output does not already supply; for the LCG it is the step offset.

#include <algorithm>
#include <cmath>

#include "idensity/complexity.hpp"
#include "idensity/errors.hpp"

namespace idensity::complexity {

namespace {

using systems::OutputRecord;
using systems::SystemKind;

double bit_length(const BigInt& v) {
    return v == 0 ? 1.0 : static_cast<double>(boost::multiprecision::msb(v) + 1);
}

BigInt parse_base(const std::string& digits, unsigned base) {
    BigInt v = 0;
    for (char c : digits) v = v * base + (c - '0');
    return v;
}

std::vector<BigInt> operands_of(SystemKind kind, const OutputRecord& r) {
    const bool binary = kind == SystemKind::AdderCircuit;
    const auto ops = systems::detail::parse_operands(r.input.view(), binary ? "01" : "0123456789");
    const unsigned base = binary ? 2 : 10;
    return {parse_base(ops.left, base), parse_base(ops.right, base)};
}

double elias_gamma_bits(std::uint64_t v) {
    double b = 0;
    while ((v >> static_cast<int>(b)) > 1) b += 1;
    return 2.0 * b + 1.0;
}

bool arithmetic(SystemKind kind) {
    switch (kind) {
        case SystemKind::Lookup:
        case SystemKind::AdderCircuit:
        case SystemKind::AdditionAlg:
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid: return true;
        default: return false;
    }
}

std::uint32_t word_of(const OutputRecord& r) {
    if (r.output.size() != 4) throw ArgumentError("prng output must be a 32-bit word");
    const auto& b = r.output.bytes();
    return static_cast<std::uint32_t>(b[0]) << 24 | static_cast<std::uint32_t>(b[1]) << 16 |
           static_cast<std::uint32_t>(b[2]) << 8 | b[3];
}

ComplexityEstimate estimate(double bits, const char* id, const OutputRecord& x) {
    return {bits, id, "oracle", digest(x.output)};
}

}  // namespace

ComplexityEstimate oracle_k(SystemKind kind, const OutputRecord& x) {
    if (kind == SystemKind::Constant) return estimate(0.0, "oracle_k", x);
    if (kind == SystemKind::XorGate) return estimate(1.0, "oracle_k", x);
    if (kind == SystemKind::Prng) return estimate(systems::kLcgWordBits, "oracle_k", x);
    if (arithmetic(kind)) {
        double bits = 0.0;
        for (const auto& v : operands_of(kind, x)) bits += bit_length(v);
        return estimate(bits, "oracle_k", x);
    }
    throw Unsupported("no generator-aware oracle for " + std::string(systems::to_string(kind)));
}

ComplexityEstimate oracle_cond(SystemKind kind, const OutputRecord& x, const OutputRecord& y) {
    if (kind == SystemKind::RandomSource) {
        throw Unsupported("no generator-aware oracle for " + std::string(systems::to_string(kind)));
    }
    if (x.output == y.output) return estimate(0.0, "oracle_cond", x);
    switch (kind) {
        case SystemKind::Constant: return estimate(0.0, "oracle_cond", x);
        case SystemKind::XorGate: return estimate(1.0, "oracle_cond", x);
        case SystemKind::Prng: {
            const auto delta = static_cast<std::int64_t>(x.steps) - static_cast<std::int64_t>(y.steps);
            const double literal = systems::kLcgWordBits;
            if (systems::lcg_jump(word_of(y), delta) != word_of(x)) return estimate(literal, "oracle_cond", x);
            const double offset = 1.0 + elias_gamma_bits(static_cast<std::uint64_t>(delta < 0 ? -delta : delta));
            return estimate(std::min(offset, literal), "oracle_cond", x);
        }
        default: break;
    }
    if (!arithmetic(kind)) throw Unsupported("no generator-aware oracle for " + std::string(systems::to_string(kind)));

    // Operands of x that y's input does not already supply must be re-specified.
    auto given = operands_of(kind, y);
    double bits = 0.0;
    for (const auto& v : operands_of(kind, x)) {
        const auto hit = std::find(given.begin(), given.end(), v);
        if (hit != given.end()) {
            given.erase(hit);
        } else {
            bits += bit_length(v);
        }
    }
    return estimate(bits, "oracle_cond", x);
}

}  // namespace idensity::complexity
