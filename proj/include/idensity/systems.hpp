#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "idensity/bytes.hpp"

namespace idensity {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace idensity

namespace idensity::systems {

enum class SystemKind {
    Constant,
    Lookup,
    XorGate,
    AdderCircuit,
    AdditionAlg,
    MultiplicationAlg,
    Prng,
    RandomSource,
    MemoizedHybrid,
};

std::string_view to_string(SystemKind kind) noexcept;
/// Accepts the enum spelling or the short CLI names (constant, lookup, xor, adder,
/// addition, multiplication, prng, random, hybrid). Throws ArgumentError.
SystemKind kind_from_string(std::string_view name);

/// The fixed per-step rule of an iterative system: R advances, H halts.
struct TransitionSpec {
    std::uint64_t f_bits = 0;
    std::string advance_id;
    std::string halt_id;
};

struct SystemParams {
    std::uint64_t n = 1;
    std::uint64_t m = 0;
    std::uint64_t b = 0;
    std::optional<std::uint64_t> seed;
    std::uint64_t cache_limit = 9;
    std::uint64_t redundant_entries = 0;
    std::string constant_value = "0";
    /// RandomSource only: bytes to preload into the capture buffer (replay).
    std::optional<ByteString> entropy_replay;
};

/// Append-only buffer of OS entropy. Reads beyond the captured prefix pull
/// fresh bytes from std::random_device; earlier reads are replayed verbatim.
class EntropyCapture {
public:
    explicit EntropyCapture(ByteString preload = {}) : buffer_(std::move(preload)) {}

    ByteString read(std::size_t offset, std::size_t count);
    ByteString captured() const;

private:
    mutable std::mutex mutex_;
    ByteString buffer_;
};

/// A system under test. Immutable once built.
struct SystemSpec {
    SystemKind kind = SystemKind::Constant;
    std::uint64_t n = 1;
    BigInt c_bits;             // structural accounting
    BigInt c_serialized_bits;  // 8 x compressed canonical self-description
    std::optional<TransitionSpec> transition;
    SystemParams params;
    std::shared_ptr<EntropyCapture> entropy;  // RandomSource only

    bool iterative() const noexcept { return transition.has_value(); }
    /// Canonical key=value description, the input to c_serialized_bits.
    std::string describe() const;
};

/// One input -> output observation.
struct OutputRecord {
    ByteString input;
    ByteString output;
    std::uint64_t n = 0;
    std::uint64_t steps = 1;
};

enum class StepKind { Advance, Lookup };

/// Ordered outputs o_1..o_k of one iterative computation.
struct Trace {
    std::vector<OutputRecord> records;
    std::vector<StepKind> kinds;
    std::vector<std::uint64_t> step_scratchpad_bits;
    std::uint64_t scratchpad_bits = 0;  // peak working memory, never part of c_bits

    std::size_t size() const noexcept { return records.size(); }
    /// o_1 ... o_{i-1} joined by kStepSeparator (1-based i; context(1) is empty).
    ByteString context(std::size_t i) const;
};

inline constexpr std::uint8_t kStepSeparator = '\n';

// Accounting constants (bits).
inline constexpr std::uint64_t kGateBits = 4;
inline constexpr std::uint64_t kGatesPerFullAdder = 5;
inline constexpr std::uint64_t kMultiplicationTableBits = 700;
inline constexpr std::uint64_t kCarryRuleBits = 100;
inline constexpr std::uint64_t kStoredProductBits = 7;
inline constexpr std::uint64_t kLcgWordBits = 32;
inline constexpr std::uint64_t kRandomSourceBits = 32;

// Published 32-bit LCG constants (Numerical Recipes).
inline constexpr std::uint32_t kLcgMultiplier = 1664525U;
inline constexpr std::uint32_t kLcgIncrement = 1013904223U;

SystemSpec build(SystemKind kind, const SystemParams& params);

/// Lookup table covering every pair of n-digit operands: m = 10^(2n) entries of
/// ceil(log2((10^n - 1)^2 + 1)) bits.
SystemParams lookup_covering(std::uint64_t n);

OutputRecord run(const SystemSpec& spec, const ByteString& input);
Trace trace(const SystemSpec& spec, const ByteString& input);

/// Raw input count before independence filtering.
BigInt count_domain(const SystemSpec& spec, std::uint64_t n);

/// A seeded draw from the system's input domain at size n: two n-digit decimal
/// operands for the arithmetic kinds and Lookup, two n-bit operands for the
/// adder, a bit pair for XOR, a stream index in [1, n] for Prng, a block index
/// for RandomSource. Uses only raw engine output, so the draw is the same on
/// every standard library.
ByteString random_input(const SystemSpec& spec, std::uint64_t n, std::mt19937_64& rng);

/// Uniform integer in [0, bound) from raw engine output.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

/// LCG state after `steps` applications starting from `state` (negative steps run backwards).
std::uint32_t lcg_jump(std::uint32_t state, std::int64_t steps) noexcept;

namespace detail {

struct Operands {
    std::string left;
    std::string right;
    char op = '*';
};

/// Parses "a*b", "a x b" or "a+b" over the given digit alphabet ("0123456789" or "01").
Operands parse_operands(std::string_view text, std::string_view alphabet);
std::string strip_zeros(std::string digits);
std::string add_decimal(std::string_view a, std::string_view b);
std::string shift_decimal(std::string_view a, std::size_t places);

}  // namespace detail

}  // namespace idensity::systems
