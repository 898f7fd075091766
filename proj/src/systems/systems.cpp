#include "idensity/systems.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <sstream>

#include "idensity/compressor.hpp"
#include "idensity/errors.hpp"

namespace idensity::systems {

namespace {

constexpr std::uint64_t kAdderInterfaceBits = 4;
constexpr std::uint64_t kMaxTraceSteps = 1'000'000;

// ---------------------------------------------------------------------------
// Gate-level ripple-carry adder. Wires 0..n-1 carry a, n..2n-1 carry b,
// wire 2n is constant zero (carry in); gate outputs are appended in order.

enum class GateOp : std::uint8_t { Xor, And, Or };

struct Gate {
    GateOp op;
    std::size_t lhs;
    std::size_t rhs;
};

struct Netlist {
    std::size_t width = 0;
    std::vector<Gate> gates;
    std::vector<std::size_t> sum_wires;
    std::size_t carry_out = 0;
};

Netlist ripple_carry(std::size_t width) {
    Netlist net;
    net.width = width;
    std::size_t next_wire = 2 * width + 1;
    std::size_t carry = 2 * width;
    auto add_gate = [&](GateOp op, std::size_t lhs, std::size_t rhs) {
        net.gates.push_back({op, lhs, rhs});
        return next_wire++;
    };
    for (std::size_t i = 0; i < width; ++i) {
        const std::size_t a = i;
        const std::size_t b = width + i;
        const auto half = add_gate(GateOp::Xor, a, b);
        net.sum_wires.push_back(add_gate(GateOp::Xor, half, carry));
        const auto both = add_gate(GateOp::And, a, b);
        const auto propagate = add_gate(GateOp::And, half, carry);
        carry = add_gate(GateOp::Or, both, propagate);
    }
    net.carry_out = carry;
    return net;
}

// Bits are LSB first; returns width+1 bits, LSB first.
std::vector<bool> simulate(const Netlist& net, const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> wire(2 * net.width + 1 + net.gates.size(), false);
    for (std::size_t i = 0; i < net.width; ++i) {
        wire[i] = a[i];
        wire[net.width + i] = b[i];
    }
    std::size_t out = 2 * net.width + 1;
    for (const auto& g : net.gates) {
        const bool x = wire[g.lhs];
        const bool y = wire[g.rhs];
        switch (g.op) {
            case GateOp::Xor: wire[out] = x != y; break;
            case GateOp::And: wire[out] = x && y; break;
            case GateOp::Or: wire[out] = x || y; break;
        }
        ++out;
    }
    std::vector<bool> result;
    for (auto w : net.sum_wires) result.push_back(wire[w]);
    result.push_back(wire[net.carry_out]);
    return result;
}

BigInt pow_big(unsigned base, std::uint64_t exp) {
    BigInt r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

std::uint64_t bit_length(const BigInt& v) {
    return v == 0 ? 0 : static_cast<std::uint64_t>(boost::multiprecision::msb(v)) + 1;
}

std::uint64_t parse_index(const ByteString& input) {
    const auto text = input.view();
    if (text.empty() || text.size() > 18 || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ArgumentError("expected a decimal index, got '" + std::string(text) + "'");
    }
    return std::stoull(std::string(text));
}

ByteString word_bytes(std::uint32_t v) {
    return ByteString(std::vector<std::uint8_t>{static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                                                static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)});
}

// ---------------------------------------------------------------------------
// Iterative arithmetic. Each recorded step is one application of the
// transition rule (or, for the hybrid, one cached base fact).

Trace addition_trace(const std::string& a, const std::string& b, std::uint64_t n, const ByteString& input) {
    Trace t;
    std::string written;  // least significant digit first
    int carry = 0;
    const std::size_t width = std::max(a.size(), b.size());
    auto record = [&](std::string value) {
        std::reverse(value.begin(), value.end());
        OutputRecord r{input, ByteString(value), n, t.records.size() + 1};
        t.records.push_back(std::move(r));
        t.kinds.push_back(StepKind::Advance);
        t.step_scratchpad_bits.push_back(8 * (a.size() + b.size() + value.size() + 1));
    };
    for (std::size_t i = 0; i < width; ++i) {
        const int x = i < a.size() ? a[a.size() - 1 - i] - '0' : 0;
        const int y = i < b.size() ? b[b.size() - 1 - i] - '0' : 0;
        const int s = x + y + carry;
        written.push_back(static_cast<char>('0' + s % 10));
        carry = s / 10;
        if (i + 1 == width && carry) {
            // Final carry is written by its own step.
            record(written);
            written.push_back('1');
            record(written);
            carry = 0;
        } else {
            record(written);
        }
    }
    // Trim leading zeros of the final value (only possible for "0+0"-like inputs).
    auto& last = t.records.back().output;
    last = ByteString(detail::strip_zeros(last.str()));
    return t;
}

Trace multiplication_trace(const std::string& a, const std::string& b, std::uint64_t n, const ByteString& input,
                           std::optional<std::uint64_t> cache_limit) {
    Trace t;
    std::string sum = "0";
    auto record = [&](StepKind kind, std::size_t position) {
        t.records.push_back(OutputRecord{input, ByteString(sum), n, t.records.size() + 1});
        t.kinds.push_back(kind);
        t.step_scratchpad_bits.push_back(8 * (sum.size() + a.size() + position + 2));
        if (t.records.size() > kMaxTraceSteps) throw ArgumentError("trace exceeds step limit");
    };

    if (cache_limit) {
        const BigInt limit = *cache_limit;
        if (BigInt(a) <= limit && BigInt(b) <= limit) {
            sum = BigInt(BigInt(a) * BigInt(b)).str();
            record(StepKind::Lookup, 0);
            return t;
        }
    }

    for (std::size_t j = 0; j < b.size(); ++j) {
        const int d = b[b.size() - 1 - j] - '0';
        for (std::size_t i = 0; i < a.size(); ++i) {
            const int e = a[a.size() - 1 - i] - '0';
            if (cache_limit && static_cast<std::uint64_t>(d) <= *cache_limit &&
                static_cast<std::uint64_t>(e) <= *cache_limit) {
                if (d == 0) continue;
                const auto fact = std::to_string(d * e);
                sum = detail::add_decimal(sum, detail::shift_decimal(fact, i + j));
                record(StepKind::Lookup, i + j);
                continue;
            }
            const auto addend = detail::shift_decimal(std::string(1, static_cast<char>('0' + e)), i + j);
            for (int c = 0; c < d; ++c) {
                sum = detail::add_decimal(sum, addend);
                record(StepKind::Advance, i + j);
            }
        }
    }
    if (t.records.empty()) record(StepKind::Advance, 0);
    return t;
}

std::string bits_to_string(const std::vector<bool>& lsb_first) {
    std::string s;
    for (auto it = lsb_first.rbegin(); it != lsb_first.rend(); ++it) s.push_back(*it ? '1' : '0');
    return s;
}

std::vector<bool> parse_bits(const std::string& s, std::size_t width) {
    if (s.size() > width) throw RangeExhausted("operand wider than the circuit's " + std::to_string(width) + " bits");
    std::vector<bool> bits(width, false);
    for (std::size_t i = 0; i < s.size(); ++i) bits[i] = s[s.size() - 1 - i] == '1';
    return bits;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(SystemKind kind) noexcept {
    switch (kind) {
        case SystemKind::Constant: return "Constant";
        case SystemKind::Lookup: return "Lookup";
        case SystemKind::XorGate: return "XorGate";
        case SystemKind::AdderCircuit: return "AdderCircuit";
        case SystemKind::AdditionAlg: return "AdditionAlg";
        case SystemKind::MultiplicationAlg: return "MultiplicationAlg";
        case SystemKind::Prng: return "Prng";
        case SystemKind::RandomSource: return "RandomSource";
        case SystemKind::MemoizedHybrid: return "MemoizedHybrid";
    }
    return "?";
}

SystemKind kind_from_string(std::string_view name) {
    static constexpr std::array<std::pair<std::string_view, SystemKind>, 9> kShort{{
        {"constant", SystemKind::Constant},
        {"lookup", SystemKind::Lookup},
        {"xor", SystemKind::XorGate},
        {"adder", SystemKind::AdderCircuit},
        {"addition", SystemKind::AdditionAlg},
        {"multiplication", SystemKind::MultiplicationAlg},
        {"prng", SystemKind::Prng},
        {"random", SystemKind::RandomSource},
        {"hybrid", SystemKind::MemoizedHybrid},
    }};
    for (const auto& [key, kind] : kShort) {
        if (name == key || name == to_string(kind)) return kind;
    }
    throw ArgumentError("unknown system kind: " + std::string(name));
}

ByteString EntropyCapture::read(std::size_t offset, std::size_t count) {
    std::lock_guard lock(mutex_);
    if (buffer_.size() < offset + count) {
        std::random_device device;
        while (buffer_.size() < offset + count) {
            const auto word = device();
            for (int i = 0; i < 4 && buffer_.size() < offset + count; ++i) {
                buffer_.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
            }
        }
    }
    return ByteString(buffer_.span().subspan(offset, count));
}

ByteString EntropyCapture::captured() const {
    std::lock_guard lock(mutex_);
    return buffer_;
}

ByteString Trace::context(std::size_t i) const {
    ByteString ctx;
    for (std::size_t k = 0; k + 1 < i && k < records.size(); ++k) {
        if (k > 0) ctx.push_back(kStepSeparator);
        ctx.append(records[k].output);
    }
    return ctx;
}

std::string SystemSpec::describe() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind) << "\nn=" << n;
    switch (kind) {
        case SystemKind::Constant: os << "\nvalue=" << params.constant_value; break;
        case SystemKind::Lookup: os << "\nm=" << params.m << "\nb=" << params.b; break;
        case SystemKind::XorGate: os << "\ntruth=0110"; break;
        case SystemKind::AdderCircuit: {
            const auto net = ripple_carry(n);
            os << "\nnetlist=";
            for (const auto& g : net.gates) os << static_cast<int>(g.op) << ':' << g.lhs << ',' << g.rhs << ';';
            break;
        }
        case SystemKind::MultiplicationAlg: os << "\nredundant=" << params.redundant_entries; break;
        case SystemKind::MemoizedHybrid: os << "\ncache_limit=" << params.cache_limit; break;
        case SystemKind::Prng:
            os << "\na=" << kLcgMultiplier << "\nc=" << kLcgIncrement << "\nseed=" << params.seed.value_or(0);
            break;
        case SystemKind::AdditionAlg:
        case SystemKind::RandomSource: break;
    }
    if (transition) os << "\nadvance=" << transition->advance_id << "\nhalt=" << transition->halt_id;
    os << '\n';
    return os.str();
}

SystemSpec build(SystemKind kind, const SystemParams& params) {
    SystemSpec spec;
    spec.kind = kind;
    spec.params = params;
    spec.n = params.n;
    if (params.n < 1) throw ConstructionError("n must be >= 1");

    switch (kind) {
        case SystemKind::Constant:
            if (params.constant_value.empty()) throw ConstructionError("constant value must be non-empty");
            spec.c_bits = 8 * params.constant_value.size();
            break;
        case SystemKind::Lookup:
            if (params.m == 0 || params.b == 0) throw ConstructionError("lookup requires m > 0 and b > 0");
            spec.c_bits = BigInt(params.m) * params.b;
            break;
        case SystemKind::XorGate: spec.c_bits = kGateBits; break;
        case SystemKind::AdderCircuit:
            spec.c_bits = BigInt(ripple_carry(params.n).gates.size()) * kGateBits + kAdderInterfaceBits;
            break;
        case SystemKind::AdditionAlg:
            spec.c_bits = kCarryRuleBits;
            spec.transition = TransitionSpec{kCarryRuleBits, "add.digit_carry", "add.positions_consumed"};
            break;
        case SystemKind::MultiplicationAlg:
            spec.c_bits = kMultiplicationTableBits + kCarryRuleBits + BigInt(kStoredProductBits) * params.redundant_entries;
            spec.transition = TransitionSpec{kMultiplicationTableBits + kCarryRuleBits, "mult.shifted_add",
                                             "mult.multiplier_consumed"};
            break;
        case SystemKind::MemoizedHybrid: {
            const BigInt entries = BigInt(params.cache_limit + 1) * (params.cache_limit + 1);
            spec.c_bits = kMultiplicationTableBits + kCarryRuleBits + entries * kStoredProductBits;
            spec.transition = TransitionSpec{kMultiplicationTableBits + kCarryRuleBits,
                                             "mult.cached_fact_or_shifted_add", "mult.multiplier_consumed"};
            break;
        }
        case SystemKind::Prng:
            if (!params.seed) throw ConstructionError("prng requires a seed");
            spec.c_bits = 3 * kLcgWordBits;
            spec.transition = TransitionSpec{2 * kLcgWordBits, "lcg.step", "lcg.index_reached"};
            break;
        case SystemKind::RandomSource:
            spec.c_bits = kRandomSourceBits;
            spec.entropy = std::make_shared<EntropyCapture>(params.entropy_replay.value_or(ByteString{}));
            break;
    }
    const auto description = spec.describe();
    const ByteString text(description);
    spec.c_serialized_bits = BigInt(8) * complexity::reference_compressor().compress(text.span()).size();
    return spec;
}

SystemParams lookup_covering(std::uint64_t n) {
    if (n < 1) throw ConstructionError("n must be >= 1");
    SystemParams p;
    p.n = n;
    const BigInt top = pow_big(10, n) - 1;
    const BigInt entries = pow_big(10, 2 * n);
    if (entries > BigInt(std::numeric_limits<std::uint64_t>::max())) {
        throw ConstructionError("lookup covering n=" + std::to_string(n) + " exceeds 64-bit entry count");
    }
    p.m = entries.convert_to<std::uint64_t>();
    p.b = bit_length(top * top);
    return p;
}

OutputRecord run(const SystemSpec& spec, const ByteString& input) {
    OutputRecord rec{input, {}, spec.n, 1};
    switch (spec.kind) {
        case SystemKind::Constant: rec.output = ByteString(spec.params.constant_value); return rec;
        case SystemKind::XorGate: {
            const auto text = input.view();
            if (text.size() != 2 || (text[0] != '0' && text[0] != '1') || (text[1] != '0' && text[1] != '1')) {
                throw ArgumentError("xor gate expects two bits, e.g. \"10\"");
            }
            rec.output = ByteString(text[0] != text[1] ? "1" : "0");
            return rec;
        }
        case SystemKind::AdderCircuit: {
            const auto ops = detail::parse_operands(input.view(), "01");
            if (ops.op != '+') throw ArgumentError("adder expects a+b");
            const auto net = ripple_carry(spec.n);
            rec.output = ByteString(bits_to_string(simulate(net, parse_bits(ops.left, spec.n), parse_bits(ops.right, spec.n))));
            return rec;
        }
        case SystemKind::Lookup: {
            const auto ops = detail::parse_operands(input.view(), "0123456789");
            if (ops.op != '*') throw ArgumentError("lookup expects a*b");
            const BigInt a(ops.left);
            const BigInt b(ops.right);
            const BigInt m = spec.params.m;
            BigInt width = boost::multiprecision::sqrt(m);
            if (width * width < m) ++width;
            // Entries are synthesized on access; the accounting charges m*b bits as if stored.
            if (a >= width || b >= width || a * width + b >= m) {
                throw RangeExhausted("lookup miss: " + std::string(input.view()) + " is outside the stored range");
            }
            rec.output = ByteString(BigInt(a * b).str());
            return rec;
        }
        case SystemKind::Prng: {
            const auto k = parse_index(input);
            if (k < 1) throw ArgumentError("prng index starts at 1");
            rec.output = word_bytes(lcg_jump(static_cast<std::uint32_t>(*spec.params.seed), static_cast<std::int64_t>(k)));
            rec.steps = k;
            return rec;
        }
        case SystemKind::RandomSource: {
            const auto k = parse_index(input);
            rec.output = spec.entropy->read(k * spec.n, spec.n);
            return rec;
        }
        case SystemKind::AdditionAlg:
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid: {
            auto t = trace(spec, input);
            auto last = t.records.back();
            last.steps = t.records.size();
            return last;
        }
    }
    throw Unsupported("run: unhandled kind");
}

Trace trace(const SystemSpec& spec, const ByteString& input) {
    switch (spec.kind) {
        case SystemKind::AdditionAlg: {
            const auto ops = detail::parse_operands(input.view(), "0123456789");
            if (ops.op != '+') throw ArgumentError("addition expects a+b");
            auto t = addition_trace(ops.left, ops.right, spec.n, input);
            t.scratchpad_bits = *std::max_element(t.step_scratchpad_bits.begin(), t.step_scratchpad_bits.end());
            return t;
        }
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid: {
            const auto ops = detail::parse_operands(input.view(), "0123456789");
            if (ops.op != '*') throw ArgumentError("multiplication expects a*b");
            std::optional<std::uint64_t> cache;
            if (spec.kind == SystemKind::MemoizedHybrid) cache = spec.params.cache_limit;
            auto t = multiplication_trace(ops.left, ops.right, spec.n, input, cache);
            t.scratchpad_bits = *std::max_element(t.step_scratchpad_bits.begin(), t.step_scratchpad_bits.end());
            return t;
        }
        case SystemKind::Prng: {
            const auto k = parse_index(input);
            if (k < 1 || k > kMaxTraceSteps) throw ArgumentError("prng trace length out of range");
            Trace t;
            auto state = static_cast<std::uint32_t>(*spec.params.seed);
            for (std::uint64_t i = 1; i <= k; ++i) {
                state = lcg_jump(state, 1);
                t.records.push_back(OutputRecord{input, word_bytes(state), spec.n, i});
                t.kinds.push_back(StepKind::Advance);
                t.step_scratchpad_bits.push_back(kLcgWordBits + 64);
            }
            t.scratchpad_bits = kLcgWordBits + 64;
            return t;
        }
        default: throw Unsupported("trace: " + std::string(to_string(spec.kind)) + " is not iterative");
    }
}

BigInt count_domain(const SystemSpec& spec, std::uint64_t n) {
    if (n < 1) throw ArgumentError("n must be >= 1");
    switch (spec.kind) {
        case SystemKind::AdditionAlg:
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid: return pow_big(10, 2 * n);
        case SystemKind::AdderCircuit: return pow_big(2, 2 * n);
        case SystemKind::Lookup: return spec.params.m;
        case SystemKind::XorGate: return 4;
        case SystemKind::Constant: return 1;
        case SystemKind::Prng: return n;
        case SystemKind::RandomSource: return pow_big(2, 8 * n);
    }
    return 0;
}

std::uint32_t lcg_jump(std::uint32_t state, std::int64_t steps) noexcept {
    // Compose the affine map x -> a x + c with itself by squaring.
    std::uint32_t mul = kLcgMultiplier;
    std::uint32_t add = kLcgIncrement;
    if (steps < 0) {
        // Inverse map: x -> a^-1 (x - c). a is odd so a^-1 exists mod 2^32.
        std::uint32_t inv = mul;
        for (int i = 0; i < 5; ++i) inv *= 2U - mul * inv;
        add = static_cast<std::uint32_t>(0U - inv * add);
        mul = inv;
        steps = -steps;
    }
    std::uint32_t acc_mul = 1;
    std::uint32_t acc_add = 0;
    auto k = static_cast<std::uint64_t>(steps);
    while (k > 0) {
        if (k & 1U) {
            acc_mul *= mul;
            acc_add = acc_add * mul + add;
        }
        add = add * mul + add;
        mul *= mul;
        k >>= 1;
    }
    return acc_mul * state + acc_add;
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("draw_below: empty range");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

namespace {

std::string random_digits(std::mt19937_64& rng, std::uint64_t n, std::uint64_t base) {
    std::string s;
    s.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const bool lead = i == 0 && n > 1 && base == 10;
        s.push_back(static_cast<char>('0' + (lead ? 1 + draw_below(rng, 9) : draw_below(rng, base))));
    }
    return s;
}

}  // namespace

ByteString random_input(const SystemSpec& spec, std::uint64_t n, std::mt19937_64& rng) {
    if (n < 1) throw ArgumentError("n must be >= 1");
    switch (spec.kind) {
        case SystemKind::Lookup:
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid:
            return ByteString(random_digits(rng, n, 10) + "*" + random_digits(rng, n, 10));
        case SystemKind::AdditionAlg: return ByteString(random_digits(rng, n, 10) + "+" + random_digits(rng, n, 10));
        case SystemKind::AdderCircuit: return ByteString(random_digits(rng, n, 2) + "+" + random_digits(rng, n, 2));
        case SystemKind::XorGate: return ByteString(random_digits(rng, 2, 2));
        case SystemKind::Prng: return ByteString(std::to_string(1 + draw_below(rng, n)));
        case SystemKind::Constant: return ByteString(std::to_string(draw_below(rng, 1ULL << 32)));
        // Block indices stay small: the capture buffer grows to cover the largest offset read.
        case SystemKind::RandomSource: return ByteString(std::to_string(draw_below(rng, 4096)));
    }
    throw Unsupported("random_input: unhandled kind");
}

namespace detail {

Operands parse_operands(std::string_view text, std::string_view alphabet) {
    static constexpr std::string_view kTimes = "\xC3\x97";  // U+00D7
    Operands ops;
    std::string cleaned;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text.substr(i, kTimes.size()) == kTimes) {
            cleaned.push_back('*');
            i += kTimes.size() - 1;
        } else if (text[i] == 'x' || text[i] == 'X') {
            cleaned.push_back('*');
        } else if (text[i] != ' ') {
            cleaned.push_back(text[i]);
        }
    }
    const auto pos = cleaned.find_first_of("*+");
    if (pos == std::string::npos) throw ArgumentError("expected a*b or a+b, got '" + std::string(text) + "'");
    ops.op = cleaned[pos];
    ops.left = cleaned.substr(0, pos);
    ops.right = cleaned.substr(pos + 1);
    for (auto* part : {&ops.left, &ops.right}) {
        if (part->empty() || part->find_first_not_of(alphabet) != std::string::npos) {
            throw ArgumentError("malformed operand in '" + std::string(text) + "'");
        }
        *part = strip_zeros(*part);
    }
    return ops;
}

std::string strip_zeros(std::string digits) {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string::npos) return "0";
    return digits.substr(first);
}

std::string add_decimal(std::string_view a, std::string_view b) {
    std::string out;
    int carry = 0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
        const int x = i < a.size() ? a[a.size() - 1 - i] - '0' : 0;
        const int y = i < b.size() ? b[b.size() - 1 - i] - '0' : 0;
        const int s = x + y + carry;
        out.push_back(static_cast<char>('0' + s % 10));
        carry = s / 10;
    }
    std::reverse(out.begin(), out.end());
    return strip_zeros(std::move(out));
}

std::string shift_decimal(std::string_view a, std::size_t places) {
    if (strip_zeros(std::string(a)) == "0") return "0";
    return std::string(a) + std::string(places, '0');
}

}  // namespace detail

}  // namespace idensity::systems
