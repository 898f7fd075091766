// Block-sorting compressor: Burrows-Wheeler transform, move-to-front,
// bijective zero-run coding, and a binary arithmetic coder with small
// adaptive context models. Single block, integer arithmetic only, so the
// output is identical on every platform.
//
// Container: varint(length) [varint(primary) coded-bytes]

#include "bwt_compressor.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "idensity/errors.hpp"

namespace idensity::complexity {

namespace {

// ---------------------------------------------------------------------------
// Suffix sorting by prefix doubling. A suffix that is a prefix of another
// sorts first, which is the implicit-sentinel order the transform needs.

std::vector<std::int32_t> suffix_array(std::span<const std::uint8_t> s) {
    const auto n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> sa(static_cast<std::size_t>(n));
    std::vector<std::int32_t> rank(static_cast<std::size_t>(n));
    std::vector<std::int32_t> next(static_cast<std::size_t>(n));
    std::iota(sa.begin(), sa.end(), 0);
    for (std::int32_t i = 0; i < n; ++i) rank[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
    if (n <= 1) return sa;

    for (std::int32_t k = 1;; k <<= 1) {
        auto key = [&](std::int32_t i) {
            const std::int32_t second = i + k < n ? rank[static_cast<std::size_t>(i + k)] : -1;
            return std::pair{rank[static_cast<std::size_t>(i)], second};
        };
        std::sort(sa.begin(), sa.end(), [&](std::int32_t a, std::int32_t b) { return key(a) < key(b); });
        next[static_cast<std::size_t>(sa[0])] = 0;
        for (std::int32_t i = 1; i < n; ++i) {
            const auto prev = sa[static_cast<std::size_t>(i - 1)];
            const auto cur = sa[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(cur)] = next[static_cast<std::size_t>(prev)] + (key(prev) < key(cur) ? 1 : 0);
        }
        rank.swap(next);
        if (rank[static_cast<std::size_t>(sa[static_cast<std::size_t>(n - 1)])] == n - 1) break;
    }
    return sa;
}

struct Transformed {
    std::vector<std::uint8_t> last;  // last column without the sentinel
    std::uint32_t primary = 0;       // row of the sentinel in the full column
};

Transformed bwt_forward(std::span<const std::uint8_t> s) {
    const auto sa = suffix_array(s);
    Transformed t;
    t.last.reserve(s.size());
    t.last.push_back(s.back());  // row 0 is the empty suffix
    for (std::size_t k = 0; k < sa.size(); ++k) {
        if (sa[k] == 0) {
            t.primary = static_cast<std::uint32_t>(k + 1);
        } else {
            t.last.push_back(s[static_cast<std::size_t>(sa[k] - 1)]);
        }
    }
    return t;
}

std::vector<std::uint8_t> bwt_inverse(const std::vector<std::uint8_t>& last, std::uint32_t primary) {
    const std::size_t n = last.size();
    if (primary == 0 || primary > n) throw Error("corrupt primary index");
    // Full column: sentinel (-1) at `primary`.
    std::vector<std::int32_t> full(n + 1);
    for (std::size_t i = 0, j = 0; i <= n; ++i) full[i] = (i == primary) ? -1 : last[j++];

    std::array<std::size_t, 256> count{};
    for (auto c : last) ++count[c];
    std::array<std::size_t, 256> first{};
    std::size_t running = 1;  // row 0 holds the sentinel suffix
    for (std::size_t c = 0; c < 256; ++c) {
        first[c] = running;
        running += count[c];
    }
    std::vector<std::size_t> lf(n + 1, 0);
    std::array<std::size_t, 256> seen{};
    for (std::size_t i = 0; i <= n; ++i) {
        if (full[i] < 0) continue;
        const auto c = static_cast<std::size_t>(full[i]);
        lf[i] = first[c] + seen[c]++;
    }
    std::vector<std::uint8_t> out(n);
    std::size_t row = 0;
    for (std::size_t k = n; k-- > 0;) {
        if (full[row] < 0) throw Error("corrupt transform");
        out[k] = static_cast<std::uint8_t>(full[row]);
        row = lf[row];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Zero-run coding over move-to-front ranks. The list starts empty and a byte
// enters it at the front the first time it occurs. Symbols: 0 = RUNA,
// 1 = RUNB, rank r in 1..255 -> r + 1, first occurrence of byte c -> kNovel + c.
// Run lengths are written in bijective base 2, least significant digit first.

constexpr std::uint16_t kNovel = 0x200;

class MoveToFront {
public:
    // Returns the rank of c, or -1 if c has not been seen.
    int find(std::uint8_t c) const noexcept {
        for (std::size_t r = 0; r < size_; ++r) {
            if (order_[r] == c) return static_cast<int>(r);
        }
        return -1;
    }

    std::uint8_t at(std::size_t r) const noexcept { return order_[r]; }
    std::size_t size() const noexcept { return size_; }

    void to_front(std::size_t r) noexcept {
        const auto c = order_[r];
        std::move_backward(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(r),
                           order_.begin() + static_cast<std::ptrdiff_t>(r) + 1);
        order_[0] = c;
    }

    void insert(std::uint8_t c) noexcept {
        order_[size_++] = c;
        to_front(size_ - 1);
    }

private:
    std::array<std::uint8_t, 256> order_{};
    std::size_t size_ = 0;
};

std::vector<std::uint16_t> mtf_rle(const std::vector<std::uint8_t>& in) {
    MoveToFront order;
    std::vector<std::uint16_t> out;
    out.reserve(in.size());
    std::size_t zeros = 0;
    auto flush_run = [&] {
        while (zeros > 0) {
            if (zeros & 1) {
                out.push_back(0);
                zeros = (zeros - 1) / 2;
            } else {
                out.push_back(1);
                zeros = (zeros - 2) / 2;
            }
        }
    };
    for (auto c : in) {
        const int r = order.find(c);
        if (r == 0) {
            ++zeros;
            continue;
        }
        flush_run();
        if (r < 0) {
            order.insert(c);
            out.push_back(static_cast<std::uint16_t>(kNovel + c));
        } else {
            order.to_front(static_cast<std::size_t>(r));
            out.push_back(static_cast<std::uint16_t>(r + 1));
        }
    }
    flush_run();
    return out;
}

// ---------------------------------------------------------------------------
// Binary arithmetic coding (carryless 32-bit range, 12-bit probabilities).

class AdaptiveBit {
public:
    // Probability that the next bit is 1, 16-bit fixed point.
    std::uint32_t p() const noexcept { return p_; }

    void update(int bit) noexcept {
        const std::int32_t target = bit ? 65535 : 0;
        const std::int32_t delta = target - static_cast<std::int32_t>(p_);
        p_ = static_cast<std::uint32_t>(static_cast<std::int32_t>(p_) + delta * kRate[n_] / 65536);
        if (n_ < kLimit) ++n_;
    }

private:
    static constexpr std::size_t kLimit = 30;
    // 65536 / (n + 1.6): fast initial adaptation approaching a 1/32 rate.
    static constexpr auto kRate = [] {
        std::array<std::int32_t, kLimit + 1> r{};
        for (std::size_t n = 0; n <= kLimit; ++n) r[n] = static_cast<std::int32_t>(655360 / (10 * n + 16));
        return r;
    }();

    std::uint32_t p_ = 32768;
    std::size_t n_ = 0;
};

class ArithmeticEncoder {
public:
    explicit ArithmeticEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

    void encode(int bit, AdaptiveBit& model) {
        const std::uint32_t mid = split(model.p());
        if (bit) {
            x2_ = mid;
        } else {
            x1_ = mid + 1;
        }
        model.update(bit);
        while (((x1_ ^ x2_) & 0xff000000U) == 0) {
            out_.push_back(static_cast<std::uint8_t>(x2_ >> 24));
            x1_ <<= 8;
            x2_ = (x2_ << 8) | 0xffU;
        }
    }

    // Reading 0xff past the end keeps the decoder inside the final interval,
    // so one byte is enough.
    void flush() { out_.push_back(static_cast<std::uint8_t>(x1_ >> 24)); }

private:
    std::uint32_t split(std::uint32_t p16) const noexcept {
        const std::uint32_t p12 = std::clamp<std::uint32_t>(p16 >> 4, 1, 4095);
        return x1_ + ((x2_ - x1_) >> 12) * p12;
    }

    std::vector<std::uint8_t>& out_;
    std::uint32_t x1_ = 0;
    std::uint32_t x2_ = 0xffffffffU;
};

class ArithmeticDecoder {
public:
    explicit ArithmeticDecoder(std::span<const std::uint8_t> in) : in_(in) {
        for (int i = 0; i < 4; ++i) x_ = (x_ << 8) | next_byte();
    }

    int decode(AdaptiveBit& model) {
        const std::uint32_t p12 = std::clamp<std::uint32_t>(model.p() >> 4, 1, 4095);
        const std::uint32_t mid = x1_ + ((x2_ - x1_) >> 12) * p12;
        const int bit = x_ <= mid ? 1 : 0;
        if (bit) {
            x2_ = mid;
        } else {
            x1_ = mid + 1;
        }
        model.update(bit);
        while (((x1_ ^ x2_) & 0xff000000U) == 0) {
            x1_ <<= 8;
            x2_ = (x2_ << 8) | 0xffU;
            x_ = (x_ << 8) | next_byte();
        }
        return bit;
    }

private:
    std::uint32_t next_byte() { return pos_ < in_.size() ? in_[pos_++] : 0xffU; }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    std::uint32_t x1_ = 0;
    std::uint32_t x2_ = 0xffffffffU;
    std::uint32_t x_ = 0;
};

// ---------------------------------------------------------------------------
// Symbol model. Context = classes of the two previous symbols
// (start / run digit / rank 1 / rank >= 2 or first occurrence).

int symbol_class(std::uint16_t sym) {
    if (sym < 2) return 1;
    return sym == 2 ? 2 : 3;
}

struct SymbolModel {
    std::array<AdaptiveBit, 16> is_run{};
    std::array<AdaptiveBit, 16> is_novel{};
    std::array<std::array<AdaptiveBit, 2>, 4> run_digit{};
    std::array<std::array<AdaptiveBit, 8>, 16> bucket{};
    std::array<std::array<AdaptiveBit, 128>, 8> low_bits{};
    std::array<AdaptiveBit, 256> novel_byte{};
    std::size_t seen = 0;
    int prev = 0;
    int prev2 = 0;
    int run_pos = 0;

    int context() const noexcept { return prev * 4 + prev2; }

    void advance(std::uint16_t sym) noexcept {
        run_pos = sym < 2 ? run_pos + 1 : 0;
        prev2 = prev;
        prev = symbol_class(sym);
        if (sym >= kNovel) ++seen;
    }
};

int bucket_of(unsigned rank) {
    int b = 0;
    while ((rank >> (b + 1)) != 0) ++b;
    return b;
}

// Bits that are implied by the number of distinct bytes seen so far are not
// coded: nothing can repeat before the first byte, and nothing is new once
// all 256 have appeared.
template <class Coder>
void code_symbol(Coder&& bit, SymbolModel& m, std::uint16_t& sym) {
    const auto ctx = static_cast<std::size_t>(m.context());
    const bool run = m.seen > 0 && bit(sym < 2, m.is_run[ctx]) != 0;
    if (run) {
        auto& model = m.run_digit[static_cast<std::size_t>(std::min(m.run_pos, 3))][m.prev == 1 ? 1 : 0];
        sym = static_cast<std::uint16_t>(bit(sym == 1, model));
    } else {
        bool novel = m.seen <= 1;
        if (!novel && m.seen < 256) novel = bit(sym >= kNovel, m.is_novel[ctx]) != 0;
        if (novel) {
            std::size_t node = 1;
            for (int k = 7; k >= 0; --k) {
                const int y = bit(((sym >> k) & 1U) != 0, m.novel_byte[node]);
                node = node * 2 + static_cast<std::size_t>(y);
            }
            sym = static_cast<std::uint16_t>(kNovel + (node - 256));
        } else {
            const unsigned rank = sym - 1U;
            const int target = bucket_of(rank);
            int b = 0;
            while (b < 7 && bit(b < target, m.bucket[ctx][static_cast<std::size_t>(b)])) ++b;
            unsigned value = 1;
            std::size_t node = 1;
            for (int k = b - 1; k >= 0; --k) {
                const int y = bit(((rank >> k) & 1U) != 0, m.low_bits[static_cast<std::size_t>(b)][node]);
                value = value << 1 | static_cast<unsigned>(y);
                node = node * 2 + static_cast<std::size_t>(y);
            }
            sym = static_cast<std::uint16_t>(value + 1);
        }
    }
    m.advance(sym);
}

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos) {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) throw Error("truncated header");
        const auto b = in[pos++];
        v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
        if ((b & 0x80) == 0) return v;
    }
    throw Error("malformed varint");
}

}  // namespace

std::vector<std::uint8_t> BwtCompressor::compress(std::span<const std::uint8_t> input) const {
    std::vector<std::uint8_t> out;
    put_varint(out, input.size());
    if (input.empty()) return out;
    if (input.size() > kMaxBlock) throw EstimatorError(std::string(id()), "input exceeds block limit");

    const auto t = bwt_forward(input);
    put_varint(out, t.primary);
    const auto symbols = mtf_rle(t.last);

    ArithmeticEncoder enc(out);
    SymbolModel model;
    auto bit = [&enc](bool y, AdaptiveBit& p) {
        enc.encode(y ? 1 : 0, p);
        return y ? 1 : 0;
    };
    for (auto sym : symbols) code_symbol(bit, model, sym);
    enc.flush();
    return out;
}

std::vector<std::uint8_t> BwtCompressor::decompress(std::span<const std::uint8_t> packed) const {
    try {
        std::size_t pos = 0;
        const auto n = get_varint(packed, pos);
        if (n == 0) return {};
        if (n > kMaxBlock) throw Error("declared length exceeds block limit");
        const auto primary = get_varint(packed, pos);

        ArithmeticDecoder dec(packed.subspan(pos));
        SymbolModel model;
        auto bit = [&dec](bool, AdaptiveBit& p) { return dec.decode(p); };

        MoveToFront order;
        std::vector<std::uint8_t> last;
        last.reserve(n);
        std::uint64_t run = 0;
        std::uint64_t run_weight = 1;
        auto emit_run = [&] {
            if (run > n - last.size()) throw Error("run overflows block");
            last.insert(last.end(), run, order.at(0));
            run = 0;
            run_weight = 1;
        };
        while (last.size() + run < n) {
            std::uint16_t sym = 0;
            code_symbol(bit, model, sym);
            if (sym < 2) {
                run += run_weight * (sym + 1U);
                run_weight <<= 1;
                continue;
            }
            emit_run();
            if (sym >= kNovel) {
                const auto c = static_cast<std::uint8_t>(sym - kNovel);
                if (order.find(c) >= 0) throw Error("repeated first occurrence");
                order.insert(c);
                last.push_back(c);
                continue;
            }
            const std::size_t r = sym - 1U;
            if (r >= order.size()) throw Error("rank out of range");
            last.push_back(order.at(r));
            order.to_front(r);
        }
        emit_run();
        return bwt_inverse(last, static_cast<std::uint32_t>(primary));
    } catch (const EstimatorError&) {
        throw;
    } catch (const Error& e) {
        throw EstimatorError(std::string(id()), e.what());
    }
}

}  // namespace idensity::complexity
