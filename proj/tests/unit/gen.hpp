#pragma once
// Hand-rolled generators for the property tests. Every generator takes the
// engine explicitly so a failing case can be replayed from its seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "idensity/bytes.hpp"
#include "idensity/systems.hpp"

namespace gen {

inline idensity::ByteString random_bytes(std::mt19937_64& rng, std::size_t len) {
    std::vector<std::uint8_t> v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 0xff);
    return idensity::ByteString(std::move(v));
}

/// Bytes drawn from a small alphabet, so there is structure to find.
inline idensity::ByteString skewed_bytes(std::mt19937_64& rng, std::size_t len, unsigned alphabet) {
    std::vector<std::uint8_t> v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>('a' + idensity::systems::draw_below(rng, alphabet));
    return idensity::ByteString(std::move(v));
}

/// Any of the shapes above, including repeats and the empty string.
inline idensity::ByteString any_bytes(std::mt19937_64& rng, std::size_t max_len) {
    const auto len = idensity::systems::draw_below(rng, max_len + 1);
    switch (rng() % 4) {
        case 0: return random_bytes(rng, len);
        case 1: return skewed_bytes(rng, len, 1 + static_cast<unsigned>(rng() % 6));
        case 2: return idensity::ByteString(std::string(len, static_cast<char>(rng() & 0xff)));
        default: {
            auto unit = random_bytes(rng, 1 + rng() % 16);
            idensity::ByteString out;
            while (out.size() < len) out.append(unit);
            return out;
        }
    }
}

inline std::string digits(std::mt19937_64& rng, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        const auto lo = (i == 0 && n > 1) ? 1U : 0U;
        s.push_back(static_cast<char>('0' + lo + idensity::systems::draw_below(rng, 10 - lo)));
    }
    return s;
}

inline idensity::ByteString bytes(std::string_view s) { return idensity::ByteString(s); }

/// Decimal product computed independently of the library (schoolbook on digit vectors).
inline std::string product(const std::string& a, const std::string& b) {
    std::vector<int> acc(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j + 1] += (a[i] - '0') * (b[j] - '0');
    for (std::size_t k = acc.size() - 1; k > 0; --k) {
        acc[k - 1] += acc[k] / 10;
        acc[k] %= 10;
    }
    std::string out;
    for (int d : acc) {
        if (out.empty() && d == 0) continue;
        out.push_back(static_cast<char>('0' + d));
    }
    return out.empty() ? "0" : out;
}

inline std::string sum(const std::string& a, const std::string& b) {
    std::string out;
    int carry = 0;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()) || carry; ++k) {
        int d = carry;
        if (k < a.size()) d += a[a.size() - 1 - k] - '0';
        if (k < b.size()) d += b[b.size() - 1 - k] - '0';
        out.insert(out.begin(), static_cast<char>('0' + d % 10));
        carry = d / 10;
    }
    const auto nz = out.find_first_not_of('0');
    return nz == std::string::npos ? "0" : out.substr(nz);
}

}  // namespace gen
