#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <string>
#include <vector>

#include "json.hpp"

#include "idensity/complexity.hpp"
#include "idensity/systems.hpp"

namespace idensity::density {

using Decimal = boost::multiprecision::cpp_dec_float_100;
using Rational = boost::multiprecision::cpp_rational;

/// I = log2 N_eff / C at one size n.
struct DensityPoint {
    std::uint64_t n = 0;
    BigInt c_bits;
    double log2_n_eff = 0.0;
    double i_value = 0.0;
};

void to_json(nlohmann::json& j, const DensityPoint& p);

/// log2 of a positive big integer, correct to double precision.
double log2_big(const BigInt& v);

/// Throws ArgumentError when c_bits <= 0 or n_eff < 1.
DensityPoint intelligence_density(const BigInt& c_bits, const BigInt& n_eff, std::uint64_t n = 0);
/// Same, with the numerator already in bits (log2_n_eff >= 0).
DensityPoint density_from_log2(const BigInt& c_bits, double log2_n_eff, std::uint64_t n = 0);

struct EffectiveCount {
    std::size_t n_eff = 0;
    /// The sample in canonical order (by output bytes, then input bytes).
    std::vector<systems::OutputRecord> canonical;
    /// Indices into `canonical` of the selected mutually independent outputs.
    std::vector<std::size_t> members;
    /// Matrix over `canonical`.
    complexity::IndependenceMatrix matrix;
};

/// Size of a greedy subset whose pairs all have dependence >= theta in both
/// directions. The greedy pass runs at theta and at every stricter cut the
/// sample admits, and the largest subset wins, so the count never rises as
/// theta rises.
EffectiveCount effective_output_count(const std::vector<systems::OutputRecord>& outputs,
                                      const complexity::Interrogator& q, double theta);

/// Same selection over an already computed matrix (rows in canonical order).
std::vector<std::size_t> independent_subset(const complexity::IndependenceMatrix& m, double theta);

enum class NEffMode {
    DomainCount,  // log2 count_domain(n); the sample is still drawn and measured for audit
    Sampled,      // log2 of N_eff over the sample
    Enumerated,   // N_eff over every input in the domain (XOR gate)
};

std::string_view to_string(NEffMode mode) noexcept;
NEffMode mode_from_string(std::string_view name);

/// The mode and interrogator a reference family is scanned with by default.
NEffMode default_mode(systems::SystemKind kind) noexcept;
std::string default_interrogator(systems::SystemKind kind);

struct ScanConfig {
    systems::SystemKind kind = systems::SystemKind::MultiplicationAlg;
    systems::SystemParams params;  // n is overwritten per grid point
    std::vector<std::uint64_t> n_grid;
    std::size_t sample_size = 50;
    std::optional<double> theta;  // defaults to the interrogator's
    std::uint64_t seed = 0;
    std::optional<std::string> interrogator;  // defaults per kind
    std::optional<NEffMode> mode;             // defaults per kind
};

/// Raw per-n sample kept for audit.
struct ScanSample {
    std::uint64_t n = 0;
    std::vector<systems::OutputRecord> outputs;
    std::size_t n_eff_sampled = 0;
    BigInt domain;
};

struct ScanResult {
    std::vector<DensityPoint> points;
    std::vector<ScanSample> samples;
    std::string interrogator_id;
    double theta = 0.0;
    NEffMode mode = NEffMode::DomainCount;
};

/// The system built at size n the way a scan builds it (Lookup is sized to
/// cover every pair of n-digit operands).
systems::SystemSpec build_at(systems::SystemKind kind, const systems::SystemParams& params, std::uint64_t n);

/// Measures one built system: runs it on `inputs` and counts N_eff with q at
/// theta; the point's numerator follows `mode`.
std::pair<DensityPoint, ScanSample> measure_at(const systems::SystemSpec& spec, std::uint64_t n,
                                               const std::vector<ByteString>& inputs, const complexity::Interrogator& q,
                                               double theta, NEffMode mode);

/// Inputs a scan measures at one grid point: the whole domain when
/// enumerating, otherwise sample_size seeded draws.
std::vector<ByteString> scan_inputs(const systems::SystemSpec& spec, std::uint64_t n, NEffMode mode,
                                    std::size_t sample_size, std::mt19937_64& rng);

/// Throws ArgumentError on a bad grid or sample size; a construction failure
/// at some n is rethrown as ConstructionError naming that n.
ScanResult density_scan(const ScanConfig& config);

enum class Category { NoComputation, Memorization, ComputesWithoutKnowing, Knows };
enum class ITrend { Vanishing, Bounded, Diverging };

std::string_view to_string(Category c) noexcept;
std::string_view to_string(ITrend t) noexcept;

struct ScalingVerdict {
    Category category = Category::NoComputation;
    double c_slope = 0.0;
    double logn_slope = 0.0;
    ITrend i_trend = ITrend::Bounded;
};

void to_json(nlohmann::json& j, const ScalingVerdict& v);

/// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys);

ITrend i_trend(const std::vector<DensityPoint>& points);

/// Table-1 status from a scan. Needs at least 3 points.
ScalingVerdict classify(const std::vector<DensityPoint>& points);

struct BlockheadReport {
    BigInt entries;
    std::uint64_t response_bits = 0;
    BigInt c_bits;
    Decimal log2_n;
    bool log2_n_integral = false;  // log2_n == response_bits, so i_value is rational
    Decimal i_value;
    std::optional<Rational> i_value_exact;
    Rational atoms_ratio;  // c_bits / 10^80
};

BlockheadReport blockhead_metrics(std::uint64_t conv_len_words, std::uint64_t vocab_size, std::uint64_t bits_per_word);

/// d.ddd...e+XXX with `digits` significant digits.
std::string scientific(const Decimal& v, int digits = 6);
std::string scientific(const Rational& v, int digits = 6);

void to_json(nlohmann::json& j, const BlockheadReport& r);

}  // namespace idensity::density
