#include "idensity/density.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <set>
#include <sstream>

#include "idensity/errors.hpp"

namespace idensity::density {

using systems::OutputRecord;
using systems::SystemKind;

void to_json(nlohmann::json& j, const DensityPoint& p) {
    j = nlohmann::json{{"n", p.n}, {"c_bits", p.c_bits.str()}, {"log2_n_eff", p.log2_n_eff}, {"i_value", p.i_value}};
}

double log2_big(const BigInt& v) {
    if (v <= 0) throw ArgumentError("log2 of a non-positive integer");
    const auto top = boost::multiprecision::msb(v);
    if (top < 64) return std::log2(static_cast<double>(v.convert_to<std::uint64_t>()));
    // Keep the leading 64 bits; the rest cannot move a double.
    const auto shift = top - 63;
    const BigInt head = v >> shift;
    return std::log2(static_cast<double>(head.convert_to<std::uint64_t>())) + static_cast<double>(shift);
}

DensityPoint density_from_log2(const BigInt& c_bits, double log2_n_eff, std::uint64_t n) {
    if (c_bits <= 0) throw ArgumentError("intelligence density needs c_bits > 0");
    if (!(log2_n_eff >= 0.0)) throw ArgumentError("log2 N_eff must be >= 0");
    DensityPoint p;
    p.n = n;
    p.c_bits = c_bits;
    p.log2_n_eff = log2_n_eff;
    p.i_value = log2_n_eff / c_bits.convert_to<double>();
    return p;
}

DensityPoint intelligence_density(const BigInt& c_bits, const BigInt& n_eff, std::uint64_t n) {
    if (n_eff < 1) throw ArgumentError("intelligence density needs n_eff >= 1");
    return density_from_log2(c_bits, n_eff == 1 ? 0.0 : log2_big(n_eff), n);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> greedy(const std::vector<double>& sym, std::size_t s, auto conflict) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < s; ++i) {
        const bool ok = std::none_of(kept.begin(), kept.end(), [&](std::size_t j) { return conflict(sym[i * s + j]); });
        if (ok) kept.push_back(i);
    }
    return kept;
}

}  // namespace

std::vector<std::size_t> independent_subset(const complexity::IndependenceMatrix& m, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in (0, 1]");
    const std::size_t s = m.sample_size;
    if (s == 0) throw ArgumentError("empty sample");
    // A pair is independent only if both directions clear the threshold.
    std::vector<double> sym(s * s);
    std::set<double> cuts;
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            sym[i * s + j] = std::min(m.dep(i, j), m.dep(j, i));
            if (i < j && sym[i * s + j] >= theta) cuts.insert(sym[i * s + j]);
        }
    }
    auto best = greedy(sym, s, [theta](double v) { return v < theta; });
    for (double cut : cuts) {
        if (best.size() == s) break;
        auto candidate = greedy(sym, s, [cut](double v) { return v <= cut; });
        if (candidate.size() > best.size()) best = std::move(candidate);
    }
    return best;
}

EffectiveCount effective_output_count(const std::vector<OutputRecord>& outputs, const complexity::Interrogator& q,
                                      double theta) {
    if (outputs.empty()) throw ArgumentError("effective_output_count: empty sample");
    if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in (0, 1]");
    EffectiveCount r;
    r.canonical = outputs;
    std::stable_sort(r.canonical.begin(), r.canonical.end(), [](const OutputRecord& a, const OutputRecord& b) {
        if (a.output != b.output) return a.output < b.output;
        if (a.input != b.input) return a.input < b.input;
        return a.steps < b.steps;
    });
    r.matrix = complexity::independence_matrix(r.canonical, q);
    r.members = independent_subset(r.matrix, theta);
    r.n_eff = r.members.size();
    return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(NEffMode mode) noexcept {
    switch (mode) {
        case NEffMode::DomainCount: return "domain";
        case NEffMode::Sampled: return "sampled";
        case NEffMode::Enumerated: return "enumerated";
    }
    return "?";
}

NEffMode mode_from_string(std::string_view name) {
    if (name == "domain") return NEffMode::DomainCount;
    if (name == "sampled") return NEffMode::Sampled;
    if (name == "enumerated") return NEffMode::Enumerated;
    throw ArgumentError("unknown N_eff mode: " + std::string(name));
}

NEffMode default_mode(SystemKind kind) noexcept {
    switch (kind) {
        case SystemKind::XorGate: return NEffMode::Enumerated;
        case SystemKind::Constant:
        case SystemKind::Prng:
        case SystemKind::RandomSource: return NEffMode::Sampled;
        default: return NEffMode::DomainCount;
    }
}

std::string default_interrogator(SystemKind kind) {
    switch (kind) {
        case SystemKind::Constant:
        case SystemKind::XorGate:
        case SystemKind::Prng: return "oracle";
        default: return "compressor";
    }
}

systems::SystemSpec build_at(SystemKind kind, const systems::SystemParams& params, std::uint64_t n) {
    systems::SystemParams p = params;
    if (kind == SystemKind::Lookup) {
        p = systems::lookup_covering(n);
        p.seed = params.seed;
    }
    p.n = n;
    return systems::build(kind, p);
}

std::vector<ByteString> scan_inputs(const systems::SystemSpec& spec, std::uint64_t n, NEffMode mode,
                                    std::size_t sample_size, std::mt19937_64& rng) {
    if (mode == NEffMode::Enumerated) {
        if (spec.kind != SystemKind::XorGate) throw ArgumentError("enumerated N_eff is only available for the XOR gate");
        return {ByteString("00"), ByteString("01"), ByteString("10"), ByteString("11")};
    }
    std::vector<ByteString> in;
    for (std::size_t k = 0; k < sample_size; ++k) in.push_back(systems::random_input(spec, n, rng));
    return in;
}

std::pair<DensityPoint, ScanSample> measure_at(const systems::SystemSpec& spec, std::uint64_t n,
                                               const std::vector<ByteString>& inputs, const complexity::Interrogator& q,
                                               double theta, NEffMode mode) {
    ScanSample sample;
    sample.n = n;
    for (const auto& in : inputs) sample.outputs.push_back(systems::run(spec, in));
    sample.domain = systems::count_domain(spec, n);
    sample.n_eff_sampled = effective_output_count(sample.outputs, q, theta).n_eff;
    const double log2n = mode == NEffMode::DomainCount
                             ? log2_big(sample.domain)
                             : (sample.n_eff_sampled <= 1 ? 0.0 : std::log2(static_cast<double>(sample.n_eff_sampled)));
    return {density_from_log2(spec.c_bits, log2n, n), std::move(sample)};
}

ScanResult density_scan(const ScanConfig& config) {
    if (config.n_grid.empty()) throw ArgumentError("density_scan: empty n grid");
    for (std::size_t i = 1; i < config.n_grid.size(); ++i) {
        if (config.n_grid[i] <= config.n_grid[i - 1]) throw ArgumentError("density_scan: n grid must be strictly increasing");
    }
    if (config.sample_size < 10) throw ArgumentError("density_scan: sample_size must be >= 10");

    ScanResult result;
    result.mode = config.mode.value_or(default_mode(config.kind));
    const auto q = complexity::make_interrogator(config.interrogator.value_or(default_interrogator(config.kind)), config.kind);
    result.interrogator_id = q->id();
    result.theta = config.theta.value_or(q->default_theta());

    systems::SystemParams params = config.params;
    if (config.kind == SystemKind::Prng && !params.seed) params.seed = config.seed;

    // Draw every input up front from the single run generator, then measure
    // the grid points concurrently.
    std::mt19937_64 rng(config.seed);
    std::vector<systems::SystemSpec> specs;
    std::vector<std::vector<ByteString>> inputs;
    for (auto n : config.n_grid) {
        try {
            specs.push_back(build_at(config.kind, params, n));
        } catch (const Error& e) {
            throw ConstructionError("n=" + std::to_string(n) + ": " + e.what());
        }
        inputs.push_back(scan_inputs(specs.back(), n, result.mode, config.sample_size, rng));
    }

    std::vector<std::future<std::pair<DensityPoint, ScanSample>>> jobs;
    for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
        jobs.push_back(std::async(std::launch::async, [&, g] {
            return measure_at(specs[g], config.n_grid[g], inputs[g], *q, result.theta, result.mode);
        }));
    }
    for (auto& job : jobs) {
        auto [point, sample] = job.get();
        result.points.push_back(std::move(point));
        result.samples.push_back(std::move(sample));
    }
    return result;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::NoComputation: return "NoComputation";
        case Category::Memorization: return "Memorization";
        case Category::ComputesWithoutKnowing: return "ComputesWithoutKnowing";
        case Category::Knows: return "Knows";
    }
    return "?";
}

std::string_view to_string(ITrend t) noexcept {
    switch (t) {
        case ITrend::Vanishing: return "Vanishing";
        case ITrend::Bounded: return "Bounded";
        case ITrend::Diverging: return "Diverging";
    }
    return "?";
}

void to_json(nlohmann::json& j, const ScalingVerdict& v) {
    j = nlohmann::json{{"category", to_string(v.category)},
                       {"c_slope", v.c_slope},
                       {"logn_slope", v.logn_slope},
                       {"i_trend", to_string(v.i_trend)}};
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ArgumentError("ls_slope: need two or more paired values");
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw ArgumentError("ls_slope: all x values equal");
    return sxy / sxx;
}

namespace {

constexpr double kTrendTolerance = 1e-6;
constexpr double kFlatFraction = 0.01;

std::vector<double> ns_of(const std::vector<DensityPoint>& points) {
    std::vector<double> xs;
    for (const auto& p : points) xs.push_back(static_cast<double>(p.n));
    return xs;
}

}  // namespace

ITrend i_trend(const std::vector<DensityPoint>& points) {
    std::vector<double> is;
    for (const auto& p : points) is.push_back(p.i_value);
    const double slope = ls_slope(ns_of(points), is);
    const double first = is.front();
    const double last = is.back();
    if (slope < -kTrendTolerance && last < first / 2.0) return ITrend::Vanishing;
    if (slope > kTrendTolerance && last > 2.0 * first) return ITrend::Diverging;
    return ITrend::Bounded;
}

ScalingVerdict classify(const std::vector<DensityPoint>& points) {
    if (points.size() < 3) throw ArgumentError("classify needs at least 3 points");
    const auto xs = ns_of(points);
    std::vector<double> cs;
    std::vector<double> ls;
    for (const auto& p : points) {
        cs.push_back(p.c_bits.convert_to<double>());
        ls.push_back(p.log2_n_eff);
    }
    ScalingVerdict v;
    v.c_slope = ls_slope(xs, cs);
    v.logn_slope = ls_slope(xs, ls);
    v.i_trend = i_trend(points);

    const double mean_c = std::accumulate(cs.begin(), cs.end(), 0.0) / static_cast<double>(cs.size());
    const double max_log = *std::max_element(ls.begin(), ls.end());
    const bool c_flat = std::abs(v.c_slope) < kFlatFraction * mean_c;

    if (max_log <= 1.0) {
        v.category = Category::NoComputation;
    } else if (c_flat) {
        v.category = v.logn_slope > 0.0 ? Category::Knows : Category::ComputesWithoutKnowing;
    } else if (v.i_trend == ITrend::Vanishing) {
        v.category = Category::Memorization;
    } else {
        v.category = Category::ComputesWithoutKnowing;
    }
    return v;
}

// ---------------------------------------------------------------------------

BlockheadReport blockhead_metrics(std::uint64_t conv_len_words, std::uint64_t vocab_size, std::uint64_t bits_per_word) {
    if (conv_len_words < 1 || vocab_size < 1 || bits_per_word < 1) {
        throw ArgumentError("blockhead_metrics: all parameters must be >= 1");
    }
    BlockheadReport r;
    r.entries = boost::multiprecision::pow(BigInt(vocab_size), static_cast<unsigned>(conv_len_words));
    r.response_bits = conv_len_words * bits_per_word;
    r.c_bits = r.entries * r.response_bits;

    // min(log2 entries, response_bits), decided exactly: 2^response_bits <= entries.
    const BigInt cap = BigInt(1) << r.response_bits;
    if (cap <= r.entries) {
        r.log2_n_integral = true;
        r.log2_n = Decimal(r.response_bits);
        r.i_value_exact = Rational(BigInt(r.response_bits), r.c_bits);
    } else {
        r.log2_n = r.entries == 1 ? Decimal(0) : Decimal(boost::multiprecision::log(Decimal(r.entries)) / boost::multiprecision::log(Decimal(2)));
        if (r.entries == 1) r.i_value_exact = Rational(0);
    }
    r.i_value = r.log2_n / Decimal(r.c_bits);
    r.atoms_ratio = Rational(r.c_bits, boost::multiprecision::pow(BigInt(10), 80));
    return r;
}

std::string scientific(const Decimal& v, int digits) {
    if (v == 0) return "0";
    return v.str(digits, std::ios_base::scientific);
}

std::string scientific(const Rational& v, int digits) {
    return scientific(Decimal(numerator(v)) / Decimal(denominator(v)), digits);
}

void to_json(nlohmann::json& j, const BlockheadReport& r) {
    auto exact = [](const Rational& q) {
        return denominator(q) == 1 ? numerator(q).str() : numerator(q).str() + "/" + denominator(q).str();
    };
    j = nlohmann::json{
        {"entries", r.entries.str()},
        {"entries_sci", scientific(Decimal(r.entries))},
        {"response_bits", r.response_bits},
        {"c_bits", r.c_bits.str()},
        {"c_bits_sci", scientific(Decimal(r.c_bits))},
        {"log2_n", r.log2_n_integral ? std::to_string(r.response_bits) : r.log2_n.str(30)},
        {"i_value_sci", scientific(r.i_value)},
        {"atoms_ratio", exact(r.atoms_ratio)},
        {"atoms_ratio_sci", scientific(r.atoms_ratio)},
    };
    if (r.i_value_exact) j["i_value"] = exact(*r.i_value_exact);
}

}  // namespace idensity::density
