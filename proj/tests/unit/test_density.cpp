#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gen.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"

using namespace idensity;
using namespace idensity::density;
using systems::OutputRecord;
using systems::SystemKind;

namespace {

std::vector<OutputRecord> product_sample(std::uint64_t seed, std::size_t n, std::size_t count) {
    std::mt19937_64 rng(seed);
    const auto spec = systems::build(SystemKind::MultiplicationAlg, {});
    std::vector<OutputRecord> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(systems::run(spec, gen::bytes(gen::digits(rng, n) + "*" + gen::digits(rng, n))));
    }
    return out;
}

ScanResult scan(SystemKind kind, std::vector<std::uint64_t> grid, std::uint64_t seed = 7, std::size_t sample = 20) {
    ScanConfig c;
    c.kind = kind;
    c.n_grid = std::move(grid);
    c.sample_size = sample;
    c.seed = seed;
    return density_scan(c);
}

DensityPoint pt(std::uint64_t n, long long c, double logn) { return density_from_log2(BigInt(c), logn, n); }

// The documented decision table, restated independently of the library.
Category table(const ScalingVerdict& v, const std::vector<DensityPoint>& pts) {
    double mean_c = 0.0;
    double max_log = 0.0;
    for (const auto& p : pts) {
        mean_c += p.c_bits.convert_to<double>();
        max_log = std::max(max_log, p.log2_n_eff);
    }
    mean_c /= static_cast<double>(pts.size());
    if (max_log <= 1.0) return Category::NoComputation;
    if (std::abs(v.c_slope) < 0.01 * mean_c) return v.logn_slope > 0 ? Category::Knows : Category::ComputesWithoutKnowing;
    return v.i_trend == ITrend::Vanishing ? Category::Memorization : Category::ComputesWithoutKnowing;
}

}  // namespace

TEST_SUITE("intelligence_density") {
    TEST_CASE("xor gate") { CHECK(intelligence_density(4, 2).i_value == 0.25); }

    TEST_CASE("100-entry table") {
        CHECK(intelligence_density(700, 100).i_value == doctest::Approx(std::log2(100.0) / 700.0).epsilon(1e-15));
        CHECK(std::abs(intelligence_density(700, 100).i_value - 0.009492) < 1e-6);
    }

    TEST_CASE("a single output has zero density") {
        CHECK(intelligence_density(1, 1).i_value == 0.0);
        CHECK(intelligence_density(BigInt(1) << 200, 1).i_value == 0.0);
    }

    TEST_CASE("zero description is an argument error") {
        CHECK_THROWS_AS(intelligence_density(0, 2), ArgumentError);
        CHECK_THROWS_AS(intelligence_density(10, 0), ArgumentError);
    }

    TEST_CASE("property: exact and base-independent") {
        std::mt19937_64 rng(1);
        for (int t = 0; t < 500; ++t) {
            const BigInt c = 1 + systems::draw_below(rng, 1ULL << 40);
            const BigInt n = 1 + systems::draw_below(rng, 1ULL << 50);
            const auto p = intelligence_density(c, n);
            CHECK(p.i_value == p.log2_n_eff / p.c_bits.convert_to<double>());
            // nats over nat-denominated C
            const double nats = std::log(n.convert_to<double>());
            const double c_nats = c.convert_to<double>() * std::log(2.0);
            const double alt = nats / c_nats;
            CHECK(std::abs(alt - p.i_value) <= 1e-12 * std::max(p.i_value, 1e-300));
        }
    }

    TEST_CASE("log2 of huge integers") {
        CHECK(log2_big(BigInt(1) << 5000) == 5000.0);
        CHECK(log2_big(BigInt(3)) == doctest::Approx(std::log2(3.0)).epsilon(1e-15));
        CHECK_THROWS_AS(log2_big(0), ArgumentError);
    }
}

TEST_SUITE("effective_output_count") {
    TEST_CASE("fifty copies of one output") {
        const std::vector<OutputRecord> same(50, product_sample(1, 6, 1).front());
        CHECK(effective_output_count(same, complexity::CompressorInterrogator{}, 0.7).n_eff == 1);
    }

    TEST_CASE("fifty constant-system outputs on distinct inputs") {
        const auto s = systems::build(SystemKind::Constant, {});
        std::vector<OutputRecord> out;
        for (int i = 0; i < 50; ++i) out.push_back(systems::run(s, gen::bytes(std::to_string(i))));
        CHECK(effective_output_count(out, complexity::CompressorInterrogator{}, 0.7).n_eff == 1);
        CHECK(effective_output_count(out, complexity::OracleInterrogator{SystemKind::Constant}, 0.9).n_eff == 1);
    }

    TEST_CASE("fifty six-digit products at theta 0.7") {
        const auto sample = product_sample(6, 6, 50);
        const complexity::CompressorInterrogator q;
        const auto r = effective_output_count(sample, q, 0.7);
        // Every selected pair is checked directly against the estimator.
        for (std::size_t a = 0; a < r.members.size(); ++a) {
            for (std::size_t b = a + 1; b < r.members.size(); ++b) {
                const auto& x = r.canonical[r.members[a]].output;
                const auto& y = r.canonical[r.members[b]].output;
                CHECK(complexity::dependence_ratio(x, y) >= 0.7);
                CHECK(complexity::dependence_ratio(y, x) >= 0.7);
            }
        }
        // Frozen from the bundled compressor. Byte-granular ratios on ~12-byte
        // outputs put about a third of unrelated pairs under 0.7.
        CHECK(r.n_eff == 36);
        CHECK(r.n_eff <= 50);
    }

    TEST_CASE("empty sample and bad theta") {
        const complexity::CompressorInterrogator q;
        CHECK_THROWS_AS(effective_output_count({}, q, 0.7), ArgumentError);
        const auto s = product_sample(1, 3, 3);
        CHECK_THROWS_AS(effective_output_count(s, q, 0.0), ArgumentError);
        CHECK_THROWS_AS(effective_output_count(s, q, 1.5), ArgumentError);
    }

    TEST_CASE("property: N_eff never rises with theta") {
        const complexity::CompressorInterrogator q;
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            std::mt19937_64 rng(seed);
            const auto n = 1 + systems::draw_below(rng, 8);
            const auto sample = product_sample(seed, n, 24);
            const auto m = complexity::independence_matrix(sample, q);
            std::size_t prev = sample.size() + 1;
            for (double theta = 0.05; theta <= 1.0001; theta += 0.05) {
                const auto k = independent_subset(m, std::min(theta, 1.0)).size();
                CHECK(k >= 1);
                CHECK(k <= prev);
                prev = k;
            }
        }
    }

    TEST_CASE("property: order of the sample does not matter") {
        const complexity::CompressorInterrogator q;
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            auto sample = product_sample(seed, 4, 20);
            const auto base = effective_output_count(sample, q, 0.7).n_eff;
            std::mt19937_64 rng(seed);
            std::shuffle(sample.begin(), sample.end(), rng);
            CHECK(effective_output_count(sample, q, 0.7).n_eff == base);
        }
    }
}

TEST_SUITE("density_scan") {
    TEST_CASE("multiplication over 2, 4, 8") {
        const auto r = scan(SystemKind::MultiplicationAlg, {2, 4, 8});
        REQUIRE(r.points.size() == 3);
        for (const auto& p : r.points) CHECK(p.c_bits == 800);
        CHECK(r.points[0].i_value < r.points[1].i_value);
        CHECK(r.points[1].i_value < r.points[2].i_value);
    }

    TEST_CASE("covering lookup tables lose density") {
        const auto r = scan(SystemKind::Lookup, {1, 2, 3});
        CHECK(r.points[0].i_value > r.points[1].i_value);
        CHECK(r.points[1].i_value > r.points[2].i_value);
        CHECK(classify(r.points).category == Category::Memorization);
    }

    TEST_CASE("adder density stays within 20% of its mean") {
        const auto r = scan(SystemKind::AdderCircuit, {4, 8, 16});
        double mean = 0.0;
        for (const auto& p : r.points) mean += p.i_value;
        mean /= 3.0;
        for (const auto& p : r.points) CHECK(std::abs(p.i_value - mean) <= 0.2 * mean);
    }

    TEST_CASE("xor gate enumerates its domain") {
        const auto r = scan(SystemKind::XorGate, {1, 2, 3});
        CHECK(r.mode == NEffMode::Enumerated);
        for (const auto& p : r.points) CHECK(p.i_value == 0.25);
    }

    TEST_CASE("deterministic given seed, raw samples kept") {
        const auto a = scan(SystemKind::MultiplicationAlg, {2, 3, 4}, 99, 15);
        const auto b = scan(SystemKind::MultiplicationAlg, {2, 3, 4}, 99, 15);
        REQUIRE(a.samples.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a.points[i].i_value == b.points[i].i_value);
            CHECK(a.samples[i].outputs.size() == 15);
            CHECK(a.samples[i].n_eff_sampled == b.samples[i].n_eff_sampled);
            for (std::size_t k = 0; k < 15; ++k) CHECK(a.samples[i].outputs[k].input == b.samples[i].outputs[k].input);
        }
        const auto c = scan(SystemKind::MultiplicationAlg, {2, 3, 4}, 100, 15);
        CHECK(c.samples[0].outputs[0].input != a.samples[0].outputs[0].input);
    }

    TEST_CASE("bad grids and sizes") {
        CHECK_THROWS_AS(scan(SystemKind::MultiplicationAlg, {4, 2, 8}), ArgumentError);
        CHECK_THROWS_AS(scan(SystemKind::MultiplicationAlg, {2, 2, 8}), ArgumentError);
        CHECK_THROWS_AS(scan(SystemKind::MultiplicationAlg, {2, 4, 8}, 1, 9), ArgumentError);
    }

    TEST_CASE("construction failure names the offending n") {
        try {
            scan(SystemKind::Lookup, {1, 2, 40});
            FAIL("expected a construction error");
        } catch (const ConstructionError& e) {
            CHECK(std::string(e.what()).find("n=40") != std::string::npos);
        }
    }

    TEST_CASE("prng under its oracle collapses to one output") {
        ScanConfig c;
        c.kind = SystemKind::Prng;
        c.params.seed = 3;
        c.n_grid = {16, 32, 64};
        c.sample_size = 20;
        c.seed = 3;
        const auto r = density_scan(c);
        CHECK(r.interrogator_id == "oracle:Prng");
        for (const auto& p : r.points) CHECK(p.log2_n_eff == 0.0);
        CHECK(classify(r.points).category == Category::NoComputation);
    }
}

TEST_SUITE("classify") {
    TEST_CASE("multiplication, lookup and constant scans") {
        CHECK(classify(scan(SystemKind::MultiplicationAlg, {2, 4, 8}).points).category == Category::Knows);
        CHECK(classify(scan(SystemKind::Lookup, {1, 2, 3}).points).category == Category::Memorization);
        CHECK(classify(scan(SystemKind::Constant, {1, 2, 3}).points).category == Category::NoComputation);
    }

    TEST_CASE("adder and addition") {
        CHECK(classify(scan(SystemKind::AdderCircuit, {4, 8, 16}).points).category == Category::ComputesWithoutKnowing);
        CHECK(classify(scan(SystemKind::AdditionAlg, {2, 4, 8}).points).category == Category::Knows);
    }

    TEST_CASE("multiplication log2 N slope is close to 2 log2 10") {
        const auto v = classify(scan(SystemKind::MultiplicationAlg, {2, 4, 6, 8}).points);
        CHECK(std::abs(v.logn_slope - 2.0 * std::log2(10.0)) <= 0.15 * 6.64);
    }

    TEST_CASE("fewer than three points") {
        CHECK_THROWS_AS(classify({pt(1, 8, 2), pt(2, 8, 4)}), ArgumentError);
    }

    TEST_CASE("trend thresholds") {
        CHECK(i_trend({pt(1, 10, 1), pt(2, 10, 2), pt(3, 10, 3)}) == ITrend::Diverging);
        CHECK(i_trend({pt(1, 10, 3), pt(2, 20, 3), pt(3, 40, 3)}) == ITrend::Vanishing);
        CHECK(i_trend({pt(1, 10, 3), pt(2, 11, 3), pt(3, 12, 3)}) == ITrend::Bounded);
        // slope up but not doubled
        CHECK(i_trend({pt(1, 10, 2), pt(2, 10, 2.5), pt(3, 10, 3)}) == ITrend::Bounded);
    }

    TEST_CASE("property: the verdict follows the decision table") {
        std::mt19937_64 rng(42);
        for (int t = 0; t < 2000; ++t) {
            std::vector<DensityPoint> pts;
            const auto k = 3 + systems::draw_below(rng, 4);
            std::uint64_t n = 0;
            const long long c0 = 1 + static_cast<long long>(systems::draw_below(rng, 1000));
            const long long dc = static_cast<long long>(systems::draw_below(rng, 3)) * static_cast<long long>(systems::draw_below(rng, 200));
            for (std::uint64_t i = 0; i < k; ++i) {
                n += 1 + systems::draw_below(rng, 4);
                const double logn = static_cast<double>(systems::draw_below(rng, 4000)) / 100.0 *
                                    (systems::draw_below(rng, 4) == 0 ? 0.0 : 1.0);
                pts.push_back(pt(n, c0 + dc * static_cast<long long>(n), logn));
            }
            const auto v = classify(pts);
            CHECK(v.category == table(v, pts));
        }
    }
}

TEST_SUITE("blockhead") {
    TEST_CASE("a 100-word, 10,000-word-vocabulary table") {
        const auto r = blockhead_metrics(100, 10000, 13);
        CHECK(r.entries == boost::multiprecision::pow(BigInt(10), 400));
        CHECK(r.response_bits == 1300);
        CHECK(r.log2_n_integral);
        CHECK(r.log2_n == 1300);
        CHECK(r.c_bits == 1300 * boost::multiprecision::pow(BigInt(10), 400));
        REQUIRE(r.i_value_exact);
        const Rational lo(1, boost::multiprecision::pow(BigInt(10), 401));
        const Rational hi(1, boost::multiprecision::pow(BigInt(10), 400));
        CHECK(*r.i_value_exact == hi);
        CHECK(*r.i_value_exact >= lo);
        CHECK(*r.i_value_exact <= hi);
        // the 100-digit decimal agrees with the exact value
        CHECK(abs(r.i_value - Decimal("1e-400")) <= Decimal("1e-495"));
        CHECK(r.atoms_ratio >= Rational(boost::multiprecision::pow(BigInt(10), 320)));
        CHECK(r.atoms_ratio <= Rational(boost::multiprecision::pow(BigInt(10), 324)));
        CHECK(scientific(r.i_value) == "1.000000e-400");
    }

    TEST_CASE("a single-entry table") {
        const auto r = blockhead_metrics(1, 1, 1);
        CHECK(r.entries == 1);
        CHECK(r.i_value == 0);
    }

    TEST_CASE("zero parameters are rejected") {
        CHECK_THROWS_AS(blockhead_metrics(0, 10, 1), ArgumentError);
    }

    TEST_CASE("property: log2 N is the smaller of log2 entries and response bits") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 300; ++t) {
            const auto w = 1 + systems::draw_below(rng, 30);
            const auto v = 1 + systems::draw_below(rng, 5000);
            const auto b = 1 + systems::draw_below(rng, 20);
            const auto r = blockhead_metrics(w, v, b);
            const double log2_entries = static_cast<double>(w) * std::log2(static_cast<double>(v));
            const double expect = std::min(log2_entries, static_cast<double>(w * b));
            CHECK(r.log2_n.convert_to<double>() == doctest::Approx(expect).epsilon(1e-12));
            CHECK(r.c_bits == r.entries * (w * b));
            // exactness: recomputing from the fields reproduces the value
            CHECK(r.i_value == r.log2_n / Decimal(r.c_bits));
        }
    }
}
