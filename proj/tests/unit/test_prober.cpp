#include "doctest.h"

#include <random>

#include "gen.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"
#include "idensity/prober.hpp"

using namespace idensity;
using namespace idensity::prober;
using systems::SystemKind;
using systems::SystemParams;

namespace {

systems::SystemSpec lookup_99() {
    SystemParams p;
    p.m = 10000;
    p.b = 14;
    return systems::build(SystemKind::Lookup, p);
}

ProbeReport probe(const systems::SystemSpec& s, std::uint64_t n, std::uint64_t seed = 1) {
    return probe_knowing(s, n, reference_rule(s.kind), seed);
}

}  // namespace

TEST_SUITE("probe_knowing") {
    TEST_CASE("multiplication at n=8 with its own rule") {
        const auto r = probe(systems::build(SystemKind::MultiplicationAlg, {}), 8);
        CHECK(r.knowing);
        CHECK(r.r_failures.empty());
        CHECK(r.h_verdict == HVerdict::FiredCorrectly);
        CHECK(r.steps_checked > 8);
        CHECK(r.evidence.size() == r.steps_checked);
    }

    TEST_CASE("a 99 x 99 table refuses a 3-digit problem at step 1") {
        const auto r = probe(lookup_99(), 3);
        CHECK_FALSE(r.knowing);
        CHECK(r.r_failures == std::vector<std::size_t>{1});
        CHECK(r.steps_checked == 1);
        CHECK(r.evidence.size() == 1);
        CHECK_FALSE(r.refusal.empty());
    }

    TEST_CASE("hybrid with a 9 x 9 cache at n=6") {
        const auto r = probe(systems::build(SystemKind::MemoizedHybrid, {}), 6);
        CHECK(r.knowing);
    }

    TEST_CASE("property: hybrid replay on 100 seeds") {
        const auto hybrid = systems::build(SystemKind::MemoizedHybrid, {});
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto r = probe(hybrid, 1 + seed % 7, seed);
            REQUIRE_MESSAGE(r.knowing, "seed " << seed);
        }
    }

    TEST_CASE("property: reports are reproducible from the seed") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto s = systems::build(SystemKind::MultiplicationAlg, {});
            nlohmann::json a = probe(s, 5, seed);
            nlohmann::json b = probe(s, 5, seed);
            CHECK(a.dump() == b.dump());
        }
    }

    TEST_CASE("a rule from another domain is refused at step 1; an unknown rule is unsupported") {
        const auto s = systems::build(SystemKind::MultiplicationAlg, {});
        auto rule = reference_rule(SystemKind::AdditionAlg);
        const auto r = probe_knowing(s, 4, rule, 1);  // a+b inputs, which the system rejects
        CHECK_FALSE(r.knowing);
        CHECK(r.r_failures == std::vector<std::size_t>{1});
        rule = reference_rule(SystemKind::MultiplicationAlg);
        rule.advance_id = "no.such.rule";
        CHECK_THROWS_AS(probe_knowing(s, 4, rule, 1), Unsupported);
    }

    TEST_CASE("json keys") {
        nlohmann::json j = probe(lookup_99(), 3);
        for (const char* k : {"n", "steps_checked", "r_failures", "h_verdict", "knowing"}) CHECK(j.contains(k));
        CHECK(j["h_verdict"] == "Underran");
    }

    TEST_CASE("one probe past a covering table's range flips the verdict") {
        for (std::uint64_t k = 1; k <= 2; ++k) {
            const auto table = systems::build(SystemKind::Lookup, systems::lookup_covering(k));
            CHECK(probe(table, k).knowing);
            CHECK_FALSE(probe(table, k + 1).knowing);
        }
    }

    TEST_CASE("probe soundness: agrees with the classifier on every probeable reference family") {
        const std::vector<std::uint64_t> grid{2, 4, 8};
        for (auto kind : {SystemKind::Constant, SystemKind::Lookup, SystemKind::XorGate, SystemKind::AdderCircuit,
                          SystemKind::AdditionAlg, SystemKind::MultiplicationAlg, SystemKind::MemoizedHybrid}) {
            density::ScanConfig c;
            c.kind = kind;
            c.n_grid = kind == SystemKind::Lookup ? std::vector<std::uint64_t>{1, 2, 3} : grid;
            c.sample_size = 12;
            c.seed = 4;
            const bool knows = density::classify(density::density_scan(c).points).category == density::Category::Knows;
            // probe at the top of the grid, on the system built for the bottom of it
            const auto system = density::build_at(kind, {}, c.n_grid.front());
            CHECK_MESSAGE(probe(system, c.n_grid.back()).knowing == knows, systems::to_string(kind));
        }
    }
}

TEST_SUITE("iteration_lemma_check") {
    TEST_CASE("multiplication over 2..8") {
        const complexity::CompressorInterrogator q;
        const auto r = iteration_lemma_check(SystemKind::MultiplicationAlg, {}, {2, 4, 6, 8}, 30, q, 11);
        CHECK(r.chain_ok);
        CHECK(r.cross_ok);
        CHECK(r.divergence_ok);
        REQUIRE(r.points.size() == 4);
        const double ratio = r.points[3].mean_cross_bits / r.points[1].mean_cross_bits;
        CHECK(ratio >= 2.0 * 0.7);
        CHECK(r.chain_fraction >= kChainQuorum);
    }

    TEST_CASE("prng chain under its oracle has no cross-input growth") {
        SystemParams p;
        p.seed = 9;
        const complexity::OracleInterrogator q(SystemKind::Prng);
        const auto r = iteration_lemma_check(SystemKind::Prng, p, {16, 32, 64, 128}, 20, q, 2);
        CHECK_FALSE(r.cross_ok);
    }

    TEST_CASE("constant system does not diverge") {
        const complexity::CompressorInterrogator q;
        const auto r = iteration_lemma_check(SystemKind::Constant, {}, {2, 4, 8}, 20, q, 3);
        CHECK_FALSE(r.divergence_ok);
        for (const auto& p : r.points) CHECK(p.n_eff == 1);
    }

    TEST_CASE("preconditions") {
        const complexity::CompressorInterrogator q;
        CHECK_THROWS_AS(iteration_lemma_check(SystemKind::XorGate, {}, {1, 2}, 20, q, 1), Unsupported);
        CHECK_THROWS_AS(iteration_lemma_check(SystemKind::MultiplicationAlg, {}, {2, 4}, 19, q, 1), ArgumentError);
        CHECK_THROWS_AS(iteration_lemma_check(SystemKind::MultiplicationAlg, {}, {4, 2}, 20, q, 1), ArgumentError);
    }
}

TEST_SUITE("straightline_bound_check") {
    TEST_CASE("32-bit mapper with 5 outputs") {
        std::vector<ByteString> outs;
        for (int i = 0; i < 5; ++i) outs.push_back(gen::bytes(std::to_string(i)));
        outs.push_back(gen::bytes("0"));  // duplicates count once
        const auto v = straightline_bound_check(32, outs);
        CHECK(v.pass);
        CHECK(v.distinct_outputs == 5);
    }

    TEST_CASE("2^70 outputs from 32 declared bits") {
        CHECK_FALSE(straightline_bound_check(32, BigInt(1) << 70).pass);
    }

    TEST_CASE("xor gate") {
        CHECK(straightline_bound_check(4, {gen::bytes("0"), gen::bytes("1")}).pass);
    }

    TEST_CASE("boundary is 2^(2 x bits)") {
        CHECK(straightline_bound_check(32, BigInt(1) << 64).pass);
        CHECK_FALSE(straightline_bound_check(32, (BigInt(1) << 64) + 1).pass);
        CHECK(straightline_bound_check(32, 1).bound_log2 == 64);
    }
}
