// One line per acceptance criterion: PASS/FAIL, what was measured, and how long it took.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <unistd.h>

#include "idensity/cli.hpp"
#include "idensity/contextuality.hpp"
#include "idensity/density.hpp"
#include "idensity/prober.hpp"
#include "json.hpp"

using namespace idensity;
using systems::SystemKind;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> body;
};

std::string str(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::pair<int, std::string> cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

density::ScanResult scan(SystemKind kind, std::vector<std::uint64_t> grid, std::size_t sample, std::uint64_t seed) {
    density::ScanConfig c;
    c.kind = kind;
    c.n_grid = std::move(grid);
    c.sample_size = sample;
    c.seed = seed;
    if (kind == SystemKind::Prng) c.params.seed = seed;
    return density::density_scan(c);
}

Outcome xor_gate() {
    const auto [code, out] = cli({"measure", "--kind", "xor"});
    const bool ok = code == 0 && out.find("\nI = 0.25\n") != std::string::npos;
    return {ok, str("exit %d, printed I = 0.25: %s", code, ok ? "yes" : "no")};
}

Outcome lookup_densities() {
    auto i_of = [](std::uint64_t m) {
        systems::SystemParams p;
        p.m = m;
        p.b = 7;
        const auto s = systems::build(SystemKind::Lookup, p);
        return density::intelligence_density(s.c_bits, systems::count_domain(s, 1)).i_value;
    };
    const double small = i_of(100);
    const double large = i_of(10000);
    const bool ok = std::abs(small - 0.009492) <= 1e-6 && std::abs(large - 1.898e-4) <= 1e-7;
    return {ok, str("I(100) = %.7f, I(10000) = %.4e", small, large)};
}

Outcome multiplication_scaling() {
    const auto r = scan(SystemKind::MultiplicationAlg, {2, 4, 6, 8}, 50, 21);
    bool c_const = true;
    for (const auto& p : r.points) c_const = c_const && p.c_bits == 800;
    const auto v = density::classify(r.points);
    const double ratio = r.points.back().i_value / r.points.front().i_value;
    const bool slope_ok = std::abs(v.logn_slope - 6.64) <= 0.15 * 6.64;
    const bool ratio_ok = std::abs(ratio - 4.0) <= 0.4;
    const bool ok = c_const && slope_ok && ratio_ok && v.category == density::Category::Knows;
    return {ok, str("C const 800: %s, log2N slope %.3f, I(8)/I(2) %.3f, %s", c_const ? "yes" : "no", v.logn_slope, ratio,
                    std::string(density::to_string(v.category)).c_str())};
}

Outcome table_one() {
    using density::Category;
    struct Row {
        SystemKind kind;
        std::vector<std::uint64_t> grid;
        Category want;
    };
    const std::vector<Row> rows{
        {SystemKind::Constant, {1, 2, 3}, Category::NoComputation},
        {SystemKind::Prng, {16, 32, 64}, Category::NoComputation},
        {SystemKind::Lookup, {1, 2, 3}, Category::Memorization},
        {SystemKind::AdderCircuit, {4, 8, 16}, Category::ComputesWithoutKnowing},
        {SystemKind::AdditionAlg, {2, 4, 8}, Category::Knows},
        {SystemKind::MultiplicationAlg, {2, 4, 8}, Category::Knows},
    };
    int matched = 0;
    std::string got;
    for (const auto& row : rows) {
        const auto c = density::classify(scan(row.kind, row.grid, 20, 7).points).category;
        matched += c == row.want;
        got += std::string(got.empty() ? "" : ", ") + std::string(systems::to_string(row.kind)) + "=" +
               std::string(density::to_string(c));
    }
    return {matched == 6, str("%d/6 (%s)", matched, got.c_str())};
}

Outcome blockhead() {
    const auto r = density::blockhead_metrics(100, 10000, 13);
    const bool entries = r.entries == pow(BigInt(10), 400);
    const bool log2n = r.log2_n == 1300;
    const density::Rational i = r.i_value_exact.value_or(density::Rational(0));
    const density::Rational lo = density::Rational(1) / pow(BigInt(10), 401);
    const density::Rational hi = density::Rational(1) / pow(BigInt(10), 400);
    const bool i_ok = r.i_value_exact && i >= lo && i <= hi;
    const bool atoms = r.atoms_ratio >= density::Rational(pow(BigInt(10), 320)) &&
                       r.atoms_ratio <= density::Rational(pow(BigInt(10), 324));
    return {entries && log2n && i_ok && atoms,
            str("entries = 10^400: %s, log2 N = 1300: %s, I = %s, atoms ratio = %s", entries ? "yes" : "no",
                log2n ? "yes" : "no", density::scientific(i).c_str(), density::scientific(r.atoms_ratio).c_str())};
}

Outcome iteration_lemma() {
    const complexity::CompressorInterrogator q;
    const auto r = prober::iteration_lemma_check(SystemKind::MultiplicationAlg, {}, {2, 4, 6, 8}, 30, q, 11);
    const double ratio = r.points[3].mean_cross_bits / r.points[1].mean_cross_bits;
    return {ratio >= 1.5 && r.chain_fraction >= prober::kChainQuorum,
            str("cross(8)/cross(4) = %.3f, chain within f_bits + %.0f: %.1f%%", ratio, r.chain_slack_bits,
                100.0 * r.chain_fraction)};
}

Outcome monotonicity() {
    std::mt19937_64 rng(31);
    int passed = 0;
    for (int t = 0; t < 50; ++t) {
        const auto p = contextuality::contextuality_profile(contextuality::multiplication_trace(rng, 20));
        passed += contextuality::check_monotone(p, 0.2).pass;
    }
    return {passed >= 45, str("%d/50 traces pass", passed)};
}

Outcome domain_switch() {
    // a hit is one detection within a step of the known switch point
    std::mt19937_64 rng(41);
    int hits = 0;
    int false_pos = 0;
    for (int t = 0; t < 100; ++t) {
        const auto head = contextuality::multiplication_trace(rng, 8 + systems::draw_below(rng, 18));
        const auto tail = t % 2 ? contextuality::text_trace(rng, 20) : contextuality::random_block_trace(rng, 20, 48, 64);
        const std::size_t at = head.size() + 1;
        bool hit = false;
        bool stray = false;
        for (auto i : contextuality::detect_domain_switch(contextuality::concatenate(head, tail))) {
            if (i + 1 >= at && i <= at + 1 && !hit) {
                hit = true;
            } else {
                stray = true;
            }
        }
        hits += hit;
        false_pos += stray;
    }
    const double recall = hits / 100.0;
    const double fp = false_pos / 100.0;
    return {recall >= 0.9 && fp <= 0.1, str("recall %.2f, traces with a false positive %.2f", recall, fp)};
}

Outcome probe_decisiveness() {
    systems::SystemParams p;
    p.m = 10000;
    p.b = 14;
    const auto table = systems::build(SystemKind::Lookup, p);
    const auto past = prober::probe_knowing(table, 3, prober::reference_rule(SystemKind::Lookup), 1);
    const auto mult = systems::build(SystemKind::MultiplicationAlg, {});
    const auto alg = prober::probe_knowing(mult, 8, prober::reference_rule(SystemKind::MultiplicationAlg), 1);
    const bool first = !past.knowing && past.r_failures == std::vector<std::size_t>{1};
    return {first && alg.knowing, str("lookup at n=3: knowing=%s, first failure at step %zu; multiplication at n=8: knowing=%s",
                                      past.knowing ? "true" : "false", past.r_failures.empty() ? 0 : past.r_failures[0],
                                      alg.knowing ? "true" : "false")};
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("idensity_accept_" + std::to_string(::getpid()));
    std::vector<std::string> files;
    for (const char* run : {"a", "b"}) {
        const fs::path d = root / run;
        fs::create_directories(d);
        auto at = [&](const char* f) { return (d / f).string(); };
        cli({"scan", "--kind", "multiplication", "--n-grid", "2,4,6,8", "--seed", "21", "--csv", at("mult.csv"), "--json",
             at("mult.json"), "--samples", at("mult.jsonl")});
        cli({"scan", "--kind", "prng", "--n-grid", "16,32,64", "--seed", "7", "--csv", at("prng.csv"), "--json", at("prng.json")});
        cli({"contextuality", "--corpus", "switch", "--steps", "20", "--seed", "3", "--csv", at("ctx.csv"), "--json",
             at("ctx.json")});
        std::ofstream(at("probe.json")) << cli({"probe", "--kind", "hybrid", "--n", "6", "--seed", "5"}).second;
        std::ofstream(at("lemma.json")) << nlohmann::json(prober::iteration_lemma_check(
                                               SystemKind::MultiplicationAlg, {}, {2, 4, 6}, 20,
                                               complexity::CompressorInterrogator{}, 9))
                                               .dump();
    }
    std::size_t same = 0;
    std::size_t total = 0;
    for (const auto& e : fs::directory_iterator(root / "a")) {
        const auto name = e.path().filename();
        const auto a = slurp(e.path());
        ++total;
        same += !a.empty() && a == slurp(root / "b" / name);
    }
    fs::remove_all(root);
    return {total == 9 && same == total, str("%zu/%zu artifacts byte-identical across two runs", same, total)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "xor gate", 1, xor_gate},
        {2, "lookup densities", 1, lookup_densities},
        {3, "multiplication scaling", 30, multiplication_scaling},
        {4, "table 1 verdicts", 120, table_one},
        {5, "blockhead", 1, blockhead},
        {6, "iteration lemma", 60, iteration_lemma},
        {7, "monotone contextuality", 60, monotonicity},
        {8, "domain switch", 60, domain_switch},
        {9, "probe decisiveness", 5, probe_decisiveness},
        {10, "determinism", 120, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && s <= c.budget_s;
        failed += !pass;
        std::printf("[%s] %2d %-24s %s (%.2f s of %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                    c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
