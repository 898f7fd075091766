// Runs the reference compressor over the calibration corpora and prints the
// constants the test suites pin.
#include <cstdio>
#include <algorithm>
#include <random>

#include "idensity/complexity.hpp"
#include "idensity/contextuality.hpp"

using namespace idensity;
using namespace idensity::complexity;

static ByteString random_bytes(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    return ByteString(std::move(v));
}

static std::string random_digits(std::mt19937_64& rng, std::size_t n) {
    std::string s;
    s.push_back(static_cast<char>('1' + rng() % 9));
    while (s.size() < n) s.push_back(static_cast<char>('0' + rng() % 10));
    return s;
}

int main() {
    std::mt19937_64 rng(20261015);
    std::printf("k_hat(empty) = %.0f\n", k_hat(ByteString{}).value_bits);
    std::printf("k_hat(10000 zeros) = %.0f\n", k_hat(ByteString(std::vector<std::uint8_t>(10000, 0))).value_bits);
    std::printf("k_hat(10000 random) = %.0f\n", k_hat(random_bytes(rng, 10000)).value_bits);
    auto r1 = random_bytes(rng, 1024), r2 = random_bytes(rng, 1024);
    std::printf("ncd(r1,r1) = %.3f  ncd(r1,r2) = %.3f\n", ncd(r1, r1), ncd(r1, r2));
    ByteString rr = r1; rr.append(r1);
    std::printf("ncd(r1, r1r1) = %.3f\n", ncd(r1, rr));

    auto mult = systems::build(systems::SystemKind::MultiplicationAlg, {});
    for (std::size_t n : {2, 4, 6, 8}) {
        double sum_ratio = 0, min_ratio = 9, sum_cond = 0, diag = 0, maxdiag = 0;
        const int pairs = 100;
        for (int p = 0; p < pairs; ++p) {
            auto x = systems::run(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n))).output;
            auto y = systems::run(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n))).output;
            double r = dependence_ratio(x, y);
            sum_ratio += r; min_ratio = std::min(min_ratio, r);
            sum_cond += k_hat_cond(x, y).value_bits;
            double d = dependence_ratio(x, x);
            diag += d; maxdiag = std::max(maxdiag, d);
        }
        std::printf("n=%zu mean dep=%.3f min dep=%.3f mean cond=%.1f mean diag=%.3f max diag=%.3f\n", n,
                    sum_ratio / pairs, min_ratio, sum_cond / pairs, diag / pairs, maxdiag);
    }

    for (std::size_t n : {4, 6, 8}) {
        std::vector<ByteString> outs;
        for (int i = 0; i < 50; ++i)
            outs.push_back(systems::run(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n))).output);
        std::sort(outs.begin(), outs.end());
        std::printf("n=%zu greedy N_eff:", n);
        for (double th : {0.5, 0.6, 0.65, 0.7, 0.75, 0.8}) {
            std::vector<std::size_t> kept;
            for (std::size_t i = 0; i < outs.size(); ++i) {
                bool ok = true;
                for (auto j : kept)
                    if (dependence_ratio(outs[i], outs[j]) < th || dependence_ratio(outs[j], outs[i]) < th) { ok = false; break; }
                if (ok) kept.push_back(i);
            }
            std::printf(" th=%.2f:%zu", th, kept.size());
        }
        std::printf("\n");
        auto tr = systems::trace(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n)));
        double adj = 0; std::size_t cnt = 0, below = 0;
        for (std::size_t i = 1; i < tr.records.size(); ++i) {
            double r = dependence_ratio(tr.records[i].output, tr.records[i - 1].output);
            adj += r; ++cnt; below += r < 0.7;
        }
        std::printf("  adjacent steps: mean ratio %.3f, %zu/%zu below 0.7\n", cnt ? adj / cnt : 0.0, below, cnt);
    }

    // Symmetric dependence (min over both directions) for unrelated products
    // and for adjacent steps of one trace, as percentiles.
    for (std::size_t n : {4, 6, 8}) {
        std::vector<double> unrel, adj;
        for (int p = 0; p < 300; ++p) {
            auto x = systems::run(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n))).output;
            auto y = systems::run(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n))).output;
            unrel.push_back(std::min(dependence_ratio(x, y), dependence_ratio(y, x)));
        }
        for (int t = 0; t < 5; ++t) {
            auto tr = systems::trace(mult, ByteString(random_digits(rng, n) + "*" + random_digits(rng, n)));
            for (std::size_t i = 1; i < tr.records.size(); ++i)
                adj.push_back(std::min(dependence_ratio(tr.records[i].output, tr.records[i - 1].output),
                                       dependence_ratio(tr.records[i - 1].output, tr.records[i].output)));
        }
        std::sort(unrel.begin(), unrel.end());
        std::sort(adj.begin(), adj.end());
        auto pct = [](const std::vector<double>& v, double q) { return v[static_cast<std::size_t>(q * (v.size() - 1))]; };
        std::printf("n=%zu unrelated p1=%.3f p5=%.3f p50=%.3f | adjacent p50=%.3f p95=%.3f p99=%.3f max=%.3f\n", n,
                    pct(unrel, 0.01), pct(unrel, 0.05), pct(unrel, 0.5), pct(adj, 0.5), pct(adj, 0.95), pct(adj, 0.99),
                    adj.back());
    }

    {
        namespace cx = idensity::contextuality;
        std::mt19937_64 r(7);
        int pass = 0;
        double early = 0, late = 0;
        for (int t = 0; t < 50; ++t) {
            auto tr = cx::multiplication_trace(r, 20);
            auto p = cx::contextuality_profile(tr);
            pass += cx::check_monotone(p, 0.2).pass;
            for (auto& s : p.steps) (s.index <= 10 ? early : late) += s.x_value;
        }
        std::printf("monotone pass %d/50; mean x early %.5f late %.5f\n", pass, early / (50 * 9), late / (50 * 10));
        int rpass = 0;
        for (int t = 0; t < 20; ++t) rpass += cx::check_monotone(cx::contextuality_profile(cx::random_block_trace(r, 20)), 0.2).pass;
        std::printf("random-block monotone pass %d/20\n", rpass);
        int hit = 0, falsepos = 0, pure_fp = 0;
        for (int t = 0; t < 100; ++t) {
            const std::size_t k1 = 8 + idensity::systems::draw_below(r, 18);
            auto a = cx::multiplication_trace(r, k1);
            auto b = t % 2 ? cx::text_trace(r, 20) : cx::random_block_trace(r, 20, 48, 64);
            auto idx = cx::detect_domain_switch(cx::concatenate(a, b));
            bool h = false, f = false;
            for (auto i : idx) { if (i + 1 >= k1 + 1 && i <= k1 + 2) h = true; else f = true; }
            hit += h; falsepos += f;
            if (f) { std::printf("  fp trace %d (%s) k1=%zu:", t, t % 2 ? "text" : "random", k1); for (auto i : idx) std::printf(" %zu", i); std::printf("\n"); }
            pure_fp += !cx::detect_domain_switch(cx::multiplication_trace(r, 20)).empty();
        }
        std::printf("switch recall %d/100 traces-with-false %d/100 pure-mult-false %d/100\n", hit, falsepos, pure_fp);
        auto tr = cx::multiplication_trace(r, 20);
        auto geo = cx::geography_text(r, 200);
        for (std::size_t i : {5, 10, 20}) {
            auto v = cx::independence_from_unrelated(tr, i, {ByteString("g"), geo, 0, 1});
            std::printf("indep step %zu ratio %.3f\n", i, v.ratio);
        }
    }
}
