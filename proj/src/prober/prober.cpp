#include "idensity/prober.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "idensity/density.hpp"
#include "idensity/errors.hpp"

namespace idensity::prober {

using systems::OutputRecord;
using systems::SystemKind;
using systems::SystemSpec;
using systems::TransitionSpec;

std::string_view to_string(HVerdict h) noexcept {
    switch (h) {
        case HVerdict::FiredCorrectly: return "FiredCorrectly";
        case HVerdict::Overran: return "Overran";
        case HVerdict::Underran: return "Underran";
    }
    return "?";
}

void to_json(nlohmann::json& j, const ProbeReport& r) {
    j = nlohmann::json{{"n", r.n_probed},
                       {"input", r.input.str()},
                       {"steps_checked", r.steps_checked},
                       {"r_failures", r.r_failures},
                       {"h_verdict", to_string(r.h_verdict)},
                       {"knowing", r.knowing},
                       {"evidence", r.evidence}};
    if (!r.refusal.empty()) j["refusal"] = r.refusal;
}

std::vector<std::string> known_rules() {
    return {"mult.shifted_add", "mult.cached_fact_or_shifted_add", "add.digit_carry", "add.binary_carry", "xor.bitwise",
            "lcg.step"};
}

namespace {

bool is_mult(const std::string& id) { return id == "mult.shifted_add" || id == "mult.cached_fact_or_shifted_add"; }

void require_known(const TransitionSpec& rule) {
    const auto rules = known_rules();
    if (std::find(rules.begin(), rules.end(), rule.advance_id) == rules.end()) {
        throw Unsupported("no harness replay for rule '" + rule.advance_id + "'");
    }
}

std::vector<ByteString> outputs_of(const systems::Trace& t) {
    std::vector<ByteString> out;
    for (const auto& r : t.records) out.push_back(r.output);
    return out;
}

std::string digits(std::mt19937_64& rng, std::uint64_t n, std::uint64_t base) {
    std::string s;
    for (std::uint64_t i = 0; i < n; ++i) {
        const bool lead = i == 0 && n > 1 && base == 10;
        s.push_back(static_cast<char>('0' + (lead ? 1 + systems::draw_below(rng, 9) : systems::draw_below(rng, base))));
    }
    return s;
}

// Outputs of the binary rule are compared without leading zeros, since the
// circuit pads to its own width.
ByteString normalize(const TransitionSpec& rule, const ByteString& out) {
    if (rule.advance_id == "add.binary_carry") return ByteString(systems::detail::strip_zeros(out.str()));
    return out;
}

}  // namespace

TransitionSpec reference_rule(SystemKind kind) {
    switch (kind) {
        case SystemKind::AdditionAlg: return {systems::kCarryRuleBits, "add.digit_carry", "add.positions_consumed"};
        case SystemKind::AdderCircuit: return {systems::kGateBits * systems::kGatesPerFullAdder, "add.binary_carry", "add.bits_consumed"};
        case SystemKind::XorGate: return {systems::kGateBits, "xor.bitwise", "xor.bits_consumed"};
        case SystemKind::Prng: return {2 * systems::kLcgWordBits, "lcg.step", "lcg.index_reached"};
        case SystemKind::RandomSource: throw Unsupported("RandomSource has no transition rule to probe");
        case SystemKind::Constant:
        case SystemKind::Lookup:
        case SystemKind::MultiplicationAlg:
        case SystemKind::MemoizedHybrid:
            return {systems::kMultiplicationTableBits + systems::kCarryRuleBits, "mult.shifted_add", "mult.multiplier_consumed"};
    }
    throw Unsupported("reference_rule: unhandled kind");
}

std::vector<ByteString> replay(const TransitionSpec& rule, const ByteString& input, const SystemSpec& system) {
    require_known(rule);
    const auto& id = rule.advance_id;
    if (is_mult(id)) return outputs_of(systems::trace(systems::build(SystemKind::MultiplicationAlg, {}), input));
    if (id == "add.digit_carry") return outputs_of(systems::trace(systems::build(SystemKind::AdditionAlg, {}), input));
    if (id == "add.binary_carry") {
        const auto ops = systems::detail::parse_operands(input.view(), "01");
        if (ops.op != '+') throw ArgumentError("binary addition expects a+b");
        auto from_bits = [](const std::string& bits) {
            BigInt v = 0;
            for (char ch : bits) v = (v << 1) | (ch == '1' ? 1 : 0);
            return v;
        };
        const BigInt sum = from_bits(ops.left) + from_bits(ops.right);
        std::string bits;
        for (BigInt v = sum; v > 0; v >>= 1) bits.push_back(bit_test(v, 0) ? '1' : '0');
        if (bits.empty()) bits = "0";
        std::reverse(bits.begin(), bits.end());
        return {ByteString(bits)};
    }
    if (id == "xor.bitwise") {
        const auto text = input.view();
        if (text.empty() || text.size() % 2 != 0 || text.find_first_not_of("01") != std::string_view::npos) {
            throw ArgumentError("xor rule expects two equal-length bit strings back to back");
        }
        const auto half = text.size() / 2;
        std::string out;
        for (std::size_t i = 0; i < half; ++i) out.push_back(text[i] != text[half + i] ? '1' : '0');
        return {ByteString(out)};
    }
    // lcg.step
    if (!system.params.seed) throw ArgumentError("lcg replay needs the system seed");
    const auto k = std::stoull(input.str());
    std::vector<ByteString> out;
    auto state = static_cast<std::uint32_t>(*system.params.seed);
    for (std::uint64_t i = 0; i < k; ++i) {
        state = systems::lcg_jump(state, 1);
        out.push_back(ByteString(std::vector<std::uint8_t>{static_cast<std::uint8_t>(state >> 24),
                                                           static_cast<std::uint8_t>(state >> 16),
                                                           static_cast<std::uint8_t>(state >> 8),
                                                           static_cast<std::uint8_t>(state)}));
    }
    return out;
}

ByteString probe_input(const TransitionSpec& rule, std::uint64_t n, std::uint64_t seed) {
    require_known(rule);
    if (n < 1) throw ArgumentError("probe size must be >= 1");
    std::mt19937_64 rng(seed);
    const auto& id = rule.advance_id;
    if (is_mult(id)) return ByteString(digits(rng, n, 10) + "*" + digits(rng, n, 10));
    if (id == "add.digit_carry") return ByteString(digits(rng, n, 10) + "+" + digits(rng, n, 10));
    if (id == "add.binary_carry") return ByteString(digits(rng, n, 2) + "+" + digits(rng, n, 2));
    if (id == "xor.bitwise") return ByteString(digits(rng, 2 * n, 2));
    return ByteString(std::to_string(n));  // lcg.step: the n-th state
}

ProbeReport probe_knowing(const SystemSpec& system, std::uint64_t n, const TransitionSpec& candidate_f, std::uint64_t seed,
                          const Compressor& c) {
    ProbeReport r;
    r.n_probed = n;
    r.input = probe_input(candidate_f, n, seed);
    const auto expected = replay(candidate_f, r.input, system);

    std::vector<OutputRecord> produced;
    try {
        if (system.iterative()) {
            produced = systems::trace(system, r.input).records;
        } else {
            produced.push_back(systems::run(system, r.input));
        }
    } catch (const RangeExhausted& e) {
        r.refusal = e.what();
    } catch (const ArgumentError& e) {
        r.refusal = e.what();
    }

    if (produced.empty()) {
        r.steps_checked = 1;
        r.r_failures.push_back(1);
        r.evidence.push_back(0.0);
        r.h_verdict = HVerdict::Underran;
        r.knowing = false;
        return r;
    }

    std::size_t pos = 0;  // number of expected outputs consumed
    bool past_end = false;
    ByteString context;
    for (std::size_t i = 0; i < produced.size(); ++i) {
        const auto& o = produced[i].output;
        r.evidence.push_back(i == 0 ? complexity::k_hat(o, c).value_bits : complexity::k_hat_cond(o, context, c).value_bits);
        if (i > 0) context.push_back(systems::kStepSeparator);
        context.append(o);

        if (pos == expected.size()) past_end = true;
        const auto target = normalize(candidate_f, o);
        const auto from = expected.begin() + static_cast<std::ptrdiff_t>(pos);
        // the halting output takes its latest match ("0*5" repeats "0")
        auto hit = std::find(from, expected.end(), target);
        if (i + 1 == produced.size() && hit != expected.end()) {
            hit = std::find(expected.rbegin(), std::make_reverse_iterator(from), target).base() - 1;
        }
        if (hit == expected.end()) {
            r.r_failures.push_back(i + 1);
        } else {
            pos = static_cast<std::size_t>(hit - expected.begin()) + 1;
        }
    }
    r.steps_checked = produced.size();
    if (past_end) {
        r.h_verdict = HVerdict::Overran;
    } else if (pos == expected.size() && normalize(candidate_f, produced.back().output) == expected.back()) {
        r.h_verdict = HVerdict::FiredCorrectly;
    } else {
        r.h_verdict = HVerdict::Underran;
    }
    r.knowing = r.r_failures.empty() && r.h_verdict == HVerdict::FiredCorrectly;
    return r;
}

// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const LemmaReport& r) {
    auto points = nlohmann::json::array();
    for (const auto& p : r.points) {
        points.push_back({{"n", p.n},
                          {"mean_chain_bits", p.mean_chain_bits},
                          {"mean_cross_bits", p.mean_cross_bits},
                          {"n_eff", p.n_eff},
                          {"log2_n_est", p.log2_n_est},
                          {"i_value", p.i_value},
                          {"chain_bits", p.chain_bits},
                          {"cross_bits", p.cross_bits}});
    }
    j = nlohmann::json{{"chain_ok", r.chain_ok},
                       {"cross_ok", r.cross_ok},
                       {"divergence_ok", r.divergence_ok},
                       {"chain_fraction", r.chain_fraction},
                       {"chain_slack_bits", r.chain_slack_bits},
                       {"cross_slope", r.cross_slope},
                       {"i_slope", r.i_slope},
                       {"interrogator", r.interrogator_id},
                       {"points", points}};
}

namespace {

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

LemmaReport iteration_lemma_check(SystemKind kind, const systems::SystemParams& params,
                                  const std::vector<std::uint64_t>& n_grid, std::size_t samples,
                                  const complexity::Interrogator& q, std::uint64_t seed) {
    if (n_grid.size() < 2) throw ArgumentError("iteration_lemma_check: need at least two grid points");
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1]) throw ArgumentError("iteration_lemma_check: n grid must be strictly increasing");
    }
    if (samples < 20) throw ArgumentError("iteration_lemma_check: need at least 20 samples per n");

    systems::SystemParams p = params;
    if (kind == SystemKind::Prng && !p.seed) p.seed = seed;

    LemmaReport report;
    report.interrogator_id = q.id();
    report.chain_slack_bits = 2.0 * complexity::kContainerOverheadBits;

    std::mt19937_64 rng(seed);
    std::size_t chain_total = 0;
    std::size_t chain_within = 0;
    for (auto n : n_grid) {
        const auto spec = density::build_at(kind, p, n);
        if (!spec.iterative() && kind != SystemKind::Constant) {
            throw Unsupported("iteration_lemma_check: " + std::string(systems::to_string(kind)) + " is not iterative");
        }
        const double f_bits = spec.iterative() ? static_cast<double>(spec.transition->f_bits) : 0.0;

        LemmaPoint point;
        point.n = n;
        std::vector<OutputRecord> finals;
        for (std::size_t s = 0; s < samples; ++s) {
            const auto input = systems::random_input(spec, n, rng);
            if (!spec.iterative()) {
                finals.push_back(systems::run(spec, input));
                continue;
            }
            const auto t = systems::trace(spec, input);
            for (std::size_t i = 1; i < t.size(); ++i) {
                const double bits = q.conditional_bits(t.records[i], t.records[i - 1]);
                point.chain_bits.push_back(bits);
                ++chain_total;
                if (bits <= f_bits + report.chain_slack_bits) ++chain_within;
            }
            auto last = t.records.back();
            last.steps = t.size();
            finals.push_back(std::move(last));
        }
        for (std::size_t s = 0; s < finals.size(); ++s) {
            point.cross_bits.push_back(q.conditional_bits(finals[s], finals[(s + 1) % finals.size()]));
        }
        point.mean_chain_bits = mean(point.chain_bits);
        point.mean_cross_bits = mean(point.cross_bits);
        point.n_eff = density::effective_output_count(finals, q, q.default_theta()).n_eff;
        point.log2_n_est = point.n_eff > 1 ? point.mean_cross_bits : 0.0;
        point.i_value = spec.c_bits > 0 ? point.log2_n_est / spec.c_bits.convert_to<double>() : 0.0;
        report.points.push_back(std::move(point));
    }

    report.chain_fraction = chain_total == 0 ? 1.0 : static_cast<double>(chain_within) / static_cast<double>(chain_total);
    report.chain_ok = report.chain_fraction >= kChainQuorum;

    std::vector<double> xs;
    std::vector<double> cross;
    std::vector<double> is;
    for (const auto& pt : report.points) {
        xs.push_back(static_cast<double>(pt.n));
        cross.push_back(pt.mean_cross_bits);
        is.push_back(pt.i_value);
    }
    report.cross_slope = density::ls_slope(xs, cross);
    report.i_slope = density::ls_slope(xs, is);
    // Roughly linear: the conditional grows at least half as fast as n.
    const double n_ratio = xs.back() / xs.front();
    const bool grows = cross.front() > 0.0 ? cross.back() / cross.front() >= 0.5 * n_ratio : cross.back() > 0.0;
    report.cross_ok = report.cross_slope > 0.0 && grows;
    report.divergence_ok = true;
    for (std::size_t i = 1; i < is.size(); ++i) {
        if (!(is[i] > is[i - 1])) report.divergence_ok = false;
    }
    return report;
}

// ---------------------------------------------------------------------------

StraightlineVerdict straightline_bound_check(std::uint64_t program_bits, const BigInt& distinct_outputs) {
    StraightlineVerdict v;
    v.program_bits = program_bits;
    v.distinct_outputs = distinct_outputs;
    v.bound_log2 = program_bits * kStraightlineSlack;
    v.pass = distinct_outputs <= (BigInt(1) << v.bound_log2);
    return v;
}

StraightlineVerdict straightline_bound_check(std::uint64_t program_bits, const std::vector<ByteString>& observed_outputs) {
    const std::set<ByteString> distinct(observed_outputs.begin(), observed_outputs.end());
    return straightline_bound_check(program_bits, BigInt(distinct.size()));
}

}  // namespace idensity::prober
