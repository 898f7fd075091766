#include "idensity/contextuality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "idensity/errors.hpp"

namespace idensity::contextuality {

using systems::OutputRecord;
using systems::Trace;

double x_value_of(double k_cond_bits) noexcept {
    if (k_cond_bits <= complexity::kContainerOverheadBits) return kXCeiling;
    return 1.0 / k_cond_bits;
}

void to_json(nlohmann::json& j, const ContextualityProfile& p) {
    auto steps = nlohmann::json::array();
    for (const auto& s : p.steps) steps.push_back({{"index", s.index}, {"k_cond_bits", s.k_cond_bits}, {"x_value", s.x_value}});
    j = nlohmann::json{{"trace_digest", p.trace_digest}, {"steps", steps}};
}

std::string to_csv(const ContextualityProfile& p) {
    std::ostringstream os;
    os << "step,k_cond_bits,x_value\n";
    char buf[64];
    for (const auto& s : p.steps) {
        std::snprintf(buf, sizeof buf, "%.17g", s.x_value);
        os << s.index << ',' << s.k_cond_bits << ',' << buf << '\n';
    }
    return os.str();
}

ContextualityProfile contextuality_profile(const Trace& trace, const Compressor& c) {
    if (trace.size() < 2) throw ArgumentError("contextuality_profile: trace needs at least 2 records");
    ContextualityProfile p;
    // Context grows one record at a time instead of being rebuilt per step.
    ByteString context = trace.records[0].output;
    for (std::size_t i = 2; i <= trace.size(); ++i) {
        const auto& o = trace.records[i - 1].output;
        const double k = complexity::k_hat_cond(o, context, c).value_bits;
        p.steps.push_back({i, k, x_value_of(k)});
        context.push_back(systems::kStepSeparator);
        context.append(o);
    }
    p.trace_digest = digest(context);
    return p;
}

double monotone_slack(std::size_t i) noexcept {
    const double log_term = i <= 1 ? 0.0 : std::ceil(std::log2(static_cast<double>(i)));
    return complexity::kContainerOverheadBits + log_term;
}

void to_json(nlohmann::json& j, const MonotoneVerdict& v) {
    j = nlohmann::json{{"pass", v.pass},
                       {"comparisons", v.comparisons},
                       {"violations", v.violations},
                       {"violation_fraction", v.violation_fraction},
                       {"budget", v.budget}};
}

MonotoneVerdict check_monotone(const ContextualityProfile& profile, double violation_budget) {
    MonotoneVerdict v;
    v.budget = violation_budget;
    for (std::size_t s = 0; s + 1 < profile.steps.size(); ++s) {
        const auto& cur = profile.steps[s];
        const auto& next = profile.steps[s + 1];
        ++v.comparisons;
        if (next.k_cond_bits > cur.k_cond_bits + monotone_slack(cur.index)) v.violations.push_back(next.index);
    }
    v.violation_fraction = v.comparisons == 0 ? 0.0 : static_cast<double>(v.violations.size()) / static_cast<double>(v.comparisons);
    v.pass = v.violation_fraction <= violation_budget;
    return v;
}

void to_json(nlohmann::json& j, const IndependenceVerdict& v) {
    j = nlohmann::json{{"independent", v.independent},
                       {"step", v.step},
                       {"ratio", v.ratio},
                       {"x_value", v.x_value},
                       {"margin", v.margin}};
}

IndependenceVerdict independence_from_unrelated(const Trace& trace, std::size_t i, const OutputRecord& unrelated,
                                                const Compressor& c, double margin) {
    if (i < 1 || i > trace.size()) throw ArgumentError("independence_from_unrelated: step out of range");
    if (!(margin >= 0.0 && margin <= 1.0)) throw ArgumentError("margin must lie in [0, 1]");
    const auto& o = trace.records[i - 1].output;
    IndependenceVerdict v;
    v.step = i;
    v.margin = margin;
    v.ratio = complexity::dependence_ratio(o, unrelated.output, c);
    v.x_value = i >= 2 ? x_value_of(complexity::k_hat_cond(o, trace.context(i), c).value_bits)
                       : x_value_of(complexity::k_hat(o, c).value_bits);
    v.independent = v.ratio >= 1.0 - margin;
    return v;
}

std::vector<std::size_t> detect_domain_switch(const ContextualityProfile& profile, double jump_factor) {
    if (!(jump_factor > 1.0)) throw ArgumentError("jump_factor must exceed 1");
    if (profile.steps.size() + 1 < 6) throw ArgumentError("detect_domain_switch: trace needs at least 6 steps");
    std::vector<std::size_t> found;
    std::size_t window_start = 0;  // position in profile.steps
    for (std::size_t s = 0; s < profile.steps.size(); ++s) {
        if (s - window_start < kSwitchWindow) continue;
        std::array<double, kSwitchWindow> w{};
        for (std::size_t k = 0; k < kSwitchWindow; ++k) w[k] = profile.steps[s - kSwitchWindow + k].k_cond_bits;
        std::sort(w.begin(), w.end());
        const double median = (w[kSwitchWindow / 2 - 1] + w[kSwitchWindow / 2]) / 2.0;
        const double threshold = jump_factor * std::max(median, complexity::kContainerOverheadBits);
        if (profile.steps[s].k_cond_bits >= threshold) {
            found.push_back(profile.steps[s].index);
            window_start = s;
        }
    }
    return found;
}

std::vector<std::size_t> detect_domain_switch(const Trace& trace, const Compressor& c, double jump_factor) {
    if (!(jump_factor > 1.0)) throw ArgumentError("jump_factor must exceed 1");
    if (trace.size() < 6) throw ArgumentError("detect_domain_switch: trace needs at least 6 steps");
    return detect_domain_switch(contextuality_profile(trace, c), jump_factor);
}

// ---------------------------------------------------------------------------

namespace {

template <std::size_t N>
std::string_view pick(std::mt19937_64& rng, const std::array<std::string_view, N>& words) {
    return words[systems::draw_below(rng, N)];
}

std::string place_name(std::mt19937_64& rng) {
    static constexpr std::array<std::string_view, 16> head{"Al", "Bor", "Cal", "Dun", "Esk", "Fal", "Gor", "Hal",
                                                           "Ist", "Kel", "Lor", "Mar", "Nor", "Ost", "Ral", "Tor"};
    static constexpr std::array<std::string_view, 12> tail{"avia", "enmark", "ida", "ona", "ruth", "esse",
                                                           "wick", "holm", "aria", "ington", "ova", "stan"};
    return std::string(pick(rng, head)) + std::string(pick(rng, tail));
}

std::string geography_sentence(std::mt19937_64& rng) {
    static constexpr std::array<std::string_view, 8> feature{"river", "mountain range", "lake", "plateau",
                                                             "desert", "forest", "delta", "glacier"};
    static constexpr std::array<std::string_view, 8> verb{"borders", "drains into", "rises above", "stretches across",
                                                          "separates", "feeds", "shelters", "overlooks"};
    static constexpr std::array<std::string_view, 8> region{"the northern coast", "the central valley",
                                                            "the eastern provinces", "the old capital",
                                                            "the southern marshes", "the western islands",
                                                            "the high steppe", "the inland sea"};
    static constexpr std::array<std::string_view, 6> clause{"where farmers grow barley and rye",
                                                            "which freezes every winter",
                                                            "famous for its copper mines",
                                                            "home to several fishing villages",
                                                            "crossed by an ancient trade road",
                                                            "visited by migrating cranes each spring"};
    std::string s = "The " + std::string(pick(rng, feature)) + " of " + place_name(rng) + " " +
                    std::string(pick(rng, verb)) + " " + std::string(pick(rng, region)) + " of " + place_name(rng) +
                    ", " + std::string(pick(rng, clause)) + ".";
    return s;
}

}  // namespace

ByteString geography_text(std::mt19937_64& rng, std::size_t min_bytes) {
    std::string text;
    while (text.size() < min_bytes) {
        if (!text.empty()) text.push_back(' ');
        text += geography_sentence(rng);
    }
    return ByteString(text);
}

Trace text_trace(std::mt19937_64& rng, std::size_t steps) {
    Trace t;
    for (std::size_t i = 1; i <= steps; ++i) {
        t.records.push_back(OutputRecord{ByteString("text"), ByteString(geography_sentence(rng)), 0, i});
        t.kinds.push_back(systems::StepKind::Advance);
        t.step_scratchpad_bits.push_back(0);
    }
    return t;
}

Trace random_block_trace(std::mt19937_64& rng, std::size_t steps, std::size_t min_len, std::size_t max_len) {
    if (min_len == 0 || max_len < min_len) throw ArgumentError("random_block_trace: bad length range");
    Trace t;
    for (std::size_t i = 1; i <= steps; ++i) {
        std::vector<std::uint8_t> block(min_len + systems::draw_below(rng, max_len - min_len + 1));
        for (auto& b : block) b = static_cast<std::uint8_t>(rng());
        t.records.push_back(OutputRecord{ByteString("random"), ByteString(std::move(block)), 0, i});
        t.kinds.push_back(systems::StepKind::Advance);
        t.step_scratchpad_bits.push_back(0);
    }
    return t;
}

Trace repeated_trace(const ByteString& output, std::size_t steps) {
    Trace t;
    for (std::size_t i = 1; i <= steps; ++i) {
        t.records.push_back(OutputRecord{ByteString("repeat"), output, 0, i});
        t.kinds.push_back(systems::StepKind::Advance);
        t.step_scratchpad_bits.push_back(0);
    }
    return t;
}

Trace multiplication_trace(std::mt19937_64& rng, std::size_t steps) {
    const auto mult = systems::build(systems::SystemKind::MultiplicationAlg, {});
    for (;;) {
        const auto a_len = 2 + systems::draw_below(rng, 3);
        const auto b_len = 1 + systems::draw_below(rng, 2);
        auto digits = [&rng](std::uint64_t len) {
            std::string s(1, static_cast<char>('1' + systems::draw_below(rng, 9)));
            while (s.size() < len) s.push_back(static_cast<char>('0' + systems::draw_below(rng, 10)));
            return s;
        };
        const auto t = systems::trace(mult, ByteString(digits(a_len) + "*" + digits(b_len)));
        if (t.size() >= steps) return truncate(t, steps);
    }
}

Trace truncate(const Trace& t, std::size_t steps) {
    if (steps > t.size()) throw ArgumentError("truncate: trace is shorter than requested");
    Trace out;
    out.records.assign(t.records.begin(), t.records.begin() + static_cast<std::ptrdiff_t>(steps));
    out.kinds.assign(t.kinds.begin(), t.kinds.begin() + static_cast<std::ptrdiff_t>(steps));
    out.step_scratchpad_bits.assign(t.step_scratchpad_bits.begin(),
                                    t.step_scratchpad_bits.begin() + static_cast<std::ptrdiff_t>(steps));
    out.scratchpad_bits = out.step_scratchpad_bits.empty()
                              ? 0
                              : *std::max_element(out.step_scratchpad_bits.begin(), out.step_scratchpad_bits.end());
    return out;
}

Trace concatenate(const Trace& a, const Trace& b) {
    Trace out = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto r = b.records[i];
        r.steps = out.records.size() + 1;
        out.records.push_back(std::move(r));
        out.kinds.push_back(b.kinds[i]);
        out.step_scratchpad_bits.push_back(b.step_scratchpad_bits[i]);
    }
    out.scratchpad_bits = std::max(a.scratchpad_bits, b.scratchpad_bits);
    return out;
}

}  // namespace idensity::contextuality
