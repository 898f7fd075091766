#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "idensity/complexity.hpp"
#include "idensity/systems.hpp"

namespace idensity::contextuality {

using complexity::Compressor;

/// x_value ceiling, applied when k_cond_bits is within container overhead.
inline constexpr double kXCeiling = 1.0 / complexity::kContainerOverheadBits;
/// Preceding steps a switch is judged against.
inline constexpr std::size_t kSwitchWindow = 4;

struct ContextStep {
    std::size_t index = 0;  // 1-based trace step, >= 2
    double k_cond_bits = 0.0;
    double x_value = 0.0;
};

struct ContextualityProfile {
    std::vector<ContextStep> steps;
    std::string trace_digest;
};

void to_json(nlohmann::json& j, const ContextualityProfile& p);
/// step,k_cond_bits,x_value
std::string to_csv(const ContextualityProfile& p);

double x_value_of(double k_cond_bits) noexcept;

/// k_cond(i) = k_hat_cond(o_i, context(i)) for every step i >= 2.
ContextualityProfile contextuality_profile(const systems::Trace& trace,
                                           const Compressor& c = complexity::reference_compressor());

/// Slack allowed between consecutive steps: container overhead + ceil(log2 i).
double monotone_slack(std::size_t i) noexcept;

struct MonotoneVerdict {
    bool pass = true;
    std::size_t comparisons = 0;
    std::vector<std::size_t> violations;  // step i+1 for each k(i+1) > k(i) + slack(i)
    double violation_fraction = 0.0;
    double budget = 0.0;
};

void to_json(nlohmann::json& j, const MonotoneVerdict& v);

MonotoneVerdict check_monotone(const ContextualityProfile& profile, double violation_budget);

struct IndependenceVerdict {
    bool independent = false;
    std::size_t step = 0;
    double ratio = 0.0;  // dependence_ratio(o_i, unrelated)
    double x_value = 0.0;
    double margin = 0.0;
};

void to_json(nlohmann::json& j, const IndependenceVerdict& v);

/// Does output i of the trace stay unpredictable from an unrelated output?
/// Passes when the ratio is at least 1 - margin. `i` is 1-based.
IndependenceVerdict independence_from_unrelated(const systems::Trace& trace, std::size_t i,
                                                const systems::OutputRecord& unrelated,
                                                const Compressor& c = complexity::reference_compressor(),
                                                double margin = 0.3);

/// Steps i whose k_cond is at least jump_factor x max(median of the preceding
/// window, container overhead). The window holds the kSwitchWindow steps before
/// i and restarts at each detection. Needs >= 6 steps and jump_factor > 1.
std::vector<std::size_t> detect_domain_switch(const systems::Trace& trace,
                                              const Compressor& c = complexity::reference_compressor(),
                                              double jump_factor = 3.0);
std::vector<std::size_t> detect_domain_switch(const ContextualityProfile& profile, double jump_factor);

// Corpus builders for the analyses above.

/// A paragraph of invented geography at least `min_bytes` long.
ByteString geography_text(std::mt19937_64& rng, std::size_t min_bytes);
/// One geography sentence per step.
systems::Trace text_trace(std::mt19937_64& rng, std::size_t steps);
/// Fresh random blocks with lengths drawn from [min_len, max_len].
systems::Trace random_block_trace(std::mt19937_64& rng, std::size_t steps, std::size_t min_len = 16,
                                  std::size_t max_len = 256);
systems::Trace repeated_trace(const ByteString& output, std::size_t steps);
/// The first `steps` records of a multiplication trace on random operands.
systems::Trace multiplication_trace(std::mt19937_64& rng, std::size_t steps);
systems::Trace truncate(const systems::Trace& t, std::size_t steps);
systems::Trace concatenate(const systems::Trace& a, const systems::Trace& b);

}  // namespace idensity::contextuality
