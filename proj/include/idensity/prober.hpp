#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "idensity/complexity.hpp"
#include "idensity/systems.hpp"

namespace idensity::prober {

using complexity::Compressor;

enum class HVerdict { FiredCorrectly, Overran, Underran };

std::string_view to_string(HVerdict h) noexcept;

struct ProbeReport {
    std::uint64_t n_probed = 0;
    ByteString input;
    std::size_t steps_checked = 0;
    std::vector<std::size_t> r_failures;  // 1-based steps
    HVerdict h_verdict = HVerdict::Underran;
    bool knowing = false;
    std::vector<double> evidence;  // k_hat_cond(o_i, context(i)); k_hat for step 1
    std::string refusal;           // set when the system rejected the probe input
};

void to_json(nlohmann::json& j, const ProbeReport& r);

/// The transition rules the harness can replay. Each names its input domain:
/// "mult.shifted_add" and "mult.cached_fact_or_shifted_add" (decimal a*b),
/// "add.digit_carry" (decimal a+b), "add.binary_carry" (binary a+b),
/// "xor.bitwise" (two n-bit strings back to back), "lcg.step" (stream index).
std::vector<std::string> known_rules();

/// The reference rule for a system kind, used when no candidate is given.
systems::TransitionSpec reference_rule(systems::SystemKind kind);

/// The rule's step-by-step output sequence on `input`. `system` supplies
/// white-box parameters (the LCG seed).
std::vector<ByteString> replay(const systems::TransitionSpec& rule, const ByteString& input,
                               const systems::SystemSpec& system);

/// A seeded n-sized input from the rule's domain.
ByteString probe_input(const systems::TransitionSpec& rule, std::uint64_t n, std::uint64_t seed);

/// Runs the system on a fresh n-sized problem and checks each output against
/// the rule. An output must appear later in the rule's sequence than the one
/// before it (stored shortcuts may skip ahead). A refused input is a failure
/// at step 1.
ProbeReport probe_knowing(const systems::SystemSpec& system, std::uint64_t n, const systems::TransitionSpec& candidate_f,
                          std::uint64_t seed, const Compressor& c = complexity::reference_compressor());

struct LemmaPoint {
    std::uint64_t n = 0;
    double mean_chain_bits = 0.0;
    double mean_cross_bits = 0.0;
    std::size_t n_eff = 0;
    double log2_n_est = 0.0;
    double i_value = 0.0;
    std::vector<double> chain_bits;
    std::vector<double> cross_bits;
};

struct LemmaReport {
    bool chain_ok = false;
    bool cross_ok = false;
    bool divergence_ok = false;
    double chain_fraction = 0.0;  // share of steps within f_bits + slack
    double chain_slack_bits = 0.0;
    double cross_slope = 0.0;
    double i_slope = 0.0;
    std::string interrogator_id;
    std::vector<LemmaPoint> points;
};

void to_json(nlohmann::json& j, const LemmaReport& r);

/// Share of chain steps that must stay within f_bits + slack.
inline constexpr double kChainQuorum = 0.9;

/// Checks the three parts of the iteration lemma over an n grid:
/// chain (consecutive steps cost at most f_bits + 2 x container overhead for
/// >= 90% of steps), cross-input (mean conditional between outputs on
/// different inputs grows with n and at least half as fast as n), and
/// divergence (I(n) strictly increasing, with log2 N estimated by the cross
/// conditional when the sample has more than one independent output).
/// The Constant system is accepted with a vacuous chain; other
/// non-iterative systems throw Unsupported.
LemmaReport iteration_lemma_check(systems::SystemKind kind, const systems::SystemParams& params,
                                  const std::vector<std::uint64_t>& n_grid, std::size_t samples,
                                  const complexity::Interrogator& q, std::uint64_t seed);

struct StraightlineVerdict {
    bool pass = false;
    BigInt distinct_outputs;
    std::uint64_t program_bits = 0;
    std::uint64_t bound_log2 = 0;  // outputs allowed: 2^bound_log2
};

inline constexpr std::uint64_t kStraightlineSlack = 2;

StraightlineVerdict straightline_bound_check(std::uint64_t program_bits, const BigInt& distinct_outputs);
StraightlineVerdict straightline_bound_check(std::uint64_t program_bits, const std::vector<ByteString>& observed_outputs);

}  // namespace idensity::prober
