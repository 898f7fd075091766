#pragma once

#include <cstdint>
#include <memory>
#include "json.hpp"
#include <string>
#include <vector>

#include "idensity/bytes.hpp"
#include "idensity/compressor.hpp"
#include "idensity/systems.hpp"

namespace idensity::complexity {

/// An upper-bound estimate of K(x) or K(x|y), in bits.
struct ComplexityEstimate {
    double value_bits = 0.0;
    std::string estimator_id;
    std::string compressor_id;
    std::string input_digest;
};

void to_json(nlohmann::json& j, const ComplexityEstimate& e);

/// Byte placed between the conditioning string and the target.
inline constexpr std::uint8_t kConditionalSeparator = 0x1f;

/// Compressed length of x in bits (container included).
ComplexityEstimate k_hat(const ByteString& x, const Compressor& c = reference_compressor());

/// max(C(y sep x) - C(y), 0).
ComplexityEstimate k_hat_cond(const ByteString& x, const ByteString& y, const Compressor& c = reference_compressor());

/// Normalized compression distance. Throws ArgumentError on empty input.
double ncd(const ByteString& x, const ByteString& y, const Compressor& c = reference_compressor());

/// k_hat_cond(x, y) / k_hat(x); near 1 means y says nothing about x.
double dependence_ratio(const ByteString& x, const ByteString& y, const Compressor& c = reference_compressor());

/// Generator-aware conditional cost for reference systems: the bits an
/// interrogator that knows the system's rule needs to produce x from y.
/// Throws Unsupported for kinds without a known generator.
ComplexityEstimate oracle_cond(systems::SystemKind kind, const systems::OutputRecord& x,
                               const systems::OutputRecord& y);

/// Generator-aware unconditional cost of x.
ComplexityEstimate oracle_k(systems::SystemKind kind, const systems::OutputRecord& x);

/// Something that estimates (conditional) complexity of system outputs.
class Interrogator {
public:
    virtual ~Interrogator() = default;

    virtual std::string id() const = 0;
    virtual double complexity_bits(const systems::OutputRecord& x) const = 0;
    virtual double conditional_bits(const systems::OutputRecord& x, const systems::OutputRecord& y) const = 0;
    /// Graded distance in [0, 1 + delta].
    virtual double distance(const systems::OutputRecord& x, const systems::OutputRecord& y) const = 0;
    /// Default threshold above which a pair counts as independent.
    virtual double default_theta() const = 0;

    /// conditional / unconditional; 0 when x carries no information at all.
    double dependence(const systems::OutputRecord& x, const systems::OutputRecord& y) const;
};

class CompressorInterrogator final : public Interrogator {
public:
    static constexpr double kDefaultTheta = 0.7;

    explicit CompressorInterrogator(const Compressor& c = reference_compressor()) : compressor_(&c) {}

    std::string id() const override { return "compressor:" + std::string(compressor_->id()); }
    double complexity_bits(const systems::OutputRecord& x) const override;
    double conditional_bits(const systems::OutputRecord& x, const systems::OutputRecord& y) const override;
    double distance(const systems::OutputRecord& x, const systems::OutputRecord& y) const override;
    double default_theta() const override { return kDefaultTheta; }

    const Compressor& compressor() const noexcept { return *compressor_; }

private:
    const Compressor* compressor_;
};

class OracleInterrogator final : public Interrogator {
public:
    static constexpr double kDefaultTheta = 0.9;

    explicit OracleInterrogator(systems::SystemKind kind) : kind_(kind) {}

    std::string id() const override { return "oracle:" + std::string(systems::to_string(kind_)); }
    double complexity_bits(const systems::OutputRecord& x) const override;
    double conditional_bits(const systems::OutputRecord& x, const systems::OutputRecord& y) const override;
    double distance(const systems::OutputRecord& x, const systems::OutputRecord& y) const override;
    double default_theta() const override { return kDefaultTheta; }

private:
    systems::SystemKind kind_;
};

/// "compressor" / "compressor:<id>" / "oracle". The oracle needs the system kind.
std::unique_ptr<Interrogator> make_interrogator(std::string_view spec, systems::SystemKind kind);

/// Pairwise dependence ratios and NCD over an output sample, row-major.
struct IndependenceMatrix {
    std::size_t sample_size = 0;
    std::vector<double> dep_ratio;
    std::vector<double> ncd;

    double dep(std::size_t i, std::size_t j) const { return dep_ratio[i * sample_size + j]; }
    double dist(std::size_t i, std::size_t j) const { return ncd[i * sample_size + j]; }
};

IndependenceMatrix independence_matrix(const std::vector<systems::OutputRecord>& outputs, const Interrogator& q);

}  // namespace idensity::complexity
