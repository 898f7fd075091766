#include <algorithm>
#include <cmath>

#include "idensity/complexity.hpp"
#include "idensity/errors.hpp"

namespace idensity::complexity {

namespace {

double compressed_bits(const Compressor& c, std::span<const std::uint8_t> data) {
    try {
        return 8.0 * static_cast<double>(c.compress(data).size());
    } catch (const EstimatorError&) {
        throw;
    } catch (const std::exception& e) {
        throw EstimatorError(std::string(c.id()), e.what());
    }
}

ByteString joined(const ByteString& y, const ByteString& x) {
    ByteString out = y;
    out.push_back(kConditionalSeparator);
    out.append(x);
    return out;
}

}  // namespace

void to_json(nlohmann::json& j, const ComplexityEstimate& e) {
    j = nlohmann::json{{"input_digest", e.input_digest}, {"compressor_id", e.compressor_id}, {"value_bits", e.value_bits}};
}

ComplexityEstimate k_hat(const ByteString& x, const Compressor& c) {
    return {compressed_bits(c, x.span()), "k_hat", std::string(c.id()), digest(x)};
}

ComplexityEstimate k_hat_cond(const ByteString& x, const ByteString& y, const Compressor& c) {
    const auto both = joined(y, x);
    const double value = std::max(compressed_bits(c, both.span()) - compressed_bits(c, y.span()), 0.0);
    return {value, "k_hat_cond", std::string(c.id()), digest(both)};
}

double ncd(const ByteString& x, const ByteString& y, const Compressor& c) {
    if (x.empty() || y.empty()) throw ArgumentError("ncd: inputs must be non-empty");
    ByteString xy = x;
    xy.append(y);
    const double cx = compressed_bits(c, x.span());
    const double cy = compressed_bits(c, y.span());
    const double cxy = compressed_bits(c, xy.span());
    return (cxy - std::min(cx, cy)) / std::max(cx, cy);
}

double dependence_ratio(const ByteString& x, const ByteString& y, const Compressor& c) {
    if (x.empty()) throw ArgumentError("dependence_ratio: x carries no information");
    const double kx = k_hat(x, c).value_bits;
    if (kx <= 0.0) throw ArgumentError("dependence_ratio: zero-complexity x");
    return k_hat_cond(x, y, c).value_bits / kx;
}

double Interrogator::dependence(const systems::OutputRecord& x, const systems::OutputRecord& y) const {
    const double kx = complexity_bits(x);
    if (kx <= 0.0) return 0.0;
    return conditional_bits(x, y) / kx;
}

double CompressorInterrogator::complexity_bits(const systems::OutputRecord& x) const {
    return k_hat(x.output, *compressor_).value_bits;
}

double CompressorInterrogator::conditional_bits(const systems::OutputRecord& x, const systems::OutputRecord& y) const {
    return k_hat_cond(x.output, y.output, *compressor_).value_bits;
}

double CompressorInterrogator::distance(const systems::OutputRecord& x, const systems::OutputRecord& y) const {
    return ncd(x.output, y.output, *compressor_);
}

double OracleInterrogator::complexity_bits(const systems::OutputRecord& x) const {
    return oracle_k(kind_, x).value_bits;
}

double OracleInterrogator::conditional_bits(const systems::OutputRecord& x, const systems::OutputRecord& y) const {
    return oracle_cond(kind_, x, y).value_bits;
}

double OracleInterrogator::distance(const systems::OutputRecord& x, const systems::OutputRecord& y) const {
    const double denom = std::max(complexity_bits(x), complexity_bits(y));
    if (denom <= 0.0) return 0.0;
    return std::max(conditional_bits(x, y), conditional_bits(y, x)) / denom;
}

std::unique_ptr<Interrogator> make_interrogator(std::string_view spec, systems::SystemKind kind) {
    if (spec == "oracle") return std::make_unique<OracleInterrogator>(kind);
    if (spec == "compressor") return std::make_unique<CompressorInterrogator>();
    constexpr std::string_view prefix = "compressor:";
    if (spec.starts_with(prefix)) return std::make_unique<CompressorInterrogator>(compressor_by_id(spec.substr(prefix.size())));
    throw ArgumentError("unknown interrogator: " + std::string(spec));
}

IndependenceMatrix independence_matrix(const std::vector<systems::OutputRecord>& outputs, const Interrogator& q) {
    IndependenceMatrix m;
    const std::size_t s = outputs.size();
    m.sample_size = s;
    m.dep_ratio.assign(s * s, 0.0);
    m.ncd.assign(s * s, 0.0);
    std::vector<double> k(s);
    for (std::size_t i = 0; i < s; ++i) k[i] = q.complexity_bits(outputs[i]);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            m.dep_ratio[i * s + j] = k[i] > 0.0 ? q.conditional_bits(outputs[i], outputs[j]) / k[i] : 0.0;
            m.ncd[i * s + j] = q.distance(outputs[i], outputs[j]);
        }
    }
    return m;
}

}  // namespace idensity::complexity
