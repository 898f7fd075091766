#include "idensity/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "idensity/complexity.hpp"
#include "idensity/contextuality.hpp"
#include "idensity/density.hpp"
#include "idensity/errors.hpp"
#include "idensity/prober.hpp"
#include "idensity/systems.hpp"
#include "idensity/trace_io.hpp"

namespace idensity::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string command;
    // system
    std::string kind = "multiplication";
    std::uint64_t n = 1;
    std::uint64_t m = 0;
    std::uint64_t b = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t cache_limit = 9;
    std::uint64_t redundant = 0;
    std::string value = "0";
    // sampling
    std::vector<std::uint64_t> n_grid;
    std::size_t sample_size = 50;
    double theta = std::numeric_limits<double>::quiet_NaN();
    std::string compressor{complexity::kReferenceCompressorId};
    std::string interrogator;
    std::string mode;
    // contextuality
    std::string input;
    std::string corpus;
    std::size_t steps = 20;
    double jump_factor = 3.0;
    double budget = 0.2;
    std::string trace_in;
    // probe
    std::string rule;
    std::uint64_t probe_n = 0;
    // blockhead
    std::uint64_t words = 100;
    std::uint64_t vocab = 10000;
    std::uint64_t bits = 13;
    // outputs
    std::string csv;
    std::string json;
    std::string samples;
    std::string svg;
    std::string trace_out;
    std::string dir;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// shortest text that round-trips
std::string fmt(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

ordered_json config_json(const RunConfig& c) {
    return ordered_json{{"command", c.command},
                        {"kind", c.kind},
                        {"n", c.n},
                        {"m", c.m},
                        {"b", c.b},
                        {"seed", c.seed_given ? ordered_json(c.seed) : ordered_json(nullptr)},
                        {"cache_limit", c.cache_limit},
                        {"redundant", c.redundant},
                        {"value", c.value},
                        {"n_grid", c.n_grid},
                        {"sample_size", c.sample_size},
                        {"theta", std::isnan(c.theta) ? ordered_json(nullptr) : ordered_json(c.theta)},
                        {"compressor", c.compressor},
                        {"interrogator", c.interrogator},
                        {"mode", c.mode},
                        {"input", c.input},
                        {"corpus", c.corpus},
                        {"steps", c.steps},
                        {"jump_factor", c.jump_factor},
                        {"budget", c.budget},
                        {"trace_in", c.trace_in},
                        {"rule", c.rule},
                        {"probe_n", c.probe_n},
                        {"words", c.words},
                        {"vocab", c.vocab},
                        {"bits", c.bits}};
}

/// Every artifact carries this block.
ordered_json provenance(const RunConfig& c, std::optional<double> theta) {
    const auto cfg = config_json(c);
    return ordered_json{{"config_hash", digest(ByteString(cfg.dump()))},
                        {"compressor_id", c.compressor},
                        {"theta", theta ? ordered_json(*theta) : ordered_json(nullptr)},
                        {"seed", c.seed_given ? ordered_json(c.seed) : ordered_json(nullptr)},
                        {"config", cfg}};
}

std::string provenance_comment(const ordered_json& prov) {
    std::ostringstream os;
    os << "# config_hash=" << prov["config_hash"].get<std::string>() << '\n';
    os << "# compressor_id=" << prov["compressor_id"].get<std::string>() << '\n';
    os << "# theta=" << (prov["theta"].is_null() ? std::string("none") : fmt(prov["theta"].get<double>())) << '\n';
    os << "# seed=" << (prov["seed"].is_null() ? std::string("none") : std::to_string(prov["seed"].get<std::uint64_t>())) << '\n';
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void require_seed(const RunConfig& c) {
    if (!c.seed_given) throw ConfigError(c.command + " samples inputs and needs --seed");
}

systems::SystemKind kind_of(const RunConfig& c) { return systems::kind_from_string(c.kind); }

systems::SystemParams params_of(const RunConfig& c) {
    systems::SystemParams p;
    p.n = c.n;
    p.m = c.m;
    p.b = c.b;
    if (c.seed_given) p.seed = c.seed;
    p.cache_limit = c.cache_limit;
    p.redundant_entries = c.redundant;
    p.constant_value = c.value;
    return p;
}

/// Lookup without an explicit m covers every pair of n-digit operands.
systems::SystemSpec build_system(const RunConfig& c) {
    const auto kind = kind_of(c);
    if (kind == systems::SystemKind::Lookup && c.m == 0) return density::build_at(kind, params_of(c), c.n);
    return systems::build(kind, params_of(c));
}

std::string interrogator_of(const RunConfig& c, systems::SystemKind kind) {
    const auto name = c.interrogator.empty() ? density::default_interrogator(kind) : c.interrogator;
    if (name == "compressor") return "compressor:" + c.compressor;
    return name;
}

const complexity::Compressor& compressor_of(const RunConfig& c) { return complexity::compressor_by_id(c.compressor); }

ordered_json sample_json(const density::ScanSample& s) {
    auto outs = ordered_json::array();
    for (const auto& r : s.outputs) {
        outs.push_back({{"input_hex", r.input.hex()}, {"output_hex", r.output.hex()}, {"steps", r.steps}});
    }
    return ordered_json{{"n", s.n}, {"domain", s.domain.str()}, {"n_eff_sampled", s.n_eff_sampled}, {"outputs", outs}};
}

ordered_json point_json(const density::DensityPoint& p) {
    return ordered_json{{"n", p.n}, {"c_bits", p.c_bits.str()}, {"log2_n_eff", p.log2_n_eff}, {"i_value", p.i_value}};
}

ordered_json verdict_json(const density::ScalingVerdict& v) {
    return ordered_json{{"category", density::to_string(v.category)},
                        {"c_slope", v.c_slope},
                        {"logn_slope", v.logn_slope},
                        {"i_trend", density::to_string(v.i_trend)}};
}

std::string points_csv(const std::vector<density::DensityPoint>& points) {
    std::ostringstream os;
    os << "n,c_bits,log2_n_eff,i_value\n";
    for (const auto& p : points) os << p.n << ',' << p.c_bits.str() << ',' << fmt(p.log2_n_eff) << ',' << fmt(p.i_value) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Commands

int cmd_measure(const RunConfig& c, std::ostream& out) {
    const auto kind = kind_of(c);
    const auto spec = build_system(c);
    const auto mode = c.mode.empty() ? density::default_mode(kind) : density::mode_from_string(c.mode);
    const auto q = complexity::make_interrogator(interrogator_of(c, kind), kind);
    const double theta = std::isnan(c.theta) ? q->default_theta() : c.theta;

    std::optional<density::ScanSample> sample;
    density::DensityPoint point;
    if (mode == density::NEffMode::DomainCount && !c.seed_given) {
        point = density::density_from_log2(spec.c_bits, density::log2_big(systems::count_domain(spec, c.n)), c.n);
    } else {
        if (mode == density::NEffMode::Sampled) require_seed(c);
        std::mt19937_64 rng(c.seed);
        const auto inputs = density::scan_inputs(spec, c.n, mode, c.sample_size, rng);
        auto [pt, s] = density::measure_at(spec, c.n, inputs, *q, theta, mode);
        point = pt;
        sample = std::move(s);
    }

    const auto prov = provenance(c, theta);
    out << provenance_comment(prov);
    out << "system = " << systems::to_string(kind) << '\n';
    out << "n = " << point.n << '\n';
    out << "C = " << point.c_bits.str() << " bits\n";
    out << "log2 N_eff = " << fmt(point.log2_n_eff) << '\n';
    out << "I = " << fmt(point.i_value) << '\n';

    ordered_json j{{"provenance", prov},
                   {"kind", systems::to_string(kind)},
                   {"interrogator", q->id()},
                   {"mode", density::to_string(mode)},
                   {"point", point_json(point)},
                   {"c_serialized_bits", spec.c_serialized_bits.str()}};
    if (sample) j["sample"] = sample_json(*sample);
    write_file(c.json, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
    require_seed(c);
    if (c.n_grid.size() < 3) throw ConfigError("scan needs an n grid of at least 3 points (--n-grid 2,4,8)");
    const auto kind = kind_of(c);
    density::ScanConfig sc;
    sc.kind = kind;
    sc.params = params_of(c);
    sc.n_grid = c.n_grid;
    sc.sample_size = c.sample_size;
    if (!std::isnan(c.theta)) sc.theta = c.theta;
    sc.seed = c.seed;
    sc.interrogator = interrogator_of(c, kind);
    if (!c.mode.empty()) sc.mode = density::mode_from_string(c.mode);

    const auto result = density::density_scan(sc);
    const auto verdict = density::classify(result.points);
    const auto prov = provenance(c, result.theta);

    std::ostringstream csv;
    csv << provenance_comment(prov);
    csv << "# kind=" << systems::to_string(kind) << '\n';
    csv << "# interrogator=" << result.interrogator_id << '\n';
    csv << "# mode=" << density::to_string(result.mode) << '\n';
    csv << points_csv(result.points);

    auto points = ordered_json::array();
    for (const auto& p : result.points) points.push_back(point_json(p));
    ordered_json j{{"provenance", prov},
                   {"kind", systems::to_string(kind)},
                   {"interrogator", result.interrogator_id},
                   {"mode", density::to_string(result.mode)},
                   {"points", points},
                   {"verdict", verdict_json(verdict)}};

    std::ostringstream samples;
    for (const auto& s : result.samples) samples << sample_json(s).dump() << '\n';

    if (c.csv.empty()) {
        out << csv.str();
    } else {
        write_file(c.csv, csv.str());
    }
    write_file(c.json, j.dump(2) + "\n");
    write_file(c.samples, samples.str());
    out << "verdict: " << verdict_json(verdict).dump() << '\n';
    return kExitOk;
}

std::vector<density::DensityPoint> parse_points_csv(const std::string& text) {
    std::vector<density::DensityPoint> points;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "n,c_bits,log2_n_eff,i_value") throw ConfigError("unexpected CSV header: " + line);
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cells.size() != 4) throw ConfigError("malformed CSV row: " + line);
        try {
            density::DensityPoint p;
            p.n = std::stoull(cells[0]);
            p.c_bits = BigInt(cells[1]);
            p.log2_n_eff = std::stod(cells[2]);
            p.i_value = std::stod(cells[3]);
            points.push_back(std::move(p));
        } catch (const std::exception&) {
            throw ConfigError("malformed CSV row: " + line);
        }
    }
    if (!header) throw ConfigError("no scan rows found");
    return points;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
    if (c.csv.empty()) throw ConfigError("classify reads a scan CSV (--csv)");
    const auto points = parse_points_csv(read_file(c.csv));
    const auto verdict = density::classify(points);
    ordered_json j{{"provenance", provenance(c, std::nullopt)}, {"source", c.csv}, {"verdict", verdict_json(verdict)}};
    out << verdict_json(verdict).dump() << '\n';
    write_file(c.json, j.dump(2) + "\n");
    return kExitOk;
}

systems::Trace trace_for(const RunConfig& c) {
    if (!c.trace_in.empty()) {
        std::istringstream in(read_file(c.trace_in));
        return systems::read_jsonl(in);
    }
    if (!c.input.empty()) {
        const auto spec = build_system(c);
        return systems::trace(spec, ByteString(c.input));
    }
    require_seed(c);
    std::mt19937_64 rng(c.seed);
    const auto corpus = c.corpus.empty() ? std::string("multiplication") : c.corpus;
    if (corpus == "multiplication") return contextuality::multiplication_trace(rng, c.steps);
    if (corpus == "text") return contextuality::text_trace(rng, c.steps);
    if (corpus == "random") return contextuality::random_block_trace(rng, c.steps);
    if (corpus == "repeated") return contextuality::repeated_trace(ByteString(c.value), c.steps);
    if (corpus == "switch") {
        auto first = contextuality::multiplication_trace(rng, c.steps);
        return contextuality::concatenate(first, contextuality::text_trace(rng, c.steps));
    }
    throw ConfigError("unknown corpus '" + corpus + "' (multiplication, text, random, repeated, switch)");
}

int cmd_contextuality(const RunConfig& c, std::ostream& out) {
    const auto trace = trace_for(c);
    const auto& comp = compressor_of(c);
    const auto profile = contextuality::contextuality_profile(trace, comp);
    const auto monotone = contextuality::check_monotone(profile, c.budget);
    std::vector<std::size_t> switches;
    if (trace.size() >= 6) switches = contextuality::detect_domain_switch(profile, c.jump_factor);

    const auto prov = provenance(c, std::nullopt);
    ordered_json steps = ordered_json::array();
    for (const auto& s : profile.steps) steps.push_back({{"index", s.index}, {"k_cond_bits", s.k_cond_bits}, {"x_value", s.x_value}});
    ordered_json j{{"provenance", prov},
                   {"trace_digest", profile.trace_digest},
                   {"steps", trace.size()},
                   {"monotone",
                    {{"pass", monotone.pass},
                     {"comparisons", monotone.comparisons},
                     {"violations", monotone.violations},
                     {"violation_fraction", monotone.violation_fraction},
                     {"budget", monotone.budget}}},
                   {"switch", {{"indices", switches}, {"jump_factor", c.jump_factor}}},
                   {"profile", steps}};

    if (!c.trace_out.empty()) {
        std::ostringstream t;
        systems::write_jsonl(t, trace);
        write_file(c.trace_out, t.str());
    }
    write_file(c.csv, provenance_comment(prov) + contextuality::to_csv(profile));
    write_file(c.json, j.dump(2) + "\n");

    out << provenance_comment(prov);
    out << "steps = " << trace.size() << '\n';
    out << "monotone = " << (monotone.pass ? "pass" : "fail") << " (" << monotone.violations.size() << '/'
        << monotone.comparisons << " violations, budget " << fmt(c.budget) << ")\n";
    out << "switch indices = " << ordered_json(switches).dump() << '\n';
    return kExitOk;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
    require_seed(c);
    const auto kind = kind_of(c);
    const auto spec = build_system(c);
    auto rule = prober::reference_rule(kind);
    if (!c.rule.empty()) {
        rule.advance_id = c.rule;
        rule.halt_id = c.rule + ".halt";
    }
    const auto n = c.probe_n == 0 ? c.n : c.probe_n;
    const auto report = prober::probe_knowing(spec, n, rule, c.seed, compressor_of(c));
    nlohmann::json rj = report;
    ordered_json j{{"provenance", provenance(c, std::nullopt)},
                   {"kind", systems::to_string(kind)},
                   {"rule", rule.advance_id},
                   {"n", report.n_probed},
                   {"steps_checked", report.steps_checked},
                   {"r_failures", report.r_failures},
                   {"h_verdict", prober::to_string(report.h_verdict)},
                   {"knowing", report.knowing},
                   {"input", report.input.str()},
                   {"evidence", report.evidence}};
    if (!report.refusal.empty()) j["refusal"] = report.refusal;
    write_file(c.json, j.dump(2) + "\n");
    out << j.dump(2) << '\n';
    return report.knowing ? kExitOk : kExitProbeDecisive;
}

int cmd_blockhead(const RunConfig& c, std::ostream& out) {
    const auto r = density::blockhead_metrics(c.words, c.vocab, c.bits);
    nlohmann::json rj = r;
    ordered_json j{{"provenance", provenance(c, std::nullopt)}};
    for (auto it = rj.begin(); it != rj.end(); ++it) j[it.key()] = it.value();
    out << "entries = " << density::scientific(density::Decimal(r.entries)) << '\n';
    out << "response_bits = " << r.response_bits << '\n';
    out << "C = " << density::scientific(density::Decimal(r.c_bits)) << " bits\n";
    out << "log2 N = " << (r.log2_n_integral ? std::to_string(r.response_bits) : r.log2_n.str(20)) << '\n';
    out << "I = " << density::scientific(r.i_value) << '\n';
    out << "C / 10^80 = " << density::scientific(r.atoms_ratio) << '\n';
    write_file(c.json, j.dump(2) + "\n");
    return kExitOk;
}

struct ReportRow {
    std::string file;
    std::string kind;
    std::vector<density::DensityPoint> points;
    ordered_json verdict;
};

std::string c_column(const ordered_json& v, const std::vector<density::DensityPoint>& pts) {
    double mean = 0.0;
    for (const auto& p : pts) mean += p.c_bits.convert_to<double>();
    mean /= static_cast<double>(pts.size());
    return std::abs(v["c_slope"].get<double>()) < 0.01 * mean ? "fixed" : "grows with n";
}

std::string svg_plot(const std::vector<ReportRow>& rows) {
    constexpr double W = 640, H = 400, L = 60, R = 160, T = 20, B = 40;
    static constexpr std::array<const char*, 8> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                       "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    double nmin = 1e300, nmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : rows) {
        for (const auto& p : r.points) {
            if (p.i_value <= 0.0) continue;
            nmin = std::min(nmin, static_cast<double>(p.n));
            nmax = std::max(nmax, static_cast<double>(p.n));
            ymin = std::min(ymin, std::log10(p.i_value));
            ymax = std::max(ymax, std::log10(p.i_value));
        }
    }
    if (nmax <= nmin) nmax = nmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double n) { return L + (n - nmin) / (nmax - nmin) * (W - L - R); };
    auto py = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    char buf[160];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    os << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", L, H - B, W - R, H - B);
    os << buf;
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", L, T, L, H - B);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">n</text>\n", (W - R + L) / 2, H - 8);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"8\" y=\"%.2f\" font-size=\"12\">log10 I</text>\n", T + 12);
    os << buf;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const char* color = colors[k % colors.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& p : rows[k].points) {
            if (p.i_value <= 0.0) continue;
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px(static_cast<double>(p.n)), py(std::log10(p.i_value)));
            os << buf;
            first = false;
        }
        os << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"%s\">", W - R + 10,
                      T + 16.0 * static_cast<double>(k + 1), color);
        os << buf << rows[k].kind << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

int cmd_report(const RunConfig& c, std::ostream& out) {
    if (c.dir.empty()) throw ConfigError("report needs --dir with scan verdict JSON files");
    if (!fs::is_directory(c.dir)) throw ConfigError("not a directory: " + c.dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(c.dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<ReportRow> rows;
    for (const auto& f : files) {
        ordered_json j;
        try {
            j = ordered_json::parse(read_file(f.string()));
        } catch (const ordered_json::exception&) {
            continue;
        }
        if (!j.contains("verdict") || !j.contains("points") || !j.contains("kind")) continue;
        ReportRow row;
        row.file = f.filename().string();
        row.kind = j["kind"].get<std::string>();
        row.verdict = j["verdict"];
        for (const auto& p : j["points"]) {
            density::DensityPoint dp;
            dp.n = p["n"].get<std::uint64_t>();
            dp.c_bits = BigInt(p["c_bits"].get<std::string>());
            dp.log2_n_eff = p["log2_n_eff"].get<double>();
            dp.i_value = p["i_value"].get<double>();
            row.points.push_back(std::move(dp));
        }
        if (!row.points.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("no scan artifacts in " + c.dir);

    std::ostringstream os;
    os << provenance_comment(provenance(c, std::nullopt));
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-14s %-14s %-12s %s\n", "system", "C(S)", "log2 N", "I scaling", "status");
    os << line;
    bool has_lookup = false;
    for (const auto& r : rows) {
        const double ls = r.verdict["logn_slope"].get<double>();
        std::snprintf(line, sizeof line, "%-20s %-14s %-14s %-12s %s\n", r.kind.c_str(), c_column(r.verdict, r.points).c_str(),
                      ls > 0 ? "grows with n" : "flat", r.verdict["i_trend"].get<std::string>().c_str(),
                      r.verdict["category"].get<std::string>().c_str());
        os << line;
        has_lookup = has_lookup || r.kind == "Lookup";
    }
    os << "\nLogarithms are base 2 throughout.";
    if (has_lookup) {
        const double i2 = std::log2(10000.0) / 70000.0;
        const double i10 = std::log10(10000.0) / 70000.0;
        os << " A 10,000-entry table of 7-bit products has I = " << fmt(i2)
           << "; the same ratio with a base-10 logarithm would be " << fmt(i10) << '.';
    }
    os << '\n';
    out << os.str();
    if (!c.json.empty()) write_file(c.json, os.str());
    if (!c.svg.empty()) write_file(c.svg, svg_plot(rows));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument plumbing

void add_system_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--kind", c.kind, "constant, lookup, xor, adder, addition, multiplication, prng, random, hybrid");
    sub->add_option("--n", c.n, "size parameter (digits, bit width, stream length)")->check(CLI::PositiveNumber);
    sub->add_option("--m", c.m, "lookup entries");
    sub->add_option("--b", c.b, "bits per lookup entry");
    sub->add_option("--cache-limit", c.cache_limit, "hybrid cache covers operands 0..L");
    sub->add_option("--redundant", c.redundant, "extra stored products in the multiplication system");
    sub->add_option("--value", c.value, "constant system output");
}

void add_common_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--seed", c.seed, "seed for every sampled quantity");
    sub->add_option("--compressor", c.compressor, "compressor id (bwt, deflate, xz)");
    sub->add_option("--json", c.json, "write the JSON report here");
}

void add_sampling_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--sample-size", c.sample_size, "outputs sampled per n");
    sub->add_option("--theta", c.theta, "independence threshold")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--interrogator", c.interrogator, "compressor or oracle");
    sub->add_option("--mode", c.mode, "domain, sampled or enumerated");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

/// Expands --config FILE into ordinary arguments; explicit arguments win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;

    const auto cfg = load_config(path);
    std::vector<std::string> out;
    const bool has_command = !rest.empty() && rest[0].rfind("--", 0) != 0;
    if (has_command) {
        out.push_back(rest[0]);
    } else {
        const auto it = cfg.find("command");
        if (it == cfg.end()) throw ConfigError("no command given on the command line or in " + path);
        out.push_back(it->second);
    }
    for (const auto& [key, value] : cfg) {
        if (key == "command") continue;
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        const bool overridden = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (overridden) continue;
        out.push_back(flag);
        out.push_back(value);
    }
    out.insert(out.end(), rest.begin() + (has_command ? 1 : 0), rest.end());
    return out;
}

}  // namespace

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ArgumentError("cannot read config " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const auto key = trim(t.substr(0, eq));
        if (key.empty()) throw ArgumentError(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Intelligence density measurements for reference computing systems", "idensity"};
    app.require_subcommand(1);

    auto* measure = app.add_subcommand("measure", "density of one system at one size");
    add_system_options(measure, c);
    add_common_options(measure, c);
    add_sampling_options(measure, c);

    auto* scan = app.add_subcommand("scan", "density over an n grid, with CSV and verdict JSON");
    add_system_options(scan, c);
    add_common_options(scan, c);
    add_sampling_options(scan, c);
    scan->add_option("--n-grid", c.n_grid, "strictly increasing sizes, e.g. 2,4,8")->delimiter(',');
    scan->add_option("--csv", c.csv, "write the scan CSV here (default: stdout)");
    scan->add_option("--samples", c.samples, "write the raw samples (JSON lines) here");

    auto* classify = app.add_subcommand("classify", "scaling verdict for an existing scan CSV");
    add_common_options(classify, c);
    classify->add_option("--csv", c.csv, "scan CSV to classify")->required();

    auto* ctx = app.add_subcommand("contextuality", "per-step contextuality profile, monotonicity and switch detection");
    add_system_options(ctx, c);
    add_common_options(ctx, c);
    ctx->add_option("--input", c.input, "run the system's trace on this input");
    ctx->add_option("--trace-in", c.trace_in, "read a JSON-lines trace");
    ctx->add_option("--corpus", c.corpus, "multiplication, text, random, repeated or switch");
    ctx->add_option("--steps", c.steps, "steps per generated trace segment");
    ctx->add_option("--jump-factor", c.jump_factor, "switch threshold multiple");
    ctx->add_option("--budget", c.budget, "allowed share of monotonicity violations");
    ctx->add_option("--csv", c.csv, "write the profile CSV here");
    ctx->add_option("--trace-out", c.trace_out, "write the trace as JSON lines");

    auto* probe = app.add_subcommand("probe", "replay a transition rule against a system at a chosen size");
    add_system_options(probe, c);
    add_common_options(probe, c);
    probe->add_option("--rule", c.rule, "transition rule id (default: the kind's reference rule)");
    probe->add_option("--probe-n", c.probe_n, "problem size to probe (default: --n)");

    auto* blockhead = app.add_subcommand("blockhead", "exact metrics of a conversation lookup table");
    add_common_options(blockhead, c);
    blockhead->add_option("--words", c.words, "conversation length in words")->check(CLI::PositiveNumber);
    blockhead->add_option("--vocab", c.vocab, "vocabulary size")->check(CLI::PositiveNumber);
    blockhead->add_option("--bits", c.bits, "bits per word")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "summary table over scan artifacts");
    add_common_options(report, c);
    report->add_option("--dir", c.dir, "directory holding scan verdict JSON files")->required();
    report->add_option("--svg", c.svg, "also write an SVG plot of I(n)");

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    auto* chosen = app.get_subcommands().front();
    c.command = chosen->get_name();
    c.seed_given = chosen->count("--seed") > 0;

    try {
        if (chosen == measure) return cmd_measure(c, out);
        if (chosen == scan) return cmd_scan(c, out);
        if (chosen == classify) return cmd_classify(c, out);
        if (chosen == ctx) return cmd_contextuality(c, out);
        if (chosen == probe) return cmd_probe(c, out);
        if (chosen == blockhead) return cmd_blockhead(c, out);
        return cmd_report(c, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Unsupported& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace idensity::cli
