#include "idensity/trace_io.hpp"

#include <string>

#include "json.hpp"

#include "idensity/errors.hpp"

namespace idensity::systems {

void write_jsonl(std::ostream& out, const Trace& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        const nlohmann::ordered_json line{{"step", i + 1},
                                          {"input_hex", t.records[i].input.hex()},
                                          {"output_hex", t.records[i].output.hex()},
                                          {"scratchpad_bits", i < t.step_scratchpad_bits.size() ? t.step_scratchpad_bits[i] : 0}};
        out << line.dump() << '\n';
    }
}

Trace read_jsonl(std::istream& in) {
    Trace t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto step = j.at("step").get<std::size_t>();
            if (step != t.size() + 1) throw ArgumentError("expected step " + std::to_string(t.size() + 1));
            OutputRecord r;
            r.input = ByteString::from_hex(j.at("input_hex").get<std::string>());
            r.output = ByteString::from_hex(j.at("output_hex").get<std::string>());
            r.steps = step;
            t.records.push_back(std::move(r));
            t.kinds.push_back(StepKind::Advance);
            const auto scratch = j.at("scratchpad_bits").get<std::uint64_t>();
            t.step_scratchpad_bits.push_back(scratch);
            t.scratchpad_bits = std::max(t.scratchpad_bits, scratch);
        } catch (const nlohmann::json::exception& e) {
            throw ArgumentError("trace line " + std::to_string(lineno) + ": " + e.what());
        } catch (const Error& e) {
            throw ArgumentError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

}  // namespace idensity::systems
