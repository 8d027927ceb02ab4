#include "tsprompt/sample_io.hpp"

#include "tsprompt/calendar.hpp"

#include <fstream>

namespace tsprompt::series {

using nlohmann::json;

namespace {

std::string step_name(Step step) {
    if (step == kDaily) return "day";
    if (step == kHourly) return "hour";
    return std::to_string(step.count()) + "s";
}

Step parse_step(const std::string& name) {
    if (name == "day") return kDaily;
    if (name == "hour") return kHourly;
    throw SeriesError("unknown step '" + name + "' (valid: day, hour)");
}

std::string as_id(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw SeriesError("entity_id must be a string or integer");
}

std::vector<double> as_values(const json& value, const char* field) {
    if (!value.is_array()) throw SeriesError(std::string(field) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) {
        if (!v.is_number()) throw SeriesError(std::string(field) + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

json sample_to_json(const Sample& sample) {
    const auto& s = sample.series;
    const auto& ctx = s.context();
    json j;
    j["sample_id"] = sample.sample_id;
    j["domain_kind"] = std::string(to_string(ctx.domain_kind));
    j["entity_id"] = ctx.entity_id;
    j["start_date"] = format_iso(s.start());
    j["step"] = step_name(s.step());
    j["unit_phrase"] = ctx.unit_phrase;
    j["resolution_phrase"] = ctx.resolution_phrase;
    j["values"] = s.values();
    j["target"] = sample.target;
    return j;
}

Sample sample_from_json(const json& record, std::size_t line_no) {
    const auto where = [&] { return line_no ? " (line " + std::to_string(line_no) + ")" : std::string{}; };
    try {
        for (const char* field : {"values", "start_date", "entity_id", "domain_kind"}) {
            if (!record.contains(field)) throw SeriesError(std::string("missing field '") + field + "'");
        }
        const auto kind = domain_kind_from_string(record.at("domain_kind").get<std::string>());
        const Step step = parse_step(record.value("step", std::string("day")));
        auto ctx = SeriesContext::defaults_for(kind, as_id(record.at("entity_id")), step);
        if (record.contains("unit_phrase")) ctx.unit_phrase = record.at("unit_phrase").get<std::string>();
        if (record.contains("resolution_phrase")) ctx.resolution_phrase = record.at("resolution_phrase").get<std::string>();

        Sample sample{
            record.contains("sample_id") ? as_id(record.at("sample_id")) : std::string{},
            TimeSeries(as_values(record.at("values"), "values"), parse_iso(record.at("start_date").get<std::string>()),
                       step, std::move(ctx)),
            record.contains("target") ? as_values(record.at("target"), "target") : std::vector<double>{},
        };
        return sample;
    } catch (const json::exception& e) {
        throw SeriesError(std::string("malformed sample record") + where() + ": " + e.what());
    } catch (const SeriesError& e) {
        throw SeriesError(std::string(e.what()) + where());
    }
}

std::vector<Sample> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SeriesError("cannot open sample file '" + path + "'");
    std::vector<Sample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SeriesError("invalid JSON on line " + std::to_string(line_no) + " of '" + path + "': " + e.what());
        }
        auto sample = sample_from_json(record, line_no);
        if (sample.sample_id.empty()) sample.sample_id = "s" + std::to_string(out.size());
        out.push_back(std::move(sample));
    }
    return out;
}

void write_samples(const std::string& path, const std::vector<Sample>& samples) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw SeriesError("cannot write sample file '" + path + "'");
    for (const auto& sample : samples) out << sample_to_json(sample).dump() << '\n';
    if (!out) throw SeriesError("write failed for '" + path + "'");
}

} // namespace tsprompt::series
