#pragma once

#include "tsprompt/series.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace tsprompt::series {

/// One forecasting sample: history plus (optionally) the values that followed.
struct Sample {
    std::string sample_id;
    TimeSeries series;
    std::vector<double> target;
};

/// Record layout, one JSON object per line:
///   {"sample_id", "domain_kind", "entity_id", "start_date", "step": "day"|"hour",
///    "values": [...], "target": [...], "unit_phrase"?, "resolution_phrase"?}
/// Only values, start_date, entity_id and domain_kind are required.
nlohmann::json sample_to_json(const Sample& sample);
Sample sample_from_json(const nlohmann::json& record, std::size_t line_no = 0);

std::vector<Sample> read_samples(const std::string& path);
void write_samples(const std::string& path, const std::vector<Sample>& samples);

} // namespace tsprompt::series
