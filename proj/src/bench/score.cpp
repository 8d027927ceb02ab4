#include "tsprompt/bench.hpp"
#include "tsprompt/classical.hpp"

#include <filesystem>
#include <fstream>

namespace tsprompt::bench {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BenchError("cannot write '" + path.string() + "'");
    out << content;
}

std::vector<classical::ForecastMethod> reference_methods(series::Step step) {
    if (step == series::kHourly) {
        return {classical::NaiveLast{}, classical::SeasonalNaive{24}, classical::Decomposed{24}};
    }
    if (step == series::kDaily) return {classical::NaiveLast{}, classical::SeasonalNaive{7}, classical::Decomposed{7}};
    return {classical::NaiveLast{}};
}

} // namespace

nlohmann::json parsed_to_json(const extract::ParsedForecast& p) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : p.steps) steps.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
    return {{"sample_id", p.sample_id},
            {"method", std::string(method_name(p.method))},
            {"horizon", p.horizon},
            {"steps", steps},
            {"extractor", std::string(extract::to_string(p.extractor_used))}};
}

metrics::EvalReport score_run_dir(const std::string& dir, const ScoreOptions& options) {
    const fs::path run_dir(dir);
    const auto manifest_path = run_dir / kManifestFile;
    if (!fs::exists(manifest_path)) throw UsageError("'" + dir + "' is not a run directory (no manifest.json)");
    std::ifstream in(manifest_path);
    const auto manifest = RunManifest::from_json(nlohmann::json::parse(in));
    const auto samples = series::read_samples((run_dir / kSamplesFile).string());
    const auto exchanges = gateway::ExchangeLog::read((run_dir / kExchangesFile).string());
    const int h = manifest.horizon;

    std::map<TaskKey, const gateway::ModelExchange*> latest;
    for (const auto& e : exchanges) {
        if (e.ok()) latest[{e.sample_id, e.method}] = &e;
    }

    metrics::ParsedRun parsed;
    std::string parsed_lines;
    for (const auto m : manifest.methods) {
        auto& list = parsed[m];
        for (const auto& s : samples) {
            const auto it = latest.find({s.sample_id, m});
            if (it != latest.end()) {
                list.push_back(extract::extract_forecast(it->second->raw_response, h, s.sample_id, m));
            } else {
                extract::ParsedForecast missing;
                missing.sample_id = s.sample_id;
                missing.method = m;
                missing.horizon = h;
                missing.steps.assign(static_cast<std::size_t>(h), std::nullopt);
                list.push_back(std::move(missing));
            }
            parsed_lines += parsed_to_json(list.back()).dump() + "\n";
        }
    }
    write_file(run_dir / kParsedFile, parsed_lines);

    metrics::Actuals actuals;
    std::vector<std::string> order;
    for (const auto& s : samples) {
        if (s.target.size() < static_cast<std::size_t>(h)) {
            throw BenchError("sample '" + s.sample_id + "' has " + std::to_string(s.target.size()) +
                             " target values; horizon is " + std::to_string(h));
        }
        actuals[s.sample_id] = s.target;
        order.push_back(s.sample_id);
    }

    auto report = metrics::score_run(manifest.dataset_id, h, parsed, actuals);

    if (options.include_classical && !samples.empty()) {
        const auto common = metrics::common_subset(parsed);
        for (const auto& method : reference_methods(samples.front().series.step())) {
            std::map<std::string, std::vector<double>> forecasts;
            try {
                for (const auto& s : samples) forecasts[s.sample_id] = classical::forecast(s.series.values(), h, method);
            } catch (const classical::ForecastError&) {
                continue; // history too short for this baseline
            }
            metrics::add_reference(report, classical::describe(method), forecasts, actuals, common, order);
        }
    }

    write_file(run_dir / kReportFile, metrics::report_to_json(report).dump(2) + "\n");
    return report;
}

void write_report_files(const metrics::EvalReport& report, const std::string& dir) {
    write_file(fs::path(dir) / "report.md", metrics::render_markdown(report));
    write_file(fs::path(dir) / "report.csv", metrics::render_csv(report));
}

} // namespace tsprompt::bench
