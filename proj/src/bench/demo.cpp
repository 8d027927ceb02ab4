#include "tsprompt/assets.hpp"
#include "tsprompt/bench.hpp"
#include "tsprompt/oracle.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsprompt::bench {

namespace fs = std::filesystem;

std::vector<series::Sample> demo_samples(std::size_t count, std::size_t length, int horizon, std::uint64_t seed) {
    auto samples = synthetic_samples(count, length, horizon, seed);
    for (auto& s : samples) s.target = gateway::oracle_forecast(s.series.values(), horizon, 24);
    return samples;
}

std::vector<DemoRun> oracle_demo(const DemoOptions& o) {
    const fs::path root = fs::path(o.out_dir) / "oracle-demo";
    fs::create_directories(root);

    const auto samples_path = (root / "samples.jsonl").string();
    series::write_samples(samples_path, demo_samples(o.samples, o.length, o.horizon, o.seed));

    std::string lst_file = o.lst_prompt_file;
    if (lst_file.empty()) {
        const auto text = assets::find("lst/demo_standin.txt");
        if (!text) throw BenchError("builtin LST stand-in text is missing");
        lst_file = (root / "lst_standin.txt").string();
        std::ofstream(lst_file, std::ios::binary | std::ios::trunc) << *text;
    }

    std::vector<DemoRun> runs;
    for (const double rate : o.fault_rates) {
        char id[32];
        std::snprintf(id, sizeof id, "rate-%g", rate);
        fs::remove_all(root / id);

        RunConfig c;
        c.dataset = Dataset::Synthetic;
        c.dataset_file = samples_path;
        c.horizon = o.horizon;
        c.backend.settings = gateway::OracleSettings{gateway::OracleFaults::uniform(rate, o.seed)};
        c.seed = o.seed;
        c.lst_prompt_file = lst_file;
        c.workers = o.workers;
        c.out_dir = root.string();
        c.run_id = id;
        const auto summary = run_benchmark(c);
        if (summary.pending != 0 || summary.failed != 0) {
            throw BenchError("oracle demo run " + std::string(id) + " left unfinished tasks");
        }

        DemoRun run;
        run.fault_rate = rate;
        run.run_dir = summary.run_dir;
        run.report = score_run_dir(summary.run_dir);
        write_report_files(run.report, summary.run_dir);
        run.markdown = metrics::render_markdown(run.report);
        run.csv = metrics::render_csv(run.report);
        runs.push_back(std::move(run));
    }
    return runs;
}

std::string token_report(const std::vector<series::Sample>& samples) {
    std::size_t numbers = 0;
    std::size_t tokens = 0;
    std::map<std::size_t, std::size_t> histogram;
    std::vector<std::pair<std::string, std::string>> examples;
    std::set<std::string> seen;
    for (const auto& s : samples) {
        for (const double v : s.series.values()) {
            const auto text = prompt::format_value(v);
            const auto parts = extract::numeric_token_split(text);
            ++numbers;
            tokens += parts.size();
            ++histogram[parts.size()];
            if (examples.size() < 8 && parts.size() > 1 && seen.insert(text).second) {
                std::string joined;
                for (std::size_t i = 0; i < parts.size(); ++i) joined += (i ? "|" : "") + parts[i];
                examples.emplace_back(text, joined);
            }
        }
    }
    std::ostringstream out;
    out << "# Numeric token split\n\n";
    out << "Samples " << samples.size() << ", numbers " << numbers << ", tokens " << tokens;
    if (numbers > 0) {
        char mean[32];
        std::snprintf(mean, sizeof mean, "%.3f", static_cast<double>(tokens) / static_cast<double>(numbers));
        out << ", mean tokens per number " << mean;
    }
    out << ".\n\n| Tokens per number | Numbers |\n|---|---|\n";
    for (const auto& [k, count] : histogram) out << "| " << k << " | " << count << " |\n";
    if (!examples.empty()) {
        out << "\n| Number | Split |\n|---|---|\n";
        for (const auto& [text, split] : examples) out << "| " << text << " | " << split << " |\n";
    }
    return out.str();
}

} // namespace tsprompt::bench
