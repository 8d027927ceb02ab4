#include "tsprompt/bench.hpp"
#include "tsprompt/extract.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace tsprompt;

struct RunFlags {
    std::string config;
    std::optional<std::string> dataset;
    std::optional<std::string> dataset_file;
    std::optional<std::string> methods;
    std::optional<std::string> backend;
    std::optional<int> horizon;
    std::optional<std::size_t> max_windows;
    std::optional<std::string> lst_prompt_file;
    std::optional<std::string> prompt_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<std::string> resume;
    std::optional<std::string> run_id;
    std::optional<double> fault_rate;
    std::optional<std::string> replay_path;
    std::optional<std::string> endpoint;
    std::optional<std::string> model;
    std::optional<std::size_t> stop_after;
    bool retry_failed = false;
    bool score = false;
};

bench::RunConfig build_run_config(const RunFlags& f) {
    auto c = f.config.empty() ? bench::RunConfig{} : bench::load_config_file(f.config);
    if (f.dataset) c.dataset = bench::parse_dataset(*f.dataset);
    if (f.dataset_file) c.dataset_file = *f.dataset_file;
    if (f.methods) c.methods = bench::parse_methods(*f.methods);
    if (f.backend) {
        const auto kind = gateway::backend_kind_from_string(*f.backend);
        if (!kind) throw bench::UsageError("unknown backend '" + *f.backend + "'; valid backends: http, replay, oracle");
        if (*kind != c.backend.kind()) {
            switch (*kind) {
            case gateway::BackendKind::Http: c.backend.settings = gateway::HttpSettings{}; break;
            case gateway::BackendKind::Replay: c.backend.settings = gateway::ReplaySettings{}; break;
            case gateway::BackendKind::Oracle: c.backend.settings = gateway::OracleSettings{}; break;
            }
        }
    }
    if (f.horizon) c.horizon = *f.horizon;
    if (f.max_windows) c.max_windows = *f.max_windows;
    if (f.lst_prompt_file) c.lst_prompt_file = *f.lst_prompt_file;
    if (f.prompt_dir) c.prompt_dir = *f.prompt_dir;
    if (f.seed) {
        c.seed = *f.seed;
        c.fault_seed.reset();
    }
    if (f.workers) c.workers = *f.workers;
    if (f.out_dir) c.out_dir = *f.out_dir;
    if (f.resume) c.resume = *f.resume;
    if (f.run_id) c.run_id = *f.run_id;
    if (f.stop_after) c.stop_after = *f.stop_after;
    if (f.retry_failed) c.retry_failed = true;

    if (f.fault_rate) {
        auto* oracle = std::get_if<gateway::OracleSettings>(&c.backend.settings);
        if (!oracle) throw bench::UsageError("--fault-rate applies to the oracle backend only");
        oracle->faults = gateway::OracleFaults::uniform(*f.fault_rate, oracle->faults.seed);
    }
    if (f.replay_path) {
        auto* replay = std::get_if<gateway::ReplaySettings>(&c.backend.settings);
        if (!replay) throw bench::UsageError("--replay-path needs --backend replay");
        replay->path = *f.replay_path;
    }
    if (f.endpoint || f.model) {
        auto* http = std::get_if<gateway::HttpSettings>(&c.backend.settings);
        if (!http) throw bench::UsageError("--endpoint and --model need --backend http");
        if (f.endpoint) http->endpoint_url = *f.endpoint;
        if (f.model) http->model_name = *f.model;
    }
    return c;
}

void print_summary(const bench::RunSummary& s) {
    std::cout << "run " << s.run_id << " (" << s.run_dir << ")\n"
              << "  issued " << s.issued << ", done " << s.done << "/" << s.total << ", failed " << s.failed
              << ", pending " << s.pending;
    if (s.replay_gaps > 0) std::cout << ", replay gaps " << s.replay_gaps;
    std::cout << "\n";
}

void score_and_report(const std::string& run_dir, bool classical) {
    const auto report = bench::score_run_dir(run_dir, {classical});
    bench::write_report_files(report, run_dir);
    std::cout << metrics::render_markdown(report);
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw bench::UsageError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for prompting methods in LLM time-series forecasting"};
    app.require_subcommand(1);

    // prepare-data
    auto* prepare = app.add_subcommand("prepare-data", "Build a samples file (IHEPC windows, short-series validation, synthetic)");
    std::string prep_dataset, prep_input, prep_output;
    int prep_horizon = 0;
    std::size_t prep_cap = 3000, prep_length = 96, prep_stride = 10, prep_count = 20;
    std::uint64_t prep_seed = 0;
    prepare->add_option("--dataset", prep_dataset, "Dataset: " + bench::valid_dataset_names())->required();
    prepare->add_option("--input", prep_input, "Raw IHEPC text file, or samples JSONL for sg/ct/ecl");
    prepare->add_option("--output", prep_output, "Output samples JSONL")->required();
    prepare->add_option("--horizon", prep_horizon, "Target steps per sample (default by dataset)");
    prepare->add_option("--max-windows", prep_cap, "Cap on IHEPC windows")->capture_default_str();
    prepare->add_option("--window-length", prep_length, "Window length")->capture_default_str();
    prepare->add_option("--stride", prep_stride, "Window stride")->capture_default_str();
    prepare->add_option("--count", prep_count, "Synthetic sample count")->capture_default_str();
    prepare->add_option("--seed", prep_seed, "Synthetic seed")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "Issue every pending (sample, method) prompt of a run");
    RunFlags rf;
    run->add_option("--config", rf.config, "JSON config with dataset, methods, backend, faults, prompts, run sections");
    run->add_option("--dataset", rf.dataset, "Dataset: " + bench::valid_dataset_names());
    run->add_option("--dataset-file", rf.dataset_file, "Samples JSONL written by prepare-data");
    run->add_option("--methods", rf.methods, "Comma-separated methods or 'all': " + valid_method_names());
    run->add_option("--backend", rf.backend, "http, replay or oracle");
    run->add_option("--horizon", rf.horizon, "Forecast horizon");
    run->add_option("--max-windows", rf.max_windows, "Use at most this many samples");
    run->add_option("--lst-prompt-file", rf.lst_prompt_file, "Text file holding the LST prompt");
    run->add_option("--prompt-dir", rf.prompt_dir, "Directory overriding templates/ and oneshot/ files");
    run->add_option("--seed", rf.seed, "Seed for synthetic data and oracle faults");
    run->add_option("--workers", rf.workers, "Concurrent requests");
    run->add_option("--out-dir", rf.out_dir, "Directory holding run directories");
    run->add_option("--resume", rf.resume, "Continue the run with this id");
    run->add_option("--run-id", rf.run_id, "Id for a new run");
    run->add_option("--fault-rate", rf.fault_rate, "Oracle: probability for every fault kind");
    run->add_option("--replay-path", rf.replay_path, "Replay: exchange log of a previous run");
    run->add_option("--endpoint", rf.endpoint, "Http: chat-completions URL");
    run->add_option("--model", rf.model, "Http: model name");
    run->add_option("--stop-after", rf.stop_after, "Stop after issuing this many requests");
    run->add_flag("--retry-failed", rf.retry_failed, "Also reissue tasks whose requests failed");
    run->add_flag("--score", rf.score, "Score the run when it finishes");

    // score
    auto* score = app.add_subcommand("score", "Extract forecasts from a run's exchange log and compute the report");
    std::string score_dir;
    bool no_classical = false;
    score->add_option("run-dir", score_dir, "Run directory")->required();
    score->add_flag("--no-classical", no_classical, "Leave out the classical reference rows");

    // report
    auto* report = app.add_subcommand("report", "Render a report.json as markdown or CSV");
    std::string report_input, report_format = "md", report_output;
    report->add_option("input", report_input, "report.json")->required();
    report->add_option("--format", report_format, "md or csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
    report->add_option("--output", report_output, "Write here instead of stdout");

    // tokens
    auto* tokens = app.add_subcommand("tokens", "Numeric token split statistics for a dataset, or for single numbers");
    std::string tokens_file;
    std::vector<std::string> tokens_numbers;
    tokens->add_option("--dataset-file", tokens_file, "Samples JSONL");
    tokens->add_option("--number", tokens_numbers, "Split these numerals");

    // oracle-demo
    auto* demo = app.add_subcommand("oracle-demo", "Offline end-to-end pipeline on synthetic data with the oracle backend");
    bench::DemoOptions demo_opts;
    std::vector<double> demo_rates;
    demo->add_option("--out-dir", demo_opts.out_dir, "Output directory")->capture_default_str();
    demo->add_option("--seed", demo_opts.seed, "Seed")->capture_default_str();
    demo->add_option("--samples", demo_opts.samples, "Number of synthetic samples")->capture_default_str();
    demo->add_option("--workers", demo_opts.workers, "Concurrent requests")->capture_default_str();
    demo->add_option("--fault-rates", demo_rates, "Fault rates, one run each (default 0 0.1)")->delimiter(',');
    demo->add_option("--lst-prompt-file", demo_opts.lst_prompt_file, "LST prompt text (builtin stand-in otherwise)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*prepare) {
            bench::PrepareOptions o;
            o.dataset = bench::parse_dataset(prep_dataset);
            o.input = prep_input;
            o.output = prep_output;
            o.horizon = prep_horizon > 0 ? prep_horizon : bench::default_horizon(o.dataset);
            o.windows = {prep_length, prep_stride, prep_cap};
            o.synthetic_count = prep_count;
            o.seed = prep_seed;
            const auto result = bench::prepare_data(o);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "wrote " << result.samples << " samples to " << o.output << "\n";
        } else if (*run) {
            const auto config = build_run_config(rf);
            const auto summary = bench::run_benchmark(config);
            print_summary(summary);
            if (rf.score) score_and_report(summary.run_dir, true);
        } else if (*score) {
            score_and_report(score_dir, !no_classical);
        } else if (*report) {
            const auto r = metrics::report_from_json(nlohmann::json::parse(read_all(report_input)));
            const auto text = report_format == "csv" ? metrics::render_csv(r) : metrics::render_markdown(r);
            if (report_output.empty()) {
                std::cout << text;
            } else {
                std::ofstream(report_output, std::ios::binary | std::ios::trunc) << text;
            }
        } else if (*tokens) {
            if (tokens_file.empty() && tokens_numbers.empty()) {
                throw bench::UsageError("tokens needs --dataset-file or --number");
            }
            for (const auto& n : tokens_numbers) {
                const auto parts = extract::numeric_token_split(n);
                std::cout << n << " -> ";
                for (std::size_t i = 0; i < parts.size(); ++i) std::cout << (i ? "|" : "") << parts[i];
                std::cout << "\n";
            }
            if (!tokens_file.empty()) std::cout << bench::token_report(series::read_samples(tokens_file));
        } else if (*demo) {
            if (!demo_rates.empty()) demo_opts.fault_rates = demo_rates;
            for (const auto& r : bench::oracle_demo(demo_opts)) {
                std::cout << "## Fault rate " << r.fault_rate << " (" << r.run_dir << ")\n\n" << r.markdown << "\n";
            }
        }
    } catch (const bench::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
