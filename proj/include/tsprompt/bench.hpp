#pragma once

#include "tsprompt/extract.hpp"
#include "tsprompt/gateway.hpp"
#include "tsprompt/method.hpp"
#include "tsprompt/metrics.hpp"
#include "tsprompt/sample_io.hpp"
#include "tsprompt/series.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsprompt::bench {

/// Bad names or flag combinations on the command line or in a config file.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BenchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Datasets

enum class Dataset { SG, CT, ECL, IHEPC, Synthetic };

std::string_view to_string(Dataset dataset);
std::string valid_dataset_names();
/// Throws UsageError listing the valid names.
Dataset parse_dataset(std::string_view name);
/// Comma-separated method names, or "all". Throws UsageError listing the valid names.
std::vector<MethodKind> parse_methods(std::string_view list);

/// 6 for IHEPC and synthetic hourly windows, 1 for the short-series datasets.
int default_horizon(Dataset dataset);
series::DomainKind domain_of(Dataset dataset);

/// Noisy trend-plus-daily-cycle hourly series with the following `horizon`
/// values as targets. Values are rounded to three decimals.
std::vector<series::Sample> synthetic_samples(std::size_t count, std::size_t length, int horizon, std::uint64_t seed);

struct PrepareOptions {
    Dataset dataset = Dataset::IHEPC;
    std::string input;  // IHEPC raw text, or a samples JSONL file for sg/ct/ecl
    std::string output; // samples JSONL
    int horizon = 6;
    series::WindowSpec windows{96, 10, 3000};
    std::size_t synthetic_count = 20;
    std::uint64_t seed = 0;
};

struct PrepareResult {
    std::size_t samples = 0;
    std::vector<std::string> warnings;
};

/// IHEPC: minute log → hourly series → windows with the next `horizon` hours
/// as targets. sg/ct/ecl: validated passthrough. synthetic: generated.
PrepareResult prepare_data(const PrepareOptions& options);

// ---------------------------------------------------------------------------
// Runs

struct RunConfig {
    Dataset dataset = Dataset::Synthetic;
    std::string dataset_file; // samples JSONL; unused for synthetic
    std::optional<int> horizon;
    std::optional<std::size_t> max_windows; // cap on the number of samples used
    std::size_t synthetic_count = 20;
    std::vector<MethodKind> methods{kAllMethods.begin(), kAllMethods.end()};
    gateway::BackendConfig backend;
    std::optional<std::uint64_t> fault_seed; // oracle seed; defaults to `seed`
    std::string prompt_dir;
    std::string lst_prompt_file;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir = "runs";
    std::optional<std::string> resume; // run id
    std::optional<std::string> run_id; // id for a new run; generated when absent
    bool retry_failed = false;
    std::optional<std::size_t> stop_after; // stop after issuing this many requests

    int effective_horizon() const { return horizon.value_or(default_horizon(dataset)); }

    /// Sections: dataset, methods, backend, faults, prompts, run.
    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

RunConfig load_config_file(const std::string& path);

enum class TaskStatus { Pending, Done, Failed };

std::string_view to_string(TaskStatus status);

/// Static description of a run, written once when the run is created. Task
/// status is derived from the exchange log on load.
struct RunManifest {
    std::string run_id;
    std::string created_at;
    std::string dataset_id;
    int horizon = 1;
    std::vector<MethodKind> methods;
    nlohmann::json backend; // BackendConfig::to_json
    std::string prompt_dir;
    std::string lst_prompt_file;
    std::vector<std::string> sample_ids;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

using TaskKey = std::pair<std::string, MethodKind>;

/// Done when a successful exchange exists, Failed when only failures do,
/// Pending otherwise. Covers the full sample × method cross product.
std::map<TaskKey, TaskStatus> derive_status(const RunManifest& manifest,
                                            const std::vector<gateway::ModelExchange>& exchanges);

struct RunSummary {
    std::string run_id;
    std::string run_dir;
    std::size_t total = 0;
    std::size_t done = 0;
    std::size_t failed = 0;
    std::size_t pending = 0;
    std::size_t issued = 0; // requests made by this invocation
    std::size_t replay_gaps = 0;
};

/// Files inside a run directory.
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kSamplesFile = "samples.jsonl";
inline constexpr std::string_view kExchangesFile = "exchanges.jsonl";
inline constexpr std::string_view kParsedFile = "parsed.jsonl";
inline constexpr std::string_view kReportFile = "report.json";

/// Creates (or resumes) a run under out_dir and issues every Pending task with
/// `workers` threads. Configuration problems, including a missing LST text,
/// are raised before any request.
RunSummary run_benchmark(const RunConfig& config);

struct ScoreOptions {
    bool include_classical = true;
};

/// Pure function of the run directory: extracts every task's latest successful
/// response (Pending and Failed tasks count as fully missing), writes
/// parsed.jsonl and report.json, and returns the report.
metrics::EvalReport score_run_dir(const std::string& run_dir, const ScoreOptions& options = {});

/// report.md and report.csv next to report.json.
void write_report_files(const metrics::EvalReport& report, const std::string& dir);

nlohmann::json parsed_to_json(const extract::ParsedForecast& parsed);

// ---------------------------------------------------------------------------
// Offline demo and diagnostics

struct DemoOptions {
    std::string out_dir = "runs";
    std::size_t samples = 200;
    std::size_t length = 96;
    int horizon = 6;
    std::vector<double> fault_rates{0.0, 0.1};
    std::uint64_t seed = 7;
    int workers = 1;
    std::string lst_prompt_file; // builtin stand-in text when empty
};

struct DemoRun {
    double fault_rate = 0.0;
    std::string run_dir;
    metrics::EvalReport report;
    std::string markdown;
    std::string csv;
};

/// Synthetic hourly samples whose targets are the oracle's own forecasts
/// (daily-cycle hint, as the oracle reads from "in each hour").
std::vector<series::Sample> demo_samples(std::size_t count, std::size_t length, int horizon, std::uint64_t seed);

/// One fresh oracle run per fault rate over demo_samples, all seven methods.
std::vector<DemoRun> oracle_demo(const DemoOptions& options);

/// Per-dataset numeric token statistics as a markdown report.
std::string token_report(const std::vector<series::Sample>& samples);

} // namespace tsprompt::bench
