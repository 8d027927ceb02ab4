#pragma once

#include "tsprompt/extract.hpp"
#include "tsprompt/method.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsprompt::metrics {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs of score_run disagree (sample ids, horizons, missing actuals).
class AggregationError : public MetricError {
public:
    using MetricError::MetricError;
};

/// sqrt(mean((p - a)^2)); equal nonzero lengths, finite values.
double rmse(std::span<const double> pred, std::span<const double> actual);
/// mean(|p - a|)
double mae(std::span<const double> pred, std::span<const double> actual);

struct StepScore {
    std::optional<double> rmse; // absent when no sample parsed this step
    std::optional<double> mae;
    std::size_t n_scored = 0;
    std::optional<double> rmse_star; // over the common subset; absent when it is empty
    std::optional<double> mae_star;
};

struct MethodScore {
    std::string key;   // method machine name, or the classical method description
    std::string label; // report row label
    std::optional<MethodKind> method; // empty for reference rows
    std::vector<StepScore> steps;     // one per horizon step
    std::size_t n_samples = 0;
    std::size_t n_missing = 0; // samples with at least one missing step
    double missing_rate = 0.0;
};

struct EvalReport {
    std::string dataset_id;
    int horizon = 1;
    std::size_t n_samples = 0;
    std::size_t n_common = 0;
    std::vector<MethodScore> methods;    // prompting methods in table order
    std::vector<MethodScore> references; // classical baselines, never missing
};

using ParsedRun = std::map<MethodKind, std::vector<extract::ParsedForecast>>;
using Actuals = std::map<std::string, std::vector<double>>;

/// Ids for which every method has all steps parsed.
std::set<std::string> common_subset(const ParsedRun& parsed);

/// Per-step RMSE/MAE over parsed samples, missing rates, and star metrics over
/// the common subset. Sample order is taken from the first method's list.
EvalReport score_run(const std::string& dataset_id, int horizon, const ParsedRun& parsed, const Actuals& actuals);

/// Appends a classical baseline row scored on all samples, with star metrics
/// over the report's common subset. `forecasts` must cover every sample.
void add_reference(EvalReport& report, const std::string& key, const std::map<std::string, std::vector<double>>& forecasts,
                   const Actuals& actuals, const std::set<std::string>& common, const std::vector<std::string>& order);

/// Human tables, six decimals.
std::string render_markdown(const EvalReport& report);

/// One row per (method, step), full precision:
/// dataset,method,step,n_scored,rmse,mae,rmse_star,mae_star,n_common,missing_rate
std::string render_csv(const EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

} // namespace tsprompt::metrics
