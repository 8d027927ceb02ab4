#include "tsprompt/metrics.hpp"

#include <cmath>

namespace tsprompt::metrics {

namespace {

void check_inputs(std::span<const double> pred, std::span<const double> actual) {
    if (pred.empty()) throw MetricError("metric over an empty sample");
    if (pred.size() != actual.size()) {
        throw MetricError("length mismatch: " + std::to_string(pred.size()) + " predictions vs " +
                          std::to_string(actual.size()) + " actuals");
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!std::isfinite(pred[i]) || !std::isfinite(actual[i])) throw MetricError("non-finite value in metric input");
    }
}

const std::vector<double>& actual_for(const Actuals& actuals, const std::string& id, int horizon) {
    const auto it = actuals.find(id);
    if (it == actuals.end()) throw AggregationError("no actual values for sample '" + id + "'");
    if (it->second.size() < static_cast<std::size_t>(horizon)) {
        throw AggregationError("sample '" + id + "' has " + std::to_string(it->second.size()) +
                               " actual values, horizon is " + std::to_string(horizon));
    }
    return it->second;
}

/// Metrics for one step over `ids`, skipping ids whose prediction is absent.
template <class PredFn>
void score_step(const std::vector<std::string>& ids, std::size_t step, const Actuals& actuals, int horizon,
                PredFn pred_of, std::optional<double>& rmse_out, std::optional<double>& mae_out, std::size_t* n_out) {
    std::vector<double> pred, actual;
    for (const auto& id : ids) {
        const std::optional<double> p = pred_of(id, step);
        if (!p) continue;
        pred.push_back(*p);
        actual.push_back(actual_for(actuals, id, horizon)[step]);
    }
    if (n_out) *n_out = pred.size();
    if (pred.empty()) return;
    rmse_out = rmse(pred, actual);
    mae_out = mae(pred, actual);
}

bool all_parsed(const extract::ParsedForecast& f) { return f.complete(); }

} // namespace

double rmse(std::span<const double> pred, std::span<const double> actual) {
    check_inputs(pred, actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - actual[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> actual) {
    check_inputs(pred, actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - actual[i]);
    return sum / static_cast<double>(pred.size());
}

std::set<std::string> common_subset(const ParsedRun& parsed) {
    std::set<std::string> common;
    bool first = true;
    for (const auto& [method, forecasts] : parsed) {
        std::set<std::string> ok;
        for (const auto& f : forecasts) {
            if (all_parsed(f)) ok.insert(f.sample_id);
        }
        if (first) {
            common = std::move(ok);
            first = false;
        } else {
            std::set<std::string> both;
            for (const auto& id : common) {
                if (ok.contains(id)) both.insert(id);
            }
            common = std::move(both);
        }
    }
    return common;
}

EvalReport score_run(const std::string& dataset_id, int horizon, const ParsedRun& parsed, const Actuals& actuals) {
    if (horizon < 1) throw AggregationError("horizon must be positive");
    EvalReport report;
    report.dataset_id = dataset_id;
    report.horizon = horizon;
    if (parsed.empty()) return report;

    std::vector<std::string> order;
    for (const auto& f : parsed.begin()->second) order.push_back(f.sample_id);
    const std::set<std::string> id_set(order.begin(), order.end());
    if (id_set.size() != order.size()) throw AggregationError("duplicate sample ids in parsed forecasts");

    for (const auto& [method, forecasts] : parsed) {
        std::set<std::string> ids;
        for (const auto& f : forecasts) {
            if (f.steps.size() != static_cast<std::size_t>(horizon)) {
                throw AggregationError("forecast for sample '" + f.sample_id + "' has " + std::to_string(f.steps.size()) +
                                       " steps, horizon is " + std::to_string(horizon));
            }
            ids.insert(f.sample_id);
        }
        if (ids != id_set || forecasts.size() != order.size()) {
            throw AggregationError(std::string(method_name(method)) + " covers a different sample-id set");
        }
    }
    for (const auto& id : order) actual_for(actuals, id, horizon);

    const auto common = common_subset(parsed);
    std::vector<std::string> common_order;
    for (const auto& id : order) {
        if (common.contains(id)) common_order.push_back(id);
    }
    report.n_samples = order.size();
    report.n_common = common_order.size();

    for (const auto& [method, forecasts] : parsed) {
        std::map<std::string, const extract::ParsedForecast*> by_id;
        for (const auto& f : forecasts) by_id[f.sample_id] = &f;
        const auto pred_of = [&](const std::string& id, std::size_t step) { return by_id.at(id)->steps[step]; };

        MethodScore score;
        score.key = std::string(method_name(method));
        score.label = std::string(method_label(method));
        score.method = method;
        score.n_samples = order.size();
        for (const auto& f : forecasts) {
            if (!all_parsed(f)) ++score.n_missing;
        }
        score.missing_rate =
            order.empty() ? 0.0 : static_cast<double>(score.n_missing) / static_cast<double>(order.size());
        score.steps.resize(static_cast<std::size_t>(horizon));
        for (std::size_t j = 0; j < score.steps.size(); ++j) {
            auto& s = score.steps[j];
            score_step(order, j, actuals, horizon, pred_of, s.rmse, s.mae, &s.n_scored);
            score_step(common_order, j, actuals, horizon, pred_of, s.rmse_star, s.mae_star, nullptr);
        }
        report.methods.push_back(std::move(score));
    }
    return report;
}

void add_reference(EvalReport& report, const std::string& key, const std::map<std::string, std::vector<double>>& forecasts,
                   const Actuals& actuals, const std::set<std::string>& common, const std::vector<std::string>& order) {
    const auto pred_of = [&](const std::string& id, std::size_t step) -> std::optional<double> {
        const auto it = forecasts.find(id);
        if (it == forecasts.end() || it->second.size() <= step) {
            throw AggregationError("reference " + key + " has no forecast for sample '" + id + "'");
        }
        return it->second[step];
    };
    std::vector<std::string> common_order;
    for (const auto& id : order) {
        if (common.contains(id)) common_order.push_back(id);
    }
    MethodScore score;
    score.key = key;
    score.label = key;
    score.n_samples = order.size();
    score.steps.resize(static_cast<std::size_t>(report.horizon));
    for (std::size_t j = 0; j < score.steps.size(); ++j) {
        auto& s = score.steps[j];
        score_step(order, j, actuals, report.horizon, pred_of, s.rmse, s.mae, &s.n_scored);
        score_step(common_order, j, actuals, report.horizon, pred_of, s.rmse_star, s.mae_star, nullptr);
    }
    report.references.push_back(std::move(score));
}

} // namespace tsprompt::metrics
