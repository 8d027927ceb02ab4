#include "tsprompt/metrics.hpp"

#include <cstdio>
#include <functional>
#include <sstream>

namespace tsprompt::metrics {

namespace {

using nlohmann::json;

std::string fixed6(std::optional<double> v) {
    if (!v) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string full(std::optional<double> v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string row_label(const MethodScore& m) { return m.method ? m.label : m.label + " (reference)"; }

void step_table(std::ostringstream& out, const EvalReport& r, const std::string& title,
                const std::function<std::optional<double>(const StepScore&)>& cell) {
    out << "## " << title << "\n\n| Method |";
    for (int j = 1; j <= r.horizon; ++j) out << " " << j << " |";
    out << "\n|---|";
    for (int j = 1; j <= r.horizon; ++j) out << "---|";
    out << "\n";
    const auto row = [&](const MethodScore& m) {
        out << "| " << row_label(m) << " |";
        for (const auto& s : m.steps) out << " " << fixed6(cell(s)) << " |";
        out << "\n";
    };
    for (const auto& m : r.methods) row(m);
    for (const auto& m : r.references) row(m);
    out << "\n";
}

json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json score_to_json(const MethodScore& m) {
    json steps = json::array();
    for (const auto& s : m.steps) {
        steps.push_back({{"rmse", opt(s.rmse)},
                         {"mae", opt(s.mae)},
                         {"n_scored", s.n_scored},
                         {"rmse_star", opt(s.rmse_star)},
                         {"mae_star", opt(s.mae_star)}});
    }
    return {{"key", m.key},
            {"label", m.label},
            {"steps", steps},
            {"n_samples", m.n_samples},
            {"n_missing", m.n_missing},
            {"missing_rate", m.missing_rate}};
}

MethodScore score_from_json(const json& j, bool reference) {
    MethodScore m;
    m.key = j.at("key").get<std::string>();
    m.label = j.at("label").get<std::string>();
    if (!reference) {
        m.method = find_method(m.key);
        if (!m.method) throw MetricError("unknown method '" + m.key + "' in report");
    }
    for (const auto& s : j.at("steps")) {
        m.steps.push_back({opt_from(s, "rmse"), opt_from(s, "mae"), s.at("n_scored").get<std::size_t>(),
                           opt_from(s, "rmse_star"), opt_from(s, "mae_star")});
    }
    m.n_samples = j.at("n_samples").get<std::size_t>();
    m.n_missing = j.at("n_missing").get<std::size_t>();
    m.missing_rate = j.at("missing_rate").get<double>();
    return m;
}

} // namespace

std::string render_markdown(const EvalReport& r) {
    std::ostringstream out;
    out << "# Evaluation report: " << r.dataset_id << "\n\n";
    out << "Horizon " << r.horizon << ", " << r.n_samples << " samples, common subset " << r.n_common
        << " (samples parsed under every prompting method).\n\n";

    if (r.horizon == 1) {
        out << "| Method | RMSE | MAE | RMSE* | MAE* | Missing rate |\n|---|---|---|---|---|---|\n";
        const auto row = [&](const MethodScore& m) {
            const auto& s = m.steps.front();
            out << "| " << row_label(m) << " | " << fixed6(s.rmse) << " | " << fixed6(s.mae) << " | "
                << fixed6(s.rmse_star) << " | " << fixed6(s.mae_star) << " | " << fixed6(m.missing_rate) << " |\n";
        };
        for (const auto& m : r.methods) row(m);
        for (const auto& m : r.references) row(m);
        out << "\nRMSE* and MAE* are computed over the common subset.\n";
        return out.str();
    }

    step_table(out, r, "RMSE per step", [](const StepScore& s) { return s.rmse; });
    step_table(out, r, "MAE per step", [](const StepScore& s) { return s.mae; });
    step_table(out, r, "RMSE* per step (common subset)", [](const StepScore& s) { return s.rmse_star; });
    step_table(out, r, "MAE* per step (common subset)", [](const StepScore& s) { return s.mae_star; });
    out << "## Missing rate\n\n| Method | Missing rate | Samples with a missing step |\n|---|---|---|\n";
    for (const auto& m : r.methods) {
        out << "| " << m.label << " | " << fixed6(m.missing_rate) << " | " << m.n_missing << " |\n";
    }
    return out.str();
}

std::string render_csv(const EvalReport& r) {
    std::ostringstream out;
    out << "dataset,method,step,n_scored,rmse,mae,rmse_star,mae_star,n_common,missing_rate\n";
    const auto rows = [&](const MethodScore& m) {
        for (std::size_t j = 0; j < m.steps.size(); ++j) {
            const auto& s = m.steps[j];
            out << csv_field(r.dataset_id) << "," << csv_field(m.key) << "," << j + 1 << "," << s.n_scored << ","
                << full(s.rmse) << "," << full(s.mae) << "," << full(s.rmse_star) << "," << full(s.mae_star) << ","
                << r.n_common << "," << full(m.missing_rate) << "\n";
        }
    };
    for (const auto& m : r.methods) rows(m);
    for (const auto& m : r.references) rows(m);
    return out.str();
}

nlohmann::json report_to_json(const EvalReport& r) {
    json methods = json::array();
    for (const auto& m : r.methods) methods.push_back(score_to_json(m));
    json references = json::array();
    for (const auto& m : r.references) references.push_back(score_to_json(m));
    return {{"dataset_id", r.dataset_id}, {"horizon", r.horizon},   {"n_samples", r.n_samples},
            {"n_common", r.n_common},     {"methods", methods}, {"references", references}};
}

EvalReport report_from_json(const nlohmann::json& j) {
    try {
        EvalReport r;
        r.dataset_id = j.at("dataset_id").get<std::string>();
        r.horizon = j.at("horizon").get<int>();
        r.n_samples = j.at("n_samples").get<std::size_t>();
        r.n_common = j.at("n_common").get<std::size_t>();
        for (const auto& m : j.at("methods")) r.methods.push_back(score_from_json(m, false));
        if (j.contains("references")) {
            for (const auto& m : j.at("references")) r.references.push_back(score_from_json(m, true));
        }
        return r;
    } catch (const json::exception& e) {
        throw MetricError(std::string("malformed report: ") + e.what());
    }
}

} // namespace tsprompt::metrics
