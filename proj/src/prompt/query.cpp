#include "tsprompt/assets.hpp"
#include "tsprompt/calendar.hpp"
#include "tsprompt/prompt.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

namespace tsprompt::prompt {

namespace {

using series::DomainKind;

constexpr std::array<DomainKind, 5> kDomains{DomainKind::Visitors, DomainKind::Temperature,
                                             DomainKind::ElectricityDaily, DomainKind::HouseholdCurrentHourly,
                                             DomainKind::Generic};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Replaces {name} placeholders in one pass; inserted text is never rescanned.
std::string substitute(std::string_view tmpl, const std::map<std::string_view, std::string>& fields) {
    std::string out;
    out.reserve(tmpl.size() + 128);
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const auto open = tmpl.find('{', pos);
        if (open == std::string_view::npos) break;
        const auto close = tmpl.find('}', open);
        if (close == std::string_view::npos) break;
        const auto it = fields.find(tmpl.substr(open + 1, close - open - 1));
        out.append(tmpl.substr(pos, open - pos));
        if (it == fields.end()) {
            out.append(tmpl.substr(open, close - open + 1));
        } else {
            out.append(it->second);
        }
        pos = close + 1;
    }
    out.append(tmpl.substr(std::min(pos, tmpl.size())));
    return out;
}

std::string step_plural(series::Step step) {
    if (step == series::kHourly) return "hours";
    if (step == series::kDaily) return "days";
    return "steps";
}

} // namespace

std::string format_value(double value) {
    char buf[64];
    if (std::fabs(value) < 1e15 && value == std::trunc(value)) {
        std::snprintf(buf, sizeof buf, "%.0f", value);
    } else {
        std::snprintf(buf, sizeof buf, "%.3f", value);
        std::string_view s(buf);
        if (s.find('.') != std::string_view::npos) {
            while (s.back() == '0') s.remove_suffix(1);
            if (s.back() == '.') s.remove_suffix(1);
        }
        std::string out(s);
        return out == "-0" ? "0" : out;
    }
    std::string out(buf);
    return out == "-0" ? "0" : out;
}

std::string format_values(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_value(values[i]);
    }
    return out;
}

QueryTemplate QueryTemplate::parse(std::string_view text) {
    QueryTemplate tmpl;
    bool has_context = false, has_single = false, has_multi = false;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        auto end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(begin, end - begin));
        begin = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw PromptError("template line without '=': '" + std::string(line) + "'");
        const auto key = trim(line.substr(0, eq));
        const std::string value(trim(line.substr(eq + 1)));
        if (key == "context") {
            tmpl.context = value;
            has_context = true;
        } else if (key == "single") {
            tmpl.single = value;
            has_single = true;
        } else if (key == "multi") {
            tmpl.multi = value;
            has_multi = true;
        } else {
            throw PromptError("unknown template key '" + std::string(key) + "'");
        }
    }
    if (!has_context || !has_single || !has_multi) {
        throw PromptError("template must define context, single and multi");
    }
    return tmpl;
}

std::string template_file_name(DomainKind kind) {
    switch (kind) {
    case DomainKind::Visitors: return "visitors.txt";
    case DomainKind::Temperature: return "temperature.txt";
    case DomainKind::ElectricityDaily: return "electricity_daily.txt";
    case DomainKind::HouseholdCurrentHourly: return "household_current_hourly.txt";
    case DomainKind::Generic: return "generic.txt";
    }
    return "generic.txt";
}

const TemplateRegistry& TemplateRegistry::builtin() {
    static const TemplateRegistry registry = [] {
        TemplateRegistry r;
        for (const auto kind : kDomains) {
            const auto text = assets::find("templates/" + template_file_name(kind));
            if (text) r.set(kind, QueryTemplate::parse(*text));
        }
        return r;
    }();
    return registry;
}

TemplateRegistry TemplateRegistry::with_overrides(const std::string& dir) {
    TemplateRegistry r = builtin();
    for (const auto kind : kDomains) {
        const auto path = std::filesystem::path(dir) / template_file_name(kind);
        if (std::filesystem::exists(path)) r.set(kind, QueryTemplate::parse(read_text_file(path.string())));
    }
    return r;
}

const QueryTemplate& TemplateRegistry::find(DomainKind kind) const {
    const auto it = templates_.find(kind);
    if (it == templates_.end()) {
        throw PromptError("no query template registered for domain " + std::string(series::to_string(kind)));
    }
    return it->second;
}

std::string render_context_query(const series::TimeSeries& series, int horizon, const TemplateRegistry& registry) {
    if (horizon < 1) throw PromptError("horizon must be positive");
    const auto& ctx = series.context();
    const auto& tmpl = registry.find(ctx.domain_kind);

    const std::map<std::string_view, std::string> fields{
        {"start", series::format_long_date(series.start())},
        {"end", series::format_long_date(series.last_timestamp())},
        {"next", series::format_long_date(series.timestamp_at(series.size()))},
        {"horizon", std::to_string(horizon)},
        {"step_plural", step_plural(series.step())},
        {"unit", ctx.unit_phrase},
        {"resolution", ctx.resolution_phrase},
        {"entity", ctx.entity_id},
        {"values", format_values(series.values())},
    };
    return substitute(tmpl.context + " " + (horizon == 1 ? tmpl.single : tmpl.multi), fields);
}

} // namespace tsprompt::prompt
