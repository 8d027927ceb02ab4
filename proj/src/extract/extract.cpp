#include "tsprompt/extract.hpp"

#include <algorithm>
#include <array>

namespace tsprompt::extract {

namespace {

using Run = std::vector<NumberToken>;

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string lowered(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = lower(c);
    return out;
}

std::vector<double> values_of(const Run& run, std::size_t first, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = first; i < first + count && i < run.size(); ++i) out.push_back(run[i].value);
    return out;
}

/// First list long enough for the horizon, else the longest one.
std::vector<double> pick_leading(const std::vector<Run>& runs, std::size_t horizon) {
    const Run* longest = nullptr;
    for (const auto& run : runs) {
        if (run.size() >= horizon) return values_of(run, 0, horizon);
        if (!longest || run.size() > longest->size()) longest = &run;
    }
    return longest ? values_of(*longest, 0, longest->size()) : std::vector<double>{};
}

/// End of the last "Final Answer" marker preceded by one to four asterisks.
std::optional<std::size_t> last_marker_end(std::string_view text) {
    const std::string low = lowered(text);
    constexpr std::string_view kPhrase = "final answer";
    std::size_t pos = low.rfind(kPhrase);
    while (pos != std::string::npos) {
        std::size_t k = pos;
        while (k > 0 && (text[k - 1] == ' ' || text[k - 1] == '\t')) --k;
        std::size_t stars = 0;
        while (k > 0 && text[k - 1] == '*') {
            --k;
            ++stars;
        }
        if (stars >= 1 && stars <= 4) {
            std::size_t end = pos + kPhrase.size();
            while (end < text.size() && (text[end] == ' ' || text[end] == '*' || text[end] == ':')) ++end;
            return end;
        }
        if (pos == 0) break;
        pos = low.rfind(kPhrase, pos - 1);
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 6> kLabels{"predicted values", "predicted value", "predictions",
                                                  "prediction",       "answers",         "answer"};

/// Position just after the first label word in the line, if any.
std::optional<std::size_t> label_end(std::string_view line) {
    const std::string low = lowered(line);
    std::optional<std::size_t> best_begin;
    std::size_t best_end = 0;
    for (const auto label : kLabels) {
        std::size_t pos = low.find(label);
        while (pos != std::string::npos) {
            const std::size_t end = pos + label.size();
            const bool bounded = (pos == 0 || !is_alpha(line[pos - 1])) && (end >= line.size() || !is_alpha(line[end]));
            if (bounded) {
                if (!best_begin || pos < *best_begin || (pos == *best_begin && end > best_end)) {
                    best_begin = pos;
                    best_end = end;
                }
                break;
            }
            pos = low.find(label, pos + 1);
        }
    }
    if (!best_begin) return std::nullopt;
    return best_end;
}

std::vector<double> labeled_line(std::string_view text, std::size_t horizon) {
    std::size_t line_end = text.size();
    while (true) {
        const std::size_t nl = line_end == 0 ? std::string_view::npos : text.rfind('\n', line_end - 1);
        const std::size_t line_begin = nl == std::string_view::npos ? 0 : nl + 1;
        if (const auto end = label_end(text.substr(line_begin, line_end - line_begin))) {
            auto values = pick_leading(value_runs(text, line_begin + *end, line_end), horizon);
            if (!values.empty()) return values;
        }
        if (line_begin == 0) break;
        line_end = line_begin - 1;
    }
    return {};
}

std::size_t final_sentence_begin(std::string_view text, std::size_t end) {
    std::size_t e = end;
    while (e > 0 && std::string_view(".!?*\"')]").find(text[e - 1]) != std::string_view::npos) --e;
    for (std::size_t k = e; k-- > 0;) {
        const char c = text[k];
        if (c == '\n') return k + 1;
        if ((c == '.' || c == '!' || c == '?') && k + 1 < text.size() && is_space(text[k + 1])) return k + 1;
    }
    return 0;
}

std::vector<double> tail_numbers(std::string_view text, std::size_t horizon) {
    if (horizon == 1) {
        std::size_t end = text.size();
        while (end > 0 && is_space(text[end - 1])) --end;
        const std::size_t begin = final_sentence_begin(text, end);
        std::vector<double> found;
        for (const auto& t : scan_numbers(text)) {
            if (t.role == TokenRole::Value && t.begin >= begin && t.end <= end) found.push_back(t.value);
        }
        return found.size() == 1 ? found : std::vector<double>{};
    }
    const auto runs = value_runs(text);
    for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
        if (it->size() >= horizon) return values_of(*it, it->size() - horizon, horizon);
    }
    for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
        if (it->size() >= 2) return values_of(*it, 0, it->size());
    }
    return {};
}

} // namespace

std::string_view to_string(Extractor extractor) {
    switch (extractor) {
    case Extractor::Marker: return "marker";
    case Extractor::LabeledLine: return "labeled-line";
    case Extractor::TailNumbers: return "tail-numbers";
    case Extractor::None: return "none";
    }
    return "none";
}

std::optional<Extractor> extractor_from_string(std::string_view name) {
    for (const auto e : {Extractor::Marker, Extractor::LabeledLine, Extractor::TailNumbers, Extractor::None}) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

bool ParsedForecast::complete() const {
    return !steps.empty() && std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.has_value(); });
}

std::size_t ParsedForecast::parsed_steps() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) { return s.has_value(); }));
}

ParsedForecast extract_forecast(std::string_view raw_response, int horizon) {
    return extract_forecast(raw_response, horizon, "", MethodKind::Baseline);
}

ParsedForecast extract_forecast(std::string_view raw_response, int horizon, std::string sample_id, MethodKind method) {
    ParsedForecast out;
    out.sample_id = std::move(sample_id);
    out.method = method;
    out.horizon = horizon;
    if (horizon < 1) return out;
    out.steps.assign(static_cast<std::size_t>(horizon), std::nullopt);
    const auto h = static_cast<std::size_t>(horizon);

    std::vector<double> values;
    if (const auto marker = last_marker_end(raw_response)) {
        values = pick_leading(value_runs(raw_response, *marker), h);
        if (!values.empty()) out.extractor_used = Extractor::Marker;
    }
    if (values.empty()) {
        values = labeled_line(raw_response, h);
        if (!values.empty()) out.extractor_used = Extractor::LabeledLine;
    }
    if (values.empty()) {
        values = tail_numbers(raw_response, h);
        if (!values.empty()) out.extractor_used = Extractor::TailNumbers;
    }
    for (std::size_t i = 0; i < values.size() && i < h; ++i) out.steps[i] = values[i];
    return out;
}

} // namespace tsprompt::extract
