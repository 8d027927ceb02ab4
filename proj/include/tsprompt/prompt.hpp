#pragma once

#include "tsprompt/method.hpp"
#include "tsprompt/sample_io.hpp"
#include "tsprompt/series.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsprompt::prompt {

class PromptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultMaxOutputTokens = 1024;
inline constexpr int kLstMaxOutputTokens = 1280;

constexpr int max_output_tokens_for(MethodKind kind) {
    return kind == MethodKind::ZeroShotLST ? kLstMaxOutputTokens : kDefaultMaxOutputTokens;
}

/// Format request appended to the baseline query.
inline constexpr std::string_view kBaselineFormatRequest = "Please answer the predicted value only.";

/// A worked demonstration prepended to one-shot queries.
struct ShotExample {
    std::string id;
    std::string example_query;  // starts with "Q:"
    std::string example_answer; // starts with "A:"

    /// Splits a golden file at its first line beginning with "A:".
    static ShotExample parse(std::string_view text, std::string id);
    void validate() const;
};

class PromptMethod {
public:
    /// Enforces: shot example iff one-shot kind; external text required for LST.
    static PromptMethod make(MethodKind kind, std::optional<ShotExample> shot = std::nullopt,
                             std::optional<std::string> external_text = std::nullopt);

    MethodKind kind() const noexcept { return kind_; }
    const std::optional<ShotExample>& shot_example() const noexcept { return shot_; }
    const std::optional<std::string>& external_text() const noexcept { return external_text_; }

private:
    PromptMethod(MethodKind kind, std::optional<ShotExample> shot, std::optional<std::string> external_text)
        : kind_(kind), shot_(std::move(shot)), external_text_(std::move(external_text)) {}

    MethodKind kind_;
    std::optional<ShotExample> shot_;
    std::optional<std::string> external_text_;
};

struct RenderedPrompt {
    std::string text;
    MethodKind method = MethodKind::Baseline;
    int max_output_tokens = kDefaultMaxOutputTokens;
    std::string sample_id;
    int horizon = 1;
};

/// Integers print without a decimal point; other values with at most three
/// decimals, trailing zeros trimmed.
std::string format_value(double value);
std::string format_values(std::span<const double> values);

struct QueryTemplate {
    std::string context;
    std::string single; // question for a one-step horizon
    std::string multi;  // question for longer horizons

    /// Parses "key = value" lines (context, single, multi); '#' starts a comment line.
    static QueryTemplate parse(std::string_view text);
};

class TemplateRegistry {
public:
    TemplateRegistry() = default;

    /// Registry built from the compiled-in data/templates files.
    static const TemplateRegistry& builtin();

    /// Builtin registry with any <domain>.txt files in `dir` taking precedence.
    static TemplateRegistry with_overrides(const std::string& dir);

    void set(series::DomainKind kind, QueryTemplate tmpl) { templates_[kind] = std::move(tmpl); }
    const QueryTemplate& find(series::DomainKind kind) const;

private:
    std::map<series::DomainKind, QueryTemplate> templates_;
};

/// File name of a domain's template, e.g. "household_current_hourly.txt".
std::string template_file_name(series::DomainKind kind);

/// Natural-language query embedding dates, values, entity and units, ending in
/// the forecasting question for the next `horizon` steps.
std::string render_context_query(const series::TimeSeries& series, int horizon,
                                 const TemplateRegistry& registry = TemplateRegistry::builtin());

/// Canonical method text. Baseline has none and is rejected.
std::string method_prompt_text(const PromptMethod& method);

/// Final query text:
///   Baseline   "Q: {context} Please answer the predicted value only."
///   zero-shot  "Q: {context}\n{method text}"
///   one-shot   "{example query}\n{example answer}\n" + zero-shot assembly
RenderedPrompt assemble_query(std::string_view context_query, const PromptMethod& method);

/// One-shot examples, LST text and templates for a run.
class PromptLibrary {
public:
    /// Compiled-in examples and templates; no LST text.
    static PromptLibrary builtin();

    /// Builtin library with files under `dir` (oneshot/*.txt, templates/*.txt) taking precedence.
    static PromptLibrary with_overrides(const std::string& dir);

    void set_lst_text(std::string text) { lst_text_ = std::move(text); }
    void load_lst_file(const std::string& path);
    const std::optional<std::string>& lst_text() const noexcept { return lst_text_; }

    const TemplateRegistry& templates() const noexcept { return templates_; }

    PromptMethod method(MethodKind kind) const;

    RenderedPrompt render(const series::Sample& sample, MethodKind kind, int horizon) const;

private:
    TemplateRegistry templates_;
    ShotExample cot_;
    ShotExample sarima_;
    std::optional<std::string> lst_text_;
};

/// Reads a whole text file, dropping a single trailing newline.
std::string read_text_file(const std::string& path);

} // namespace tsprompt::prompt
