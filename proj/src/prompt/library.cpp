#include "tsprompt/assets.hpp"
#include "tsprompt/prompt.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace tsprompt::prompt {

namespace {

std::string_view strip_trailing_whitespace(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

ShotExample load_shot(const std::string& dir, std::string_view file, std::string id) {
    if (!dir.empty()) {
        const auto path = std::filesystem::path(dir) / "oneshot" / file;
        if (std::filesystem::exists(path)) return ShotExample::parse(read_text_file(path.string()), std::move(id));
    }
    const auto text = assets::find("oneshot/" + std::string(file));
    if (!text) throw PromptError("missing one-shot example asset '" + std::string(file) + "'");
    return ShotExample::parse(*text, std::move(id));
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PromptError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return text;
}

ShotExample ShotExample::parse(std::string_view text, std::string id) {
    const auto newline_a = text.find("\nA:");
    if (newline_a == std::string_view::npos) {
        throw PromptError("one-shot example '" + id + "' needs a Q: block followed by a line starting with A:");
    }
    const std::size_t answer_at = newline_a + 1;
    ShotExample shot{std::move(id), std::string(strip_trailing_whitespace(text.substr(0, answer_at))),
                     std::string(strip_trailing_whitespace(text.substr(answer_at)))};
    shot.validate();
    return shot;
}

void ShotExample::validate() const {
    if (!example_query.starts_with("Q:")) throw PromptError("one-shot example '" + id + "' query must start with Q:");
    if (!example_answer.starts_with("A:")) throw PromptError("one-shot example '" + id + "' answer must start with A:");
}

PromptMethod PromptMethod::make(MethodKind kind, std::optional<ShotExample> shot,
                                std::optional<std::string> external_text) {
    if (is_one_shot(kind) && !shot) {
        throw PromptError(std::string(method_name(kind)) + " requires a one-shot example");
    }
    if (!is_one_shot(kind) && shot) {
        throw PromptError(std::string(method_name(kind)) + " does not take a one-shot example");
    }
    if (kind == MethodKind::ZeroShotLST) {
        if (!external_text || external_text->empty()) {
            throw PromptError("zero-shot-lst requires the LST prompt text (pass --lst-prompt-file)");
        }
    } else if (external_text) {
        throw PromptError(std::string(method_name(kind)) + " does not take external prompt text");
    }
    if (shot) shot->validate();
    return PromptMethod(kind, std::move(shot), std::move(external_text));
}

PromptLibrary PromptLibrary::builtin() { return with_overrides(""); }

PromptLibrary PromptLibrary::with_overrides(const std::string& dir) {
    PromptLibrary lib;
    lib.templates_ = dir.empty() ? TemplateRegistry::builtin()
                                 : TemplateRegistry::with_overrides((std::filesystem::path(dir) / "templates").string());
    lib.cot_ = load_shot(dir, "cot.txt", "cot");
    lib.sarima_ = load_shot(dir, "sarima.txt", "sarima");
    return lib;
}

void PromptLibrary::load_lst_file(const std::string& path) {
    auto text = read_text_file(path);
    if (text.empty()) throw PromptError("LST prompt file '" + path + "' is empty");
    lst_text_ = std::move(text);
}

PromptMethod PromptLibrary::method(MethodKind kind) const {
    switch (kind) {
    case MethodKind::OneShotCoT: return PromptMethod::make(kind, cot_);
    case MethodKind::OneShotSARIMA: return PromptMethod::make(kind, sarima_);
    case MethodKind::ZeroShotLST: return PromptMethod::make(kind, std::nullopt, lst_text_);
    default: return PromptMethod::make(kind);
    }
}

RenderedPrompt PromptLibrary::render(const series::Sample& sample, MethodKind kind, int horizon) const {
    auto prompt = assemble_query(render_context_query(sample.series, horizon, templates_), method(kind));
    prompt.sample_id = sample.sample_id;
    prompt.horizon = horizon;
    return prompt;
}

} // namespace tsprompt::prompt
