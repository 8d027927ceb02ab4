#include "tsprompt/prompt.hpp"

namespace tsprompt::prompt {

namespace {

constexpr std::string_view kCotText = "A: Think step by step.";

constexpr std::string_view kPasPlusText =
    "A: Let's first understand the problem, extract relevant variables and their corresponding numerals, and make "
    "a plan. Then, let's carry out the plan, calculate intermediate variables (pay attention to correct numerical "
    "calculation and commonsense), solve the problem step by step, and show the ****Final Answer**** with "
    "predicted value only.";

// Decomposition prompt: trend, seasonality and short-term variation are
// predicted separately and then recombined.
constexpr std::string_view kSarimaText =
    R"(A: Let's analyze the sequence of numbers systematically to predict the next value. We will:

1. Decompose the sequence into three components:
 - Trend: Identify the overall direction (increasing, decreasing, or stable).
 - Seasonality: Detect repeating patterns or periodic fluctuations.
 - Short-term variations: Examine irregularities or residual noise.
2. Predict each component by examining statistical values, such as mean, variance, and recent trends, ensuring accurate numerical calculations.
3. Combine the predicted components to form the final value.

For each step, calculate intermediate variables, justify the decisions using patterns and common sense, provide the reasoning clearly and step by step, and show the ****Final Answer**** .)";

} // namespace

std::string method_prompt_text(const PromptMethod& method) {
    switch (method.kind()) {
    case MethodKind::Baseline:
        throw PromptError("the baseline method has no method text; it only carries the format request");
    case MethodKind::ZeroShotCoT:
    case MethodKind::OneShotCoT: return std::string(kCotText);
    case MethodKind::ZeroShotPaSPlus: return std::string(kPasPlusText);
    case MethodKind::ZeroShotSARIMA:
    case MethodKind::OneShotSARIMA: return std::string(kSarimaText);
    case MethodKind::ZeroShotLST:
        if (!method.external_text()) throw PromptError("zero-shot LST requires a user-supplied prompt file");
        return *method.external_text();
    }
    throw PromptError("unknown prompting method");
}

RenderedPrompt assemble_query(std::string_view context_query, const PromptMethod& method) {
    if (context_query.empty()) throw PromptError("context query must not be empty");

    RenderedPrompt out;
    out.method = method.kind();
    out.max_output_tokens = max_output_tokens_for(method.kind());

    if (method.kind() == MethodKind::Baseline) {
        out.text = "Q: ";
        out.text += context_query;
        out.text += ' ';
        out.text += kBaselineFormatRequest;
        return out;
    }

    if (const auto& shot = method.shot_example()) {
        out.text = shot->example_query + "\n" + shot->example_answer + "\n";
    }
    out.text += "Q: ";
    out.text += context_query;
    out.text += '\n';
    out.text += method_prompt_text(method);
    return out;
}

} // namespace tsprompt::prompt
