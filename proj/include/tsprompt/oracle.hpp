#pragma once

#include "tsprompt/gateway.hpp"
#include "tsprompt/method.hpp"
#include "tsprompt/prompt.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsprompt::gateway {

/// Fault decisions for one (sample, method) pair under a seed.
struct FaultDraw {
    bool omit_marker = false;
    bool short_horizon = false;
    bool split_answer = false; // takes precedence over the other two layout faults
    bool arith_slip = false;
    double slip_sign = 1.0;

    /// Faults that leave at least one step unrecoverable by the extractor.
    bool causes_missing() const { return split_answer || short_horizon; }
};

/// Uniform draws in the fixed order omit, short, split, slip, slip sign from a
/// generator seeded by (seed, sample_id, method); a fault fires when its draw
/// is below the probability.
FaultDraw draw_faults(const OracleFaults& faults, std::string_view sample_id, MethodKind method);

/// The oracle's forecasting brain: decomposition forecast, taking `period_hint`
/// when it fits the history and detecting the period otherwise. Histories
/// shorter than four values repeat the last one.
std::vector<double> oracle_forecast(std::span<const double> values, int horizon,
                                    std::optional<std::size_t> period_hint = std::nullopt);

/// Series embedded in the prompt: the longest value list after the last "Q:".
std::vector<double> series_from_prompt(std::string_view prompt_text);

/// 24 when the query says "in each hour", 7 for "on each day".
std::optional<std::size_t> period_hint_from_prompt(std::string_view prompt_text);

/// Shortest decimal text that reads back to exactly `value`.
std::string exact_decimal(double value);

/// Verbose step-by-step answer ending in "****Final Answer**** v1, v2, ...",
/// with faults applied per draw_faults. Deterministic.
std::string oracle_respond(const prompt::RenderedPrompt& prompt, const OracleFaults& faults);

} // namespace tsprompt::gateway
