#pragma once

#include "tsprompt/method.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsprompt::extract {

enum class Extractor { Marker, LabeledLine, TailNumbers, None };

std::string_view to_string(Extractor extractor);
std::optional<Extractor> extractor_from_string(std::string_view name);

struct ParsedForecast {
    std::string sample_id;
    MethodKind method = MethodKind::Baseline;
    int horizon = 1;
    std::vector<std::optional<double>> steps; // always `horizon` entries
    Extractor extractor_used = Extractor::None;

    bool complete() const;
    std::size_t parsed_steps() const;
};

/// Layered forecast recovery from free-form model output. Never throws.
///
/// 1. Marker: numbers after the last "Final Answer" preceded by 1-4 asterisks
///    (any case).
/// 2. LabeledLine: the last line with "prediction", "predicted value" or
///    "answer" followed by numbers.
/// 3. TailNumbers: for horizons >= 2 the last list of at least `horizon`
///    numbers, else the last list of two or more; for horizon 1 only when the
///    final sentence holds exactly one number.
///
/// Found values fill the leading steps; the rest stay missing.
ParsedForecast extract_forecast(std::string_view raw_response, int horizon);
ParsedForecast extract_forecast(std::string_view raw_response, int horizon, std::string sample_id, MethodKind method);

enum class TokenRole {
    Value,      // candidate forecast or data value
    Enumerator, // "1." or "2)" opening a list line
    LabelIndex, // "Hour 3:" / "t+1:"; the span covers the label word
    DatePart,   // day or year next to a month name, or joined by '-' or '/'
    TimePart,   // "17:00"
};

struct NumberToken {
    double value = 0.0;
    std::size_t begin = 0; // span in the source text
    std::size_t end = 0;
    TokenRole role = TokenRole::Value;
};

/// Standalone decimal numbers (optional leading minus, no exponent, no
/// thousands separators: "1,234" is two numbers). Numbers glued to letters
/// ("24h", "5th") are skipped.
std::vector<NumberToken> scan_numbers(std::string_view text);

/// Value tokens grouped into lists: consecutive values separated only by
/// whitespace, commas, semicolons, '*', '|', "and", or skipped enumerator and
/// label spans. A blank line ends a list.
std::vector<std::vector<NumberToken>> value_runs(std::string_view text, std::size_t from = 0,
                                                 std::size_t to = std::string_view::npos);

/// Longest list of values in the text (first one on ties); recovers the series
/// from a rendered query.
std::vector<double> scan_value_sequence(std::string_view text);

class TokenSplitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Splits a numeral the way a BPE vocabulary holding 0..999 does: each digit
/// run in chunks of three from the left, sign and '.' as their own tokens.
std::vector<std::string> numeric_token_split(std::string_view number_text);

} // namespace tsprompt::extract
