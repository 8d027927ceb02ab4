#include "tsprompt/extract.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace tsprompt::extract {

namespace {

constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

constexpr std::array<std::string_view, 24> kMonthWords{
    "january", "february", "march", "april", "may", "june", "july", "august", "september", "october", "november",
    "december", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }
bool is_blank(char c) { return c == ' ' || c == '\t'; }
char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool equals_ci(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (lower(a[i]) != lower(b[i])) return false;
    }
    return true;
}

bool is_month_word(std::string_view word) {
    for (const auto m : kMonthWords) {
        if (equals_ci(word, m)) return true;
    }
    return false;
}

/// Word ending just before `pos`, allowing one or more blanks in between.
std::string_view word_before(std::string_view text, std::size_t pos) {
    std::size_t k = pos;
    while (k > 0 && is_blank(text[k - 1])) --k;
    if (k == pos) return {};
    const std::size_t end = k;
    while (k > 0 && is_alpha(text[k - 1])) --k;
    return text.substr(k, end - k);
}

std::string_view word_after(std::string_view text, std::size_t pos) {
    std::size_t k = pos;
    while (k < text.size() && is_blank(text[k])) ++k;
    if (k == pos) return {};
    const std::size_t begin = k;
    while (k < text.size() && is_alpha(text[k])) ++k;
    return text.substr(begin, k - begin);
}

bool at_line_start(std::string_view text, std::size_t pos) {
    std::size_t k = pos;
    while (k > 0 && is_blank(text[k - 1])) --k;
    return k == 0 || text[k - 1] == '\n';
}

bool is_integer_token(std::string_view text, const NumberToken& t) {
    for (std::size_t i = t.begin; i < t.end; ++i) {
        if (!is_digit(text[i])) return false;
    }
    return true;
}

void assign_role(std::string_view text, NumberToken& t) {
    const std::size_t n = text.size();
    const std::size_t b = t.begin;
    const std::size_t e = t.end;
    const char before = b > 0 ? text[b - 1] : '\0';
    const char before2 = b > 1 ? text[b - 2] : '\0';
    const char after = e < n ? text[e] : '\0';
    const char after2 = e + 1 < n ? text[e + 1] : '\0';

    if ((after == ':' && is_digit(after2)) || (before == ':' && is_digit(before2))) {
        t.role = TokenRole::TimePart;
        if (after == ':' && is_digit(after2)) t.end = e + 1; // separator belongs to the time
        return;
    }
    if (((after == '-' || after == '/') && is_digit(after2)) || ((before == '-' || before == '/') && is_digit(before2))) {
        t.role = TokenRole::DatePart;
        if ((after == '-' || after == '/') && is_digit(after2)) t.end = e + 1;
        return;
    }
    if (is_month_word(word_before(text, b)) || is_month_word(word_after(text, e))) {
        t.role = TokenRole::DatePart;
        return;
    }
    const bool integer = is_integer_token(text, t);
    if (integer && (after == '.' || after == ')') && (is_blank(after2)) && at_line_start(text, b)) {
        t.role = TokenRole::Enumerator;
        t.end = e + 1;
        return;
    }
    if (integer && after == ':') {
        t.role = TokenRole::LabelIndex;
        std::size_t k = b;
        if (k > 0 && (text[k - 1] == '+' || text[k - 1] == '-')) --k;
        const std::size_t glued = k;
        while (k > 0 && is_alpha(text[k - 1])) --k;
        if (k == glued && k > 1 && text[k - 1] == ' ' && is_alpha(text[k - 2])) {
            --k;
            while (k > 0 && is_alpha(text[k - 1])) --k;
        }
        t.begin = k;
        t.end = e + 1;
    }
}

} // namespace

std::vector<NumberToken> scan_numbers(std::string_view text) {
    std::vector<NumberToken> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const char c = text[i];
        const bool free_left = i == 0 || !is_word(text[i - 1]);
        std::size_t begin = i;
        std::size_t digits = std::string_view::npos;
        bool negative = false;

        if (c == '-' && i + 1 < n && is_digit(text[i + 1]) && free_left) {
            negative = true;
            digits = i + 1;
        } else if (text.substr(i, 3) == kUnicodeMinus && i + 3 < n && is_digit(text[i + 3]) && free_left) {
            negative = true;
            digits = i + 3;
        } else if (is_digit(c) && free_left) {
            digits = i;
            // ".5" with nothing word-like before the point
            if (i > 0 && text[i - 1] == '.' && (i < 2 || !is_word(text[i - 2]))) begin = digits = i - 1;
        } else {
            if (is_word(c)) {
                while (i < n && is_word(text[i])) ++i;
            } else {
                ++i;
            }
            continue;
        }

        std::size_t j = digits;
        if (text[j] == '.') ++j;
        while (j < n && is_digit(text[j])) ++j;
        if (j + 1 < n && text[j] == '.' && is_digit(text[j + 1]) && text[digits] != '.') {
            ++j;
            while (j < n && is_digit(text[j])) ++j;
        }
        // Glued to a word ("24h", "5th") or a dotted chain ("1.2.3"): not a number.
        if ((j < n && is_word(text[j])) || (j + 1 < n && text[j] == '.' && is_digit(text[j + 1]))) {
            i = j;
            while (i < n && (is_word(text[i]) || text[i] == '.')) ++i;
            continue;
        }

        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + j, value);
        i = j;
        if (ec != std::errc{} || ptr != text.data() + j || !std::isfinite(value)) continue;
        if (negative) value = -value;
        if (value == 0.0) value = 0.0;

        NumberToken token{value, begin, j, TokenRole::Value};
        assign_role(text, token);
        out.push_back(token);
        i = std::max(i, token.end);
    }

    // "April 15, 2020": the year after a month-day pair is part of the date.
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
        if (out[k].role != TokenRole::DatePart || !is_month_word(word_before(text, out[k].begin))) continue;
        auto& next = out[k + 1];
        if (next.role != TokenRole::Value || next.end - next.begin != 4 || !is_integer_token(text, next)) continue;
        std::size_t p = out[k].end;
        if (p < n && text[p] == ',') ++p;
        while (p < n && is_blank(text[p])) ++p;
        if (p == next.begin) next.role = TokenRole::DatePart;
    }
    return out;
}

std::vector<std::vector<NumberToken>> value_runs(std::string_view text, std::size_t from, std::size_t to) {
    to = std::min(to, text.size());
    const auto tokens = scan_numbers(text);

    // Allowed gap content between two list members; skipped tokens are jumped over.
    const auto joins = [&](std::size_t gap_begin, std::size_t gap_end, std::size_t first_token) {
        std::size_t p = gap_begin;
        std::size_t tk = first_token;
        bool newline_seen = false;
        while (p < gap_end) {
            while (tk < tokens.size() && tokens[tk].end <= p) ++tk;
            if (tk < tokens.size() && tokens[tk].begin <= p && tokens[tk].role != TokenRole::Value) {
                p = tokens[tk].end;
                newline_seen = false;
                continue;
            }
            const char c = text[p];
            if (c == '\n') {
                if (newline_seen) return false; // blank line
                newline_seen = true;
                ++p;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++p;
                continue;
            }
            newline_seen = false;
            if (c == ',' || c == ';' || c == '*' || c == '|' || c == '`') {
                ++p;
                continue;
            }
            if (c == '-' && at_line_start(text, p) && p + 1 < gap_end && is_blank(text[p + 1])) {
                ++p;
                continue;
            }
            if (p + 3 <= gap_end && equals_ci(text.substr(p, 3), "and") && (p == 0 || !is_alpha(text[p - 1])) &&
                (p + 3 >= text.size() || !is_alpha(text[p + 3]))) {
                p += 3;
                continue;
            }
            return false;
        }
        return true;
    };

    std::vector<std::vector<NumberToken>> runs;
    std::size_t prev_index = tokens.size();
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const auto& t = tokens[k];
        if (t.role != TokenRole::Value || t.begin < from || t.end > to) continue;
        if (prev_index == tokens.size() || !joins(tokens[prev_index].end, t.begin, prev_index)) {
            runs.emplace_back();
        }
        runs.back().push_back(t);
        prev_index = k;
    }
    return runs;
}

std::vector<double> scan_value_sequence(std::string_view text) {
    const auto runs = value_runs(text);
    const std::vector<NumberToken>* best = nullptr;
    for (const auto& run : runs) {
        if (!best || run.size() > best->size()) best = &run;
    }
    std::vector<double> out;
    if (best) {
        for (const auto& t : *best) out.push_back(t.value);
    }
    return out;
}

std::vector<std::string> numeric_token_split(std::string_view number_text) {
    const auto fail = [&] {
        return TokenSplitError("not a plain decimal numeral: '" + std::string(number_text.substr(0, 64)) + "'");
    };
    std::size_t i = 0;
    std::vector<std::string> out;
    if (i < number_text.size() && (number_text[i] == '-' || number_text[i] == '+')) {
        out.emplace_back(1, number_text[i]);
        ++i;
    }
    const auto digit_run = [&] {
        const std::size_t begin = i;
        while (i < number_text.size() && is_digit(number_text[i])) ++i;
        if (i == begin) throw fail();
        for (std::size_t c = begin; c < i; c += 3) out.emplace_back(number_text.substr(c, std::min<std::size_t>(3, i - c)));
    };
    digit_run();
    if (i < number_text.size() && number_text[i] == '.') {
        out.emplace_back(".");
        ++i;
        digit_run();
    }
    if (i != number_text.size()) throw fail();
    return out;
}

} // namespace tsprompt::extract
