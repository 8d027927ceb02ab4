#include "tsprompt/calendar.hpp"
#include "tsprompt/series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

namespace tsprompt::series {

namespace {

constexpr std::string_view kIntensityColumn = "Global_intensity";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        const auto pos = line.find(';', begin);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(begin));
            break;
        }
        out.push_back(line.substr(begin, pos - begin));
        begin = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::optional<unsigned> parse_unsigned(std::string_view s) {
    if (s.empty() || s.size() > 4) return std::nullopt;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct Layout {
    std::size_t date = 0;
    std::size_t time = 0;
    std::size_t intensity = 0;
    std::size_t required_fields = 0;
};

Layout read_header(std::string_view header) {
    const auto fields = split_fields(header);
    std::optional<std::size_t> date, time, intensity;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = trim(fields[i]);
        if (name == "Date") date = i;
        else if (name == "Time") time = i;
        else if (name == kIntensityColumn) intensity = i;
    }
    if (!date || !time || !intensity) {
        throw FormatError("unrecognized IHEPC header (need Date, Time and Global_intensity columns): '" +
                          std::string(header.substr(0, 200)) + "'");
    }
    Layout layout{*date, *time, *intensity, 0};
    layout.required_fields = std::max({*date, *time, *intensity}) + 1;
    return layout;
}

Timestamp parse_row_time(std::string_view date, std::string_view time, std::size_t row) {
    // Date d/m/yyyy, Time hh:mm:ss
    const auto s1 = date.find('/');
    const auto s2 = s1 == std::string_view::npos ? s1 : date.find('/', s1 + 1);
    const auto c1 = time.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : time.find(':', c1 + 1);
    if (s2 == std::string_view::npos || c2 == std::string_view::npos) {
        throw RecordError(row, "malformed date/time '" + std::string(date) + " " + std::string(time) + "'");
    }
    const auto day = parse_unsigned(date.substr(0, s1));
    const auto month = parse_unsigned(date.substr(s1 + 1, s2 - s1 - 1));
    const auto year = parse_unsigned(date.substr(s2 + 1));
    const auto hour = parse_unsigned(time.substr(0, c1));
    const auto minute = parse_unsigned(time.substr(c1 + 1, c2 - c1 - 1));
    const auto second = parse_unsigned(time.substr(c2 + 1));
    if (!day || !month || !year || !hour || !minute || !second) {
        throw RecordError(row, "malformed date/time '" + std::string(date) + " " + std::string(time) + "'");
    }
    try {
        return make_timestamp(int(*year), *month, *day, int(*hour), int(*minute), int(*second));
    } catch (const SeriesError& e) {
        throw RecordError(row, e.what());
    }
}

class MinuteParser {
public:
    void feed(std::string_view line, std::size_t row, std::vector<MinuteObservation>& out) {
        const auto content = trim(line);
        if (content.empty()) return;
        if (!layout_) {
            layout_ = read_header(content);
            return;
        }
        const auto fields = split_fields(content);
        if (fields.size() < layout_->required_fields) {
            throw RecordError(row, "expected at least " + std::to_string(layout_->required_fields) + " fields, got " +
                                       std::to_string(fields.size()));
        }
        MinuteObservation obs;
        obs.time = parse_row_time(trim(fields[layout_->date]), trim(fields[layout_->time]), row);
        const auto raw = trim(fields[layout_->intensity]);
        if (!raw.empty() && raw != "?") {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
            if (ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(v)) {
                throw RecordError(row, "malformed Global_intensity '" + std::string(raw) + "'");
            }
            obs.value = v;
        }
        out.push_back(obs);
    }

private:
    std::optional<Layout> layout_;
};

} // namespace

RecordError::RecordError(std::size_t row, const std::string& what)
    : SeriesError("row " + std::to_string(row) + ": " + what), row_(row) {}

std::vector<MinuteObservation> parse_ihepc_minutes(std::span<const std::string> raw_rows) {
    std::vector<MinuteObservation> out;
    out.reserve(raw_rows.size());
    MinuteParser parser;
    for (std::size_t row = 0; row < raw_rows.size(); ++row) parser.feed(raw_rows[row], row, out);
    return out;
}

std::vector<MinuteObservation> read_ihepc_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SeriesError("cannot open IHEPC file '" + path + "'");
    std::vector<MinuteObservation> out;
    MinuteParser parser;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) parser.feed(line, row++, out);
    return out;
}

TimeSeries resample_hourly(std::span<const MinuteObservation> minutes, SeriesContext context) {
    if (minutes.empty()) throw SeriesError("cannot resample an empty minute series");
    for (std::size_t i = 1; i < minutes.size(); ++i) {
        if (minutes[i].time < minutes[i - 1].time) {
            throw SeriesError("minute observations out of order at index " + std::to_string(i));
        }
    }

    const Timestamp first_hour = floor_hour(minutes.front().time);
    const Timestamp last_hour = floor_hour(minutes.back().time);
    const auto hour_count = static_cast<std::size_t>((last_hour - first_hour) / kHourly) + 1;

    std::vector<double> sums(hour_count, 0.0);
    std::vector<std::size_t> counts(hour_count, 0);
    for (const auto& m : minutes) {
        if (!m.value) continue;
        const auto idx = static_cast<std::size_t>((floor_hour(m.time) - first_hour) / kHourly);
        sums[idx] += *m.value;
        ++counts[idx];
    }
    if (counts.front() == 0) {
        throw SeriesError("first hour " + format_iso(first_hour) + " has no observed minutes; nothing to forward-fill from");
    }

    std::vector<double> hourly(hour_count);
    for (std::size_t h = 0; h < hour_count; ++h) {
        hourly[h] = counts[h] ? sums[h] / static_cast<double>(counts[h]) : hourly[h - 1];
    }
    return TimeSeries(std::move(hourly), first_hour, kHourly, std::move(context));
}

} // namespace tsprompt::series
