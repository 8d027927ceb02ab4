#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsprompt::series {

/// Naive wall-clock time. No time-zone arithmetic is ever applied.
using Timestamp = std::chrono::sys_seconds;
using Step = std::chrono::seconds;

inline constexpr Step kDaily = std::chrono::hours{24};
inline constexpr Step kHourly = std::chrono::hours{1};

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DomainKind { Visitors, Temperature, ElectricityDaily, HouseholdCurrentHourly, Generic };

std::string_view to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

struct SeriesContext {
    DomainKind domain_kind = DomainKind::Generic;
    std::string entity_id;
    std::string unit_phrase;
    std::string resolution_phrase;

    /// Unit and resolution phrases used when a record does not carry its own.
    static SeriesContext defaults_for(DomainKind kind, std::string entity_id, Step step = kDaily);
};

/// Regularly sampled series of finite values with its domain context.
class TimeSeries {
public:
    TimeSeries(std::vector<double> values, Timestamp start, Step step, SeriesContext context);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    Timestamp start() const noexcept { return start_; }
    Step step() const noexcept { return step_; }
    const SeriesContext& context() const noexcept { return context_; }

    Timestamp timestamp_at(std::size_t k) const { return start_ + step_ * static_cast<std::int64_t>(k); }
    Timestamp last_timestamp() const { return timestamp_at(values_.size() - 1); }

    /// Contiguous sub-series; the start timestamp shifts with the offset.
    TimeSeries slice(std::size_t offset, std::size_t length) const;

private:
    std::vector<double> values_;
    Timestamp start_;
    Step step_;
    SeriesContext context_;
};

// ---------------------------------------------------------------------------
// IHEPC minute log ingestion

struct MinuteObservation {
    Timestamp time;
    std::optional<double> value; // nullopt where the log records "?"
};

/// Layout problem with the file as a whole (header, missing columns).
class FormatError : public SeriesError {
public:
    using SeriesError::SeriesError;
};

/// A single malformed record. `row()` indexes into the raw input lines.
class RecordError : public SeriesError {
public:
    RecordError(std::size_t row, const std::string& what);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Parses semicolon-delimited IHEPC lines. The first non-empty line must be the
/// header naming Date, Time and Global_intensity; blank lines are skipped.
std::vector<MinuteObservation> parse_ihepc_minutes(std::span<const std::string> raw_rows);

/// Streams an IHEPC text file through parse_ihepc_minutes.
std::vector<MinuteObservation> read_ihepc_file(const std::string& path);

/// Hourly means of the available minutes. Hours with nothing usable repeat the
/// previous hour. The output covers every calendar hour from the first to the
/// last observation.
TimeSeries resample_hourly(std::span<const MinuteObservation> minutes, SeriesContext context);

// ---------------------------------------------------------------------------
// Windowing

struct WindowSpec {
    std::size_t length = 96;
    std::size_t stride = 10;
    std::optional<std::size_t> max_windows;

    void validate() const;
};

/// min(cap, floor((n - length) / stride) + 1), or 0 when n < length.
std::size_t window_count(std::size_t n, const WindowSpec& spec);

struct WindowResult {
    std::vector<TimeSeries> windows;
    std::optional<std::string> warning;
};

/// Earliest-first sliding windows. A series shorter than the window yields no
/// windows and a warning rather than an error.
WindowResult build_windows(const TimeSeries& series, const WindowSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic fixtures

enum class SynthKind { Constant, Linear, Sinusoid, LinearPlusSeasonal, Noisy };

std::string_view to_string(SynthKind kind);

struct SynthParams {
    double level = 0.0;     // Constant, Sinusoid
    double slope = 0.0;     // Linear and seasonal-trend kinds
    double intercept = 0.0; // Linear and seasonal-trend kinds
    double amplitude = 1.0;
    double period = 24.0;
    double phase = 0.0;
    double noise_sd = 1.0; // Noisy only
    Timestamp start{};
    Step step = kDaily;
    SeriesContext context{};
};

/// Deterministic in (kind, params, length, seed) on every platform.
///
/// Seasonal terms are evaluated at fmod(t, period), so integer periods repeat
/// bit-exactly. Noisy is LinearPlusSeasonal plus Gaussian noise.
TimeSeries synth_series(SynthKind kind, const SynthParams& params, std::size_t length, std::uint64_t seed);

/// Rounds to `decimals` places via integer scaling; the result is the double
/// nearest to the printed decimal.
double round_to_decimals(double value, int decimals);

} // namespace tsprompt::series
