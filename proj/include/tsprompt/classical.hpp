#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tsprompt::classical {

class ForecastError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSeasonalityThreshold = 0.3;

struct LinearTrend {
    double intercept = 0.0;
    double slope = 0.0; // per step

    double at(double t) const { return intercept + slope * t; }
};

/// Ordinary least squares over t = 0..n-1. Needs at least two values.
LinearTrend fit_linear_trend(std::span<const double> values);

/// Sample autocorrelation at `lag` (biased estimator, full-series mean and
/// variance). Returns nullopt when the series has zero variance.
std::optional<double> autocorrelation(std::span<const double> values, std::size_t lag);

/// Lag in [2, floor(n/2)] with the highest autocorrelation, if that value
/// reaches `threshold`. Ties go to the smaller lag. Series shorter than 8
/// points or with zero variance have no period.
std::optional<std::size_t> detect_period(std::span<const double> detrended,
                                         double threshold = kSeasonalityThreshold);

/// value[t] = trend(t) + seasonal_profile[t mod period] + residuals[t]
struct Decomposition {
    LinearTrend trend;
    std::optional<std::size_t> period;
    std::vector<double> seasonal_profile; // empty without a period; sums to zero otherwise
    std::vector<double> residuals;

    double seasonal_at(std::size_t t) const {
        return period ? seasonal_profile[t % *period] : 0.0;
    }
    double reconstruct(std::size_t t) const {
        return trend.at(static_cast<double>(t)) + seasonal_at(t) + residuals[t];
    }
};

/// Additive trend + seasonal + residual split.
///
/// With a period the trend and the per-phase levels are fitted jointly by
/// least squares: the profile is the per-phase mean of the detrended values,
/// recentred to zero mean, and the trend is the OLS line of the deseasonalised
/// values. Noiseless trend-plus-season inputs therefore decompose exactly.
/// Residuals are orthogonal to the constant and to t either way.
Decomposition decompose_additive(std::span<const double> values, std::optional<std::size_t> period);

struct NaiveLast {};
struct SeasonalNaive {
    std::size_t period = 1;
};
struct MovingAverage {
    std::size_t window = 1;
};
/// Trend extrapolation + seasonal continuation + mean of the last period's
/// residuals. A usable hint is taken as the period; otherwise it is detected.
struct Decomposed {
    std::optional<std::size_t> period_hint;
};

using ForecastMethod = std::variant<NaiveLast, SeasonalNaive, MovingAverage, Decomposed>;

std::string describe(const ForecastMethod& method);

/// Period the Decomposed forecaster would use for `values`.
std::optional<std::size_t> choose_period(std::span<const double> values, std::optional<std::size_t> hint);

std::vector<double> forecast(std::span<const double> values, int horizon, const ForecastMethod& method);

} // namespace tsprompt::classical
