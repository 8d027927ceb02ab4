#include "tsprompt/classical.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace tsprompt::classical {

LinearTrend fit_linear_trend(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw ForecastError("linear trend needs at least 2 values, got " + std::to_string(n));
    const double t_mean = static_cast<double>(n - 1) / 2.0;
    const double y_mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        sxy += dt * (values[t] - y_mean);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;
    return {y_mean - slope * t_mean, slope};
}

std::optional<double> autocorrelation(std::span<const double> values, std::size_t lag) {
    const std::size_t n = values.size();
    if (n == 0 || lag >= n) return std::nullopt;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (const double v : values) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) return std::nullopt;
    double num = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) num += (values[t] - mean) * (values[t + lag] - mean);
    return num / denom;
}

std::optional<std::size_t> detect_period(std::span<const double> detrended, double threshold) {
    const std::size_t n = detrended.size();
    if (n < 8) return std::nullopt;
    std::optional<std::size_t> best_lag;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t lag = 2; lag <= n / 2; ++lag) {
        const auto r = autocorrelation(detrended, lag);
        if (!r) return std::nullopt;
        if (*r > best) {
            best = *r;
            best_lag = lag;
        }
    }
    if (best_lag && best >= threshold) return best_lag;
    return std::nullopt;
}

Decomposition decompose_additive(std::span<const double> values, std::optional<std::size_t> period) {
    const std::size_t n = values.size();
    if (n < 4) throw ForecastError("decomposition needs at least 4 values, got " + std::to_string(n));
    if (period && (*period < 2 || *period > n / 2)) {
        throw ForecastError("period " + std::to_string(*period) + " outside [2, " + std::to_string(n / 2) + "]");
    }

    Decomposition d;
    d.period = period;
    d.residuals.resize(n);

    if (!period) {
        d.trend = fit_linear_trend(values);
        for (std::size_t t = 0; t < n; ++t) d.residuals[t] = values[t] - d.trend.at(static_cast<double>(t));
        return d;
    }

    // Within-phase regression: slope from phase-demeaned t and y, then one
    // level per phase. The trend intercept is the mean level.
    const std::size_t p = *period;
    std::vector<double> y_phase(p, 0.0), t_phase(p, 0.0), count(p, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        y_phase[t % p] += values[t];
        t_phase[t % p] += static_cast<double>(t);
        count[t % p] += 1.0;
    }
    for (std::size_t j = 0; j < p; ++j) {
        y_phase[j] /= count[j];
        t_phase[j] /= count[j];
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_phase[t % p];
        sxy += dt * (values[t] - y_phase[t % p]);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;

    std::vector<double> level(p);
    for (std::size_t j = 0; j < p; ++j) level[j] = y_phase[j] - slope * t_phase[j];
    const double intercept = std::accumulate(level.begin(), level.end(), 0.0) / static_cast<double>(p);

    d.trend = {intercept, slope};
    d.seasonal_profile.resize(p);
    for (std::size_t j = 0; j < p; ++j) d.seasonal_profile[j] = level[j] - intercept;
    for (std::size_t t = 0; t < n; ++t) {
        d.residuals[t] = values[t] - d.trend.at(static_cast<double>(t)) - d.seasonal_profile[t % p];
    }
    return d;
}

} // namespace tsprompt::classical
