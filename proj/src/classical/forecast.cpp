#include "tsprompt/classical.hpp"

#include <numeric>

namespace tsprompt::classical {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_history(std::size_t have, std::size_t need, const std::string& what) {
    if (have < need) {
        throw ForecastError(what + " needs at least " + std::to_string(need) + " values, got " + std::to_string(have));
    }
}

// Residual energy this small relative to the data is rounding noise from the
// trend fit; its autocorrelation is meaningless.
bool negligible_residuals(std::span<const double> values, std::span<const double> residuals) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double total = 0.0;
    for (const double v : values) total += (v - mean) * (v - mean);
    double resid = 0.0;
    for (const double r : residuals) resid += r * r;
    return resid <= 1e-20 * total;
}

std::vector<double> decomposed_forecast(std::span<const double> values, int horizon,
                                        std::optional<std::size_t> hint) {
    require_history(values.size(), 4, "decomposed forecast");
    const auto period = choose_period(values, hint);
    const auto d = decompose_additive(values, period);
    const std::size_t n = values.size();

    const std::size_t recent = period ? *period : n;
    const double residual_level =
        std::accumulate(d.residuals.end() - static_cast<std::ptrdiff_t>(recent), d.residuals.end(), 0.0) /
        static_cast<double>(recent);

    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (std::size_t h = 0; h < out.size(); ++h) {
        const std::size_t t = n + h;
        out[h] = d.trend.at(static_cast<double>(t)) + d.seasonal_at(t) + residual_level;
    }
    return out;
}

} // namespace

std::optional<std::size_t> choose_period(std::span<const double> values, std::optional<std::size_t> hint) {
    const std::size_t n = values.size();
    if (hint && *hint >= 2 && *hint <= n / 2) return hint;
    if (n < 8) return std::nullopt;
    const auto trend = fit_linear_trend(values);
    std::vector<double> detrended(n);
    for (std::size_t t = 0; t < n; ++t) detrended[t] = values[t] - trend.at(static_cast<double>(t));
    if (negligible_residuals(values, detrended)) return std::nullopt;
    return detect_period(detrended);
}

std::string describe(const ForecastMethod& method) {
    return std::visit(overloaded{
                          [](const NaiveLast&) { return std::string("naive-last"); },
                          [](const SeasonalNaive& m) { return "seasonal-naive(" + std::to_string(m.period) + ")"; },
                          [](const MovingAverage& m) { return "moving-average(" + std::to_string(m.window) + ")"; },
                          [](const Decomposed& m) {
                              return m.period_hint ? "decomposed(" + std::to_string(*m.period_hint) + ")"
                                                   : std::string("decomposed");
                          },
                      },
                      method);
}

std::vector<double> forecast(std::span<const double> values, int horizon, const ForecastMethod& method) {
    if (horizon < 1) throw ForecastError("horizon must be positive");
    const std::size_t n = values.size();
    const auto h_count = static_cast<std::size_t>(horizon);

    return std::visit(
        overloaded{
            [&](const NaiveLast&) {
                require_history(n, 1, "naive-last");
                return std::vector<double>(h_count, values.back());
            },
            [&](const SeasonalNaive& m) {
                if (m.period < 1) throw ForecastError("seasonal-naive period must be positive");
                require_history(n, m.period, "seasonal-naive");
                std::vector<double> out(h_count);
                for (std::size_t h = 0; h < h_count; ++h) out[h] = values[n - m.period + (h % m.period)];
                return out;
            },
            [&](const MovingAverage& m) {
                if (m.window < 1) throw ForecastError("moving-average window must be positive");
                require_history(n, m.window, "moving-average");
                const double mean =
                    std::accumulate(values.end() - static_cast<std::ptrdiff_t>(m.window), values.end(), 0.0) /
                    static_cast<double>(m.window);
                return std::vector<double>(h_count, mean);
            },
            [&](const Decomposed& m) { return decomposed_forecast(values, horizon, m.period_hint); },
        },
        method);
}

} // namespace tsprompt::classical
