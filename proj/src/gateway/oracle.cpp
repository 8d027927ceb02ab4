#include "tsprompt/oracle.hpp"

#include "tsprompt/classical.hpp"
#include "tsprompt/extract.hpp"
#include "tsprompt/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tsprompt::gateway {

namespace {

std::string join_exact(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += exact_decimal(values[i]);
    }
    return out;
}

std::string prose(double value) { return prompt::format_value(value); }

void write_analysis(std::ostringstream& out, std::span<const double> values, const classical::Decomposition& d,
                    double residual_sum, std::size_t residual_count) {
    const std::string direction = std::abs(d.trend.slope) < 1e-9 ? "flat" : (d.trend.slope > 0 ? "upward" : "downward");
    out << "Let's analyze the " << values.size() << " observed values step by step.\n\n";
    out << "Trend: a least-squares line gives an intercept of " << prose(d.trend.intercept) << " with a slope of "
        << prose(d.trend.slope) << " per step, so the overall direction is " << direction << ".\n\n";
    if (d.period) {
        const auto [lo, hi] = std::minmax_element(d.seasonal_profile.begin(), d.seasonal_profile.end());
        out << "Seasonality: the detrended values repeat every " << *d.period
            << " steps, with seasonal offsets ranging from " << prose(*lo) << " to " << prose(*hi) << ".\n\n";
    } else {
        out << "Seasonality: no repeating pattern is strong enough, so the seasonal component is zero.\n\n";
    }
    out << "Short-term variations: the last " << residual_count << " residuals add up to " << prose(residual_sum)
        << ", giving a mean residual of " << prose(residual_sum / static_cast<double>(residual_count)) << ".\n\n";
}

void write_split(std::ostringstream& out, std::span<const double> forecast) {
    const std::size_t h = forecast.size();
    if (h == 1) {
        const double long_term = forecast[0] + 1.0;
        out << "Short-term forecast suggests " << exact_decimal(forecast[0]) << ", while the long-term forecast suggests "
            << exact_decimal(long_term) << ".";
        return;
    }
    const std::size_t k = h / 2;
    out << "Short-term forecast (next " << k << " steps): " << join_exact(forecast.first(k)) << ".\n";
    out << "Long-term forecast (remaining " << h - k << " steps): " << join_exact(forecast.subspan(k)) << ".";
}

void write_final(std::ostringstream& out, std::span<const double> shown, bool omit_marker) {
    if (!omit_marker) {
        out << "Combining trend, seasonality and residual gives the forecast.\n\n****Final Answer****";
        if (!shown.empty()) out << " " << join_exact(shown);
        return;
    }
    if (shown.empty()) {
        out << "Combining the components did not settle on a single value.";
    } else if (shown.size() == 1) {
        out << "Combining trend, seasonality and residual gives " << exact_decimal(shown[0]) << ".";
    } else {
        out << "Combining the components gives the next values: " << join_exact(shown) << ".";
    }
}

} // namespace

FaultDraw draw_faults(const OracleFaults& faults, std::string_view sample_id, MethodKind method) {
    std::string key(sample_id);
    key += '\x1f';
    key += method_name(method);
    Rng rng(mix_seed(faults.seed, stable_hash(key)));
    FaultDraw draw;
    draw.omit_marker = rng.uniform() < faults.p_omit_marker;
    draw.short_horizon = rng.uniform() < faults.p_short_horizon;
    draw.split_answer = rng.uniform() < faults.p_split_answer;
    draw.arith_slip = rng.uniform() < faults.p_arith_slip;
    draw.slip_sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return draw;
}

std::vector<double> oracle_forecast(std::span<const double> values, int horizon,
                                    std::optional<std::size_t> period_hint) {
    if (values.size() < 4) return classical::forecast(values, horizon, classical::NaiveLast{});
    return classical::forecast(values, horizon, classical::Decomposed{period_hint});
}

std::vector<double> series_from_prompt(std::string_view prompt_text) {
    const auto q = prompt_text.rfind("Q:");
    return extract::scan_value_sequence(q == std::string_view::npos ? prompt_text : prompt_text.substr(q));
}

std::optional<std::size_t> period_hint_from_prompt(std::string_view prompt_text) {
    const auto q = prompt_text.rfind("Q:");
    const auto query = q == std::string_view::npos ? prompt_text : prompt_text.substr(q);
    if (query.find("in each hour") != std::string_view::npos) return 24;
    if (query.find("on each day") != std::string_view::npos) return 7;
    return std::nullopt;
}

std::string exact_decimal(double value) {
    if (value == 0.0) return "0";
    char buf[400];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (ec != std::errc{}) return prompt::format_value(value);
    return std::string(buf, ptr);
}

std::string oracle_respond(const prompt::RenderedPrompt& prompt, const OracleFaults& faults) {
    if (prompt.horizon < 1) throw GatewayError("oracle: horizon must be positive");
    const auto values = series_from_prompt(prompt.text);
    if (values.empty()) throw OracleParseError("oracle: no numeric sequence in prompt for sample '" + prompt.sample_id + "'");

    const auto hint = period_hint_from_prompt(prompt.text);
    auto forecast = oracle_forecast(values, prompt.horizon, hint);
    const auto draw = draw_faults(faults, prompt.sample_id, prompt.method);

    std::ostringstream out;
    if (values.size() < 4) {
        out << "Only " << values.size() << " observed values are available, so the most recent one is carried forward.\n\n";
    } else {
        const auto d = classical::decompose_additive(values, classical::choose_period(values, hint));
        const std::size_t count = d.period ? *d.period : values.size();
        double residual_sum = std::accumulate(d.residuals.end() - static_cast<std::ptrdiff_t>(count), d.residuals.end(), 0.0);
        if (draw.arith_slip) {
            double mean_abs = 0.0;
            for (const double v : values) mean_abs += std::abs(v);
            mean_abs /= static_cast<double>(values.size());
            const double delta = draw.slip_sign * std::max(1.0, std::round(0.05 * mean_abs));
            residual_sum += delta;
            for (auto& f : forecast) f += delta / static_cast<double>(count);
        }
        write_analysis(out, values, d, residual_sum, count);
    }

    if (draw.split_answer) {
        write_split(out, forecast);
    } else {
        std::span<const double> shown(forecast);
        if (draw.short_horizon) shown = shown.first(shown.size() - 1);
        write_final(out, shown, draw.omit_marker);
    }
    return out.str();
}

} // namespace tsprompt::gateway
