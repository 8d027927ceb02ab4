#include "tsprompt/rng.hpp"
#include "tsprompt/series.hpp"

#include <cmath>
#include <numbers>

namespace tsprompt::series {

std::string_view to_string(SynthKind kind) {
    switch (kind) {
    case SynthKind::Constant: return "constant";
    case SynthKind::Linear: return "linear";
    case SynthKind::Sinusoid: return "sinusoid";
    case SynthKind::LinearPlusSeasonal: return "linear_plus_seasonal";
    case SynthKind::Noisy: return "noisy";
    }
    return "constant";
}

TimeSeries synth_series(SynthKind kind, const SynthParams& p, std::size_t length, std::uint64_t seed) {
    if (length < 2) throw SeriesError("synthetic series length must be at least 2");
    const bool seasonal =
        kind == SynthKind::Sinusoid || kind == SynthKind::LinearPlusSeasonal || kind == SynthKind::Noisy;
    if (seasonal && !(p.period > 0.0)) throw SeriesError("seasonal synthetic series need a positive period");
    if (kind == SynthKind::Noisy && !(p.noise_sd >= 0.0)) throw SeriesError("noise_sd must be non-negative");

    Rng rng(seed);
    const auto season = [&](double t) {
        return p.amplitude * std::sin(2.0 * std::numbers::pi * std::fmod(t, p.period) / p.period + p.phase);
    };

    std::vector<double> values(length);
    for (std::size_t k = 0; k < length; ++k) {
        const double t = static_cast<double>(k);
        switch (kind) {
        case SynthKind::Constant: values[k] = p.level; break;
        case SynthKind::Linear: values[k] = p.slope * t + p.intercept; break;
        case SynthKind::Sinusoid: values[k] = p.level + season(t); break;
        case SynthKind::LinearPlusSeasonal: values[k] = p.intercept + p.slope * t + season(t); break;
        case SynthKind::Noisy: values[k] = p.intercept + p.slope * t + season(t) + p.noise_sd * rng.normal(); break;
        }
    }
    return TimeSeries(std::move(values), p.start, p.step, p.context);
}

} // namespace tsprompt::series
