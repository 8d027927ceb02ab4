#include "tsprompt/series.hpp"

#include <algorithm>

namespace tsprompt::series {

void WindowSpec::validate() const {
    if (length < 2) throw SeriesError("window length must be at least 2");
    if (stride < 1) throw SeriesError("window stride must be at least 1");
    if (max_windows && *max_windows == 0) throw SeriesError("max_windows must be positive when given");
}

std::size_t window_count(std::size_t n, const WindowSpec& spec) {
    spec.validate();
    if (n < spec.length) return 0;
    const std::size_t uncapped = (n - spec.length) / spec.stride + 1;
    return spec.max_windows ? std::min(uncapped, *spec.max_windows) : uncapped;
}

WindowResult build_windows(const TimeSeries& series, const WindowSpec& spec) {
    WindowResult result;
    const std::size_t count = window_count(series.size(), spec);
    if (count == 0) {
        result.warning = "series of length " + std::to_string(series.size()) + " is shorter than window length " +
                         std::to_string(spec.length) + "; no windows built";
        return result;
    }
    result.windows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) result.windows.push_back(series.slice(i * spec.stride, spec.length));
    return result;
}

} // namespace tsprompt::series
