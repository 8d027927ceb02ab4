#include "tsprompt/bench.hpp"
#include "tsprompt/calendar.hpp"
#include "tsprompt/rng.hpp"

#include <array>
#include <cstdio>
#include <numbers>
#include <set>

namespace tsprompt::bench {

namespace {

constexpr std::array<std::pair<Dataset, std::string_view>, 5> kDatasetNames{{
    {Dataset::SG, "sg"},
    {Dataset::CT, "ct"},
    {Dataset::ECL, "ecl"},
    {Dataset::IHEPC, "ihepc"},
    {Dataset::Synthetic, "synthetic"},
}};

std::string numbered_id(std::string_view prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05zu", index);
    return std::string(prefix) + "-" + buf;
}

std::vector<double> rounded(std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = series::round_to_decimals(values[i], 3);
    return out;
}

PrepareResult prepare_ihepc(const PrepareOptions& o) {
    PrepareResult result;
    const auto minutes = series::read_ihepc_file(o.input);
    const auto hourly = series::resample_hourly(
        minutes, series::SeriesContext::defaults_for(series::DomainKind::HouseholdCurrentHourly, "1", series::kHourly));
    const auto values = rounded(hourly.values());
    const auto h = static_cast<std::size_t>(o.horizon);
    if (values.size() <= h) throw BenchError("IHEPC series of " + std::to_string(values.size()) + " hours is too short");

    // Windows are cut from the prefix that still leaves `horizon` target hours.
    const series::TimeSeries usable(std::vector<double>(values.begin(), values.end() - static_cast<std::ptrdiff_t>(h)),
                                    hourly.start(), hourly.step(), hourly.context());
    auto windows = series::build_windows(usable, o.windows);
    if (windows.warning) result.warnings.push_back(*windows.warning);

    std::vector<series::Sample> samples;
    samples.reserve(windows.windows.size());
    for (std::size_t k = 0; k < windows.windows.size(); ++k) {
        const std::size_t end = k * o.windows.stride + o.windows.length;
        std::vector<double> target(values.begin() + static_cast<std::ptrdiff_t>(end),
                                   values.begin() + static_cast<std::ptrdiff_t>(end + h));
        samples.push_back({numbered_id("ihepc", k), std::move(windows.windows[k]), std::move(target)});
    }
    series::write_samples(o.output, samples);
    result.samples = samples.size();
    return result;
}

PrepareResult prepare_short(const PrepareOptions& o) {
    PrepareResult result;
    const auto samples = series::read_samples(o.input);
    const auto expected = domain_of(o.dataset);
    std::set<std::string> ids;
    for (const auto& s : samples) {
        if (!ids.insert(s.sample_id).second) throw BenchError("duplicate sample id '" + s.sample_id + "'");
        if (s.series.context().domain_kind != expected) {
            throw BenchError("sample '" + s.sample_id + "' has domain " +
                             std::string(series::to_string(s.series.context().domain_kind)) + ", dataset " +
                             std::string(to_string(o.dataset)) + " expects " + std::string(series::to_string(expected)));
        }
        if (s.target.size() < static_cast<std::size_t>(o.horizon)) {
            throw BenchError("sample '" + s.sample_id + "' has " + std::to_string(s.target.size()) +
                             " target values, horizon is " + std::to_string(o.horizon));
        }
        if (s.series.size() < 2) throw BenchError("sample '" + s.sample_id + "' has fewer than 2 history values");
    }
    if (samples.empty()) result.warnings.push_back("input holds no samples");
    series::write_samples(o.output, samples);
    result.samples = samples.size();
    return result;
}

} // namespace

std::string_view to_string(Dataset dataset) {
    for (const auto& [d, name] : kDatasetNames) {
        if (d == dataset) return name;
    }
    return "synthetic";
}

std::string valid_dataset_names() {
    std::string out;
    for (const auto& [d, name] : kDatasetNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

Dataset parse_dataset(std::string_view name) {
    for (const auto& [d, n] : kDatasetNames) {
        if (n == name) return d;
    }
    throw UsageError("unknown dataset '" + std::string(name) + "'; valid datasets: " + valid_dataset_names());
}

std::vector<MethodKind> parse_methods(std::string_view list) {
    if (list == "all") return {kAllMethods.begin(), kAllMethods.end()};
    std::set<MethodKind> chosen;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        std::string_view name = list.substr(pos, comma - pos);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        const auto kind = find_method(name);
        if (!kind) {
            throw UsageError("unknown method '" + std::string(name) + "'; valid methods: " + valid_method_names() +
                             " (or all)");
        }
        chosen.insert(*kind);
        pos = comma + 1;
    }
    return {chosen.begin(), chosen.end()};
}

int default_horizon(Dataset dataset) {
    return dataset == Dataset::IHEPC || dataset == Dataset::Synthetic ? 6 : 1;
}

series::DomainKind domain_of(Dataset dataset) {
    switch (dataset) {
    case Dataset::SG: return series::DomainKind::Visitors;
    case Dataset::CT: return series::DomainKind::Temperature;
    case Dataset::ECL: return series::DomainKind::ElectricityDaily;
    case Dataset::IHEPC:
    case Dataset::Synthetic: return series::DomainKind::HouseholdCurrentHourly;
    }
    return series::DomainKind::Generic;
}

std::vector<series::Sample> synthetic_samples(std::size_t count, std::size_t length, int horizon, std::uint64_t seed) {
    if (horizon < 1) throw BenchError("horizon must be positive");
    std::vector<series::Sample> out;
    out.reserve(count);
    const auto start = series::make_timestamp(2020, 1, 1);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(mix_seed(seed, i));
        series::SynthParams p;
        p.intercept = rng.uniform(5.0, 15.0);
        p.slope = rng.uniform(-0.03, 0.03);
        p.amplitude = rng.uniform(1.0, 4.0);
        p.period = 24.0;
        p.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        p.noise_sd = rng.uniform(0.05, 0.3);
        p.start = start + std::chrono::days(static_cast<std::int64_t>(i));
        p.step = series::kHourly;
        p.context = series::SeriesContext::defaults_for(series::DomainKind::HouseholdCurrentHourly,
                                                        std::to_string(i + 1), series::kHourly);
        const auto full = series::synth_series(series::SynthKind::Noisy, p, length + static_cast<std::size_t>(horizon),
                                               rng.next_u64());
        const auto values = rounded(full.values());
        std::vector<double> history(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(length));
        std::vector<double> target(values.begin() + static_cast<std::ptrdiff_t>(length), values.end());
        out.push_back({numbered_id("syn", i), series::TimeSeries(std::move(history), p.start, p.step, p.context),
                       std::move(target)});
    }
    return out;
}

PrepareResult prepare_data(const PrepareOptions& o) {
    if (o.output.empty()) throw UsageError("prepare-data needs an output path");
    if (o.horizon < 1) throw UsageError("horizon must be positive");
    switch (o.dataset) {
    case Dataset::IHEPC:
        if (o.input.empty()) throw UsageError("prepare-data --dataset ihepc needs --input <raw IHEPC text file>");
        return prepare_ihepc(o);
    case Dataset::SG:
    case Dataset::CT:
    case Dataset::ECL:
        if (o.input.empty()) throw UsageError("prepare-data for short series needs --input <samples JSONL>");
        return prepare_short(o);
    case Dataset::Synthetic: {
        const auto samples = synthetic_samples(o.synthetic_count, o.windows.length, o.horizon, o.seed);
        series::write_samples(o.output, samples);
        return {samples.size(), {}};
    }
    }
    return {};
}

} // namespace tsprompt::bench
