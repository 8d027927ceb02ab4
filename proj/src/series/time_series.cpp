#include "tsprompt/series.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace tsprompt::series {

namespace {

struct DomainName {
    DomainKind kind;
    std::string_view name;
};

constexpr std::array<DomainName, 5> kDomainNames{{
    {DomainKind::Visitors, "Visitors"},
    {DomainKind::Temperature, "Temperature"},
    {DomainKind::ElectricityDaily, "ElectricityDaily"},
    {DomainKind::HouseholdCurrentHourly, "HouseholdCurrentHourly"},
    {DomainKind::Generic, "Generic"},
}};

} // namespace

std::string_view to_string(DomainKind kind) {
    for (const auto& entry : kDomainNames) {
        if (entry.kind == kind) return entry.name;
    }
    return "Generic";
}

DomainKind domain_kind_from_string(std::string_view name) {
    for (const auto& entry : kDomainNames) {
        if (entry.name == name) return entry.kind;
    }
    std::string valid;
    for (const auto& entry : kDomainNames) {
        if (!valid.empty()) valid += ", ";
        valid += entry.name;
    }
    throw SeriesError("unknown domain_kind '" + std::string(name) + "' (valid: " + valid + ")");
}

SeriesContext SeriesContext::defaults_for(DomainKind kind, std::string entity_id, Step step) {
    SeriesContext ctx;
    ctx.domain_kind = kind;
    ctx.entity_id = std::move(entity_id);
    ctx.resolution_phrase = step == kHourly ? "in each hour" : "on each day";
    switch (kind) {
    case DomainKind::Visitors: ctx.unit_phrase = "people"; break;
    case DomainKind::Temperature: ctx.unit_phrase = "degree"; break;
    case DomainKind::ElectricityDaily: ctx.unit_phrase = "kWh"; break;
    case DomainKind::HouseholdCurrentHourly: ctx.unit_phrase = "ampere"; break;
    case DomainKind::Generic: ctx.unit_phrase = "units"; break;
    }
    return ctx;
}

TimeSeries::TimeSeries(std::vector<double> values, Timestamp start, Step step, SeriesContext context)
    : values_(std::move(values)), start_(start), step_(step), context_(std::move(context)) {
    if (values_.empty()) throw SeriesError("time series must not be empty");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw SeriesError("time series value at index " + std::to_string(k) + " is not finite");
        }
    }
    if (step_.count() <= 0) throw SeriesError("time series step must be positive");
}

TimeSeries TimeSeries::slice(std::size_t offset, std::size_t length) const {
    if (length == 0 || offset + length > values_.size()) {
        throw SeriesError("slice [" + std::to_string(offset) + ", +" + std::to_string(length) +
                          ") out of range for series of length " + std::to_string(values_.size()));
    }
    std::vector<double> part(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                             values_.begin() + static_cast<std::ptrdiff_t>(offset + length));
    return TimeSeries(std::move(part), timestamp_at(offset), step_, context_);
}

double round_to_decimals(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = std::round(value * scale);
    if (!std::isfinite(scaled) || std::fabs(scaled) > 9.0e15) return value;
    const double out = scaled / scale;
    return out == 0.0 ? 0.0 : out; // no negative zero
}

} // namespace tsprompt::series
