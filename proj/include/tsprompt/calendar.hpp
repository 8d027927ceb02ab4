#pragma once

#include "tsprompt/series.hpp"

#include <string>
#include <string_view>

namespace tsprompt::series {

/// "April 05, 2020, Sunday": zero-padded day, English month and weekday.
std::string format_long_date(Timestamp t);

/// "2020-04-15" at midnight, "2006-12-16T17:00:00" otherwise.
std::string format_iso(Timestamp t);

/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" or the same with a space.
Timestamp parse_iso(std::string_view text);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0, int second = 0);

/// Start of the calendar hour containing t.
Timestamp floor_hour(Timestamp t);

/// English month names indexed 1..12; index 0 is empty.
std::string_view month_name(unsigned month);

} // namespace tsprompt::series
