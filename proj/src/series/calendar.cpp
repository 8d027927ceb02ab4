#include "tsprompt/calendar.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace tsprompt::series {

namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 13> kMonths{
    "",     "January", "February",  "March",   "April",    "May",     "June",
    "July", "August",  "September", "October", "November", "December"};

constexpr std::array<std::string_view, 7> kWeekdays{
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw SeriesError("invalid " + std::string(what) + " in timestamp: '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

std::string_view month_name(unsigned month) {
    return month < kMonths.size() ? kMonths[month] : std::string_view{};
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second) {
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) {
        throw SeriesError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                          std::to_string(day));
    }
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59) {
        throw SeriesError("invalid time of day");
    }
    return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

Timestamp floor_hour(Timestamp t) { return std::chrono::floor<hours>(t); }

std::string format_long_date(Timestamp t) {
    const sys_days day_point = std::chrono::floor<days>(t);
    const year_month_day ymd{day_point};
    const weekday wd{day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %02u, %d, %s", kMonths[unsigned(ymd.month())].data(), unsigned(ymd.day()),
                  int(ymd.year()), kWeekdays[wd.c_encoding()].data());
    return buf;
}

std::string format_iso(Timestamp t) {
    const sys_days day_point = std::chrono::floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{t - day_point};
    char buf[64];
    if (tod.to_duration().count() == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()), unsigned(ymd.month()),
                      unsigned(ymd.day()), int(tod.hours().count()), int(tod.minutes().count()),
                      int(tod.seconds().count()));
    }
    return buf;
}

Timestamp parse_iso(std::string_view text) {
    // YYYY-MM-DD[(T| )HH:MM[:SS]]
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        throw SeriesError("expected YYYY-MM-DD timestamp, got '" + std::string(text) + "'");
    }
    const int year = parse_int(text.substr(0, 4), "year");
    const int month = parse_int(text.substr(5, 2), "month");
    const int day = parse_int(text.substr(8, 2), "day");
    int hour = 0;
    int minute = 0;
    int second = 0;
    if (text.size() > 10) {
        if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || text[13] != ':') {
            throw SeriesError("malformed time part in '" + std::string(text) + "'");
        }
        hour = parse_int(text.substr(11, 2), "hour");
        minute = parse_int(text.substr(14, 2), "minute");
        if (text.size() > 16) {
            if (text.size() != 19 || text[16] != ':') {
                throw SeriesError("malformed seconds in '" + std::string(text) + "'");
            }
            second = parse_int(text.substr(17, 2), "second");
        }
    }
    if (month < 1 || day < 1) throw SeriesError("invalid date '" + std::string(text) + "'");
    return make_timestamp(year, unsigned(month), unsigned(day), hour, minute, second);
}

} // namespace tsprompt::series
