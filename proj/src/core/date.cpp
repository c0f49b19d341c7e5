#include "ppnet/core/date.hpp"

#include <charconv>
#include <cstdio>

#include "ppnet/core/error.hpp"

namespace ppnet {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError("invalid date: '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw InputError("invalid date: '" + std::string(text) + "' (expected YYYY-MM-DD)");
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    const int d = parse_int(text.substr(8, 2), text);
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw InputError("invalid date: '" + std::string(text) + "'");
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

long day_number(const Date& date) {
    return static_cast<long>(std::chrono::sys_days{date}.time_since_epoch().count());
}

}  // namespace ppnet
