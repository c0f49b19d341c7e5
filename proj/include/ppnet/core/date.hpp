#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace ppnet {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date ("2020-03-17").
Date parse_date(std::string_view text);
std::string format_date(const Date& date);
/// Days since 1970-01-01.
long day_number(const Date& date);

}  // namespace ppnet
