#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace simlr {

using Date = std::chrono::sys_days;

// Accepts YYYY-MM-DD, YYYYMMDD (policy tables) and M/D/YY (case tables).
Date parse_date(std::string_view text);
std::string format_date(Date d);

bool is_sunday(Date d);
// The Sunday on or before d; weeks run Sunday through Saturday.
Date week_start(Date d);

}  // namespace simlr
