#include "simlr/dates.hpp"

#include <charconv>
#include <cstdio>

#include "simlr/error.hpp"

namespace simlr {
namespace {

int to_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw DataError("malformed date: '" + std::string(whole) + "'");
  }
  return v;
}

Date make(int y, int m, int d, std::string_view whole) {
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw DataError("invalid calendar date: '" + std::string(whole) + "'");
  return Date{ymd};
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.find('/') != std::string_view::npos) {
    const auto a = text.find('/');
    const auto b = text.find('/', a + 1);
    if (b == std::string_view::npos) throw DataError("malformed date: '" + std::string(text) + "'");
    const int m = to_int(text.substr(0, a), text);
    const int d = to_int(text.substr(a + 1, b - a - 1), text);
    int y = to_int(text.substr(b + 1), text);
    if (y < 100) y += 2000;
    return make(y, m, d, text);
  }
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    return make(to_int(text.substr(0, 4), text), to_int(text.substr(5, 2), text),
                to_int(text.substr(8, 2), text), text);
  }
  if (text.size() == 8) {
    return make(to_int(text.substr(0, 4), text), to_int(text.substr(4, 2), text),
                to_int(text.substr(6, 2), text), text);
  }
  throw DataError("malformed date: '" + std::string(text) + "'");
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool is_sunday(Date d) { return std::chrono::weekday{d} == std::chrono::Sunday; }

Date week_start(Date d) {
  return d - std::chrono::days{std::chrono::weekday{d}.c_encoding()};
}

}  // namespace simlr
