#include <algorithm>

#include "simlr/data.hpp"

namespace simlr {
namespace {

// Step-function lookup: the last row on or before d, else the first row.
PolicyLevels level_on(const PolicySeries& s, Date d) {
  const auto it = std::upper_bound(s.dates.begin(), s.dates.end(), d);
  if (it == s.dates.begin()) return s.levels.front();
  return s.levels[static_cast<std::size_t>(it - s.dates.begin()) - 1];
}

}  // namespace

PolicyTimeline derive_policy_changes(const PolicySeries& series, Date first_week, int weeks,
                                     int initial_weeks_since_change) {
  if (series.dates.empty()) throw DataError("derive_policy_changes: empty policy series");
  if (!is_sunday(first_week)) throw std::invalid_argument("derive_policy_changes: weeks start on Sunday");
  PolicyTimeline tl;
  tl.region = series.region;
  tl.first_week = first_week;
  int since = initial_weeks_since_change;
  for (int w = 0; w < weeks; ++w) {
    bool stricter = false, looser = false;
    for (int day = 0; day < 7; ++day) {
      const Date d = first_week + std::chrono::days{7 * w + day};
      const PolicyLevels now = level_on(series, d);
      const PolicyLevels before = level_on(series, d - std::chrono::days{1});
      for (int k = 0; k < 3; ++k) {
        stricter |= now[k] > before[k];
        looser |= now[k] < before[k];
      }
    }
    const int cp = stricter ? 1 : (looser ? -1 : 0);
    since = cp != 0 ? 0 : since + 1;
    tl.cp.push_back(cp);
    tl.weeks_since_change.push_back(since);
  }
  return tl;
}

}  // namespace simlr
