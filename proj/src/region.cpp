#include "simlr/region.hpp"

#include <cmath>
#include <limits>

namespace simlr {

RegionInput make_region_input(const RawSeries& raw, PolicySeries policy, double population) {
  if (raw.dates.size() < 2) throw DataError("region input needs at least two days");
  RegionInput in;
  in.region = raw.region;
  in.population = population;
  in.first_day = raw.dates[1];
  in.daily_cases = difference(raw.cumulative_cases);
  in.daily_deaths = difference(raw.cumulative_deaths);
  in.policy = std::move(policy);
  return in;
}

TrainingSlice make_training_slice(const RegionInput& input, Date origin, const CleanOptions& options) {
  if (!is_sunday(origin)) throw DataError("origin " + format_date(origin) + " is not a Sunday");
  if (input.daily_cases.size() != input.daily_deaths.size()) {
    throw DataError("case and death series differ in length");
  }
  const long origin_idx = (origin - input.first_day).count();
  if (origin_idx <= 0) throw ColdStartError("origin " + format_date(origin) + " precedes the data");
  if (origin_idx > static_cast<long>(input.daily_cases.size())) {
    throw DataError("origin " + format_date(origin) + " is beyond the data");
  }
  if (origin_idx < 11) throw ColdStartError("fewer than 11 days before origin " + format_date(origin));

  const std::span<const double> cases(input.daily_cases.data(), static_cast<std::size_t>(origin_idx));
  const std::span<const double> deaths(input.daily_deaths.data(), static_cast<std::size_t>(origin_idx));
  TrainingSlice slice;
  slice.region = input.region;
  slice.population = input.population;
  slice.origin = origin;

  const std::vector<double> inf = clean_daily(cases, options, &slice.stats);
  CleanOptions death_options = options;
  death_options.clamp_outliers = false;
  const std::vector<double> dead = clean_daily(deaths, death_options);
  const std::vector<SirState> states = build_sir_series(inf, dead, input.population);

  // states[d] is the state at the start of day d.
  const long first_sunday = (7 - std::chrono::weekday{input.first_day}.c_encoding()) % 7;
  const long weeks = (origin_idx - first_sunday) / 7;
  if (weeks < 1) throw ColdStartError("no full week before origin " + format_date(origin));
  const long grid_start = origin_idx - 7 * weeks;
  slice.first_week = input.first_day + std::chrono::days{grid_start};
  slice.daily_states.assign(states.begin() + grid_start, states.begin() + origin_idx + 1);
  for (long w = 0; w < weeks; ++w) {
    double total = 0.0;
    for (long d = 0; d < 7; ++d) total += inf[static_cast<std::size_t>(grid_start + 7 * w + d)];
    slice.weekly_cases.push_back(total);
  }
  if (input.policy.dates.empty()) throw DataError("region has no policy data");
  // Only policy rows before the origin are visible.
  PolicySeries visible;
  visible.region = input.policy.region;
  for (std::size_t k = 0; k < input.policy.dates.size() && input.policy.dates[k] < origin; ++k) {
    visible.dates.push_back(input.policy.dates[k]);
    visible.levels.push_back(input.policy.levels[k]);
  }
  if (visible.dates.empty()) throw ColdStartError("no policy data before origin " + format_date(origin));
  const PolicyTimeline tl = derive_policy_changes(visible, slice.first_week, static_cast<int>(weeks));
  slice.weekly_cp = tl.cp;
  slice.weeks_since_change = tl.weeks_since_change;
  return slice;
}

std::vector<double> weekly_totals(const RegionInput& input, Date from, int weeks, const CleanOptions& options) {
  const std::vector<double> inf = clean_daily(input.daily_cases, options);
  std::vector<double> out;
  const long start = (from - input.first_day).count();
  for (int w = 0; w < weeks; ++w) {
    const long a = start + 7L * w;
    if (a < 0 || a + 7 > static_cast<long>(inf.size())) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double total = 0.0;
    for (long d = 0; d < 7; ++d) total += inf[static_cast<std::size_t>(a + d)];
    out.push_back(total);
  }
  return out;
}

FittedHistory fit_history(const TrainingSlice& slice, const FitConfig& config) {
  FittedHistory h;
  const std::span<const SirState> states(slice.daily_states);
  for (int w = 0; w < slice.weeks(); ++w) {
    try {
      const WindowFit fit = fit_window(states.subspan(7 * static_cast<std::size_t>(w), 8), config);
      if (h.weekly.empty()) h.first_week = w;
      h.weekly.push_back({w, fit.params.beta, fit.params.gamma, fit.residual, fit.clamped});
    } catch (const UnidentifiableError&) {
      h.weekly.clear();
    }
  }
  return h;
}

}  // namespace simlr
