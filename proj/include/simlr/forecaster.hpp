#pragma once

#include <string>
#include <vector>

#include "simlr/dates.hpp"
#include "simlr/param_fit.hpp"
#include "simlr/pgm.hpp"
#include "simlr/region.hpp"
#include "simlr/trend.hpp"

namespace simlr {

// Inputs of one forecast, all observed at or before week t (the last full
// week before the origin).
struct ForecastInputs {
  std::string region;
  Date origin;
  double population = 0.0;
  SirState state;                     // start of the origin week
  std::vector<WeeklyParams> history;  // fitted weekly rates, oldest first
  std::vector<double> weekly_cases;   // observed weekly new infections, last = week t
  std::vector<int> weekly_cp;         // observed CP, last = week t
  int weeks_since_change = 0;         // at week t
};

ForecastInputs make_forecast_inputs(const TrainingSlice& slice, const FitConfig& config);

struct Forecast {
  std::string region;
  Date origin;
  int horizon = 1;
  double point = 0.0;
  double tfvsir_point = 0.0;
  double slow_point = 0.0;
  double weight_trend = 1.0;  // p(CT = 0)
  double weight_slow = 0.0;   // p(CT = -1) + p(CT = +1)
  Dist3 ct{0.0, 1.0, 0.0};
  Dist3 cp{0.0, 1.0, 0.0};            // forecast CP for the target week
  std::vector<Dist3> cp_forecasts;   // CP marginals feeding CT; empty for h <= 2
};

std::vector<double> slow_forecast(double last_observed_week_cases, int horizon);

// Rates for the coming week that reproduce `target` weekly new infections
// from `state` at the given gamma (bisection on beta).
RateParams rates_for_weekly_cases(const SirState& state, double gamma, double target);

// Mixture of the trend-following SIR and the same-as-last-week experts,
// weighted by the CT distribution. Steps chain on the mixture points.
// Needs >= 5 fitted weeks and >= 4 weeks of CP history.
std::vector<Forecast> mixture_forecast(const ForecastInputs& inputs, const PgmConfig& pgm,
                                       const TrendModel& trend, int horizon);

}  // namespace simlr
