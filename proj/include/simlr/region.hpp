#pragma once

#include <string>
#include <vector>

#include "simlr/data.hpp"
#include "simlr/param_fit.hpp"

namespace simlr {

// Everything known about a region before cleaning. Daily values are first
// differences of the cumulative tables (NaN = missing; negatives allowed).
struct RegionInput {
  std::string region;
  double population = 0.0;
  Date first_day;  // date of daily_cases[0]
  std::vector<double> daily_cases;
  std::vector<double> daily_deaths;
  PolicySeries policy;
};

RegionInput make_region_input(const RawSeries& raw, PolicySeries policy, double population);

// What a model may see when forecasting from `origin`: data strictly before
// the origin week, cleaned and rebuilt from that truncated view only.
struct TrainingSlice {
  std::string region;
  double population = 0.0;
  Date origin;      // first forecast week (a Sunday)
  Date first_week;  // Sunday of grid week 0
  // State at the start of each day from first_week to origin inclusive:
  // 7 * weeks + 1 entries.
  std::vector<SirState> daily_states;
  std::vector<double> weekly_cases;
  std::vector<int> weekly_cp;
  std::vector<int> weeks_since_change;
  CleanStats stats;

  int weeks() const { return static_cast<int>(weekly_cases.size()); }
};

TrainingSlice make_training_slice(const RegionInput& input, Date origin,
                                  const CleanOptions& options = {});

// Cleaned weekly totals for `weeks` grid weeks starting at `from` using the
// whole series. Weeks beyond the data are returned as NaN.
std::vector<double> weekly_totals(const RegionInput& input, Date from, int weeks,
                                  const CleanOptions& options = {});

// Weekly fits over the longest trailing run of identifiable windows.
struct FittedHistory {
  std::vector<WeeklyParams> weekly;
  int first_week = 0;  // grid index of weekly[0]
};

FittedHistory fit_history(const TrainingSlice& slice, const FitConfig& config);

}  // namespace simlr
