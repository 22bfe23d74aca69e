#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "simlr/dates.hpp"
#include "simlr/forecaster.hpp"
#include "simlr/param_fit.hpp"
#include "simlr/pgm.hpp"
#include "simlr/region.hpp"

namespace simlr {

struct MapeResult {
  double value = 0.0;  // percent
  int used = 0;
  int excluded_zero = 0;
};

// Mean of 100 |a - p| / a over entries with a > 0. Throws DataError if no
// entry has a positive actual.
MapeResult mape(std::span<const double> actual, std::span<const double> predicted);

// A named model that forecasts weekly new infections for horizons 1..H from
// a training slice. Every model of one evaluation sees the same slice.
struct ModelForecaster {
  std::string name;
  std::function<std::vector<double>(const TrainingSlice&, int horizon)> forecast;
};

ModelForecaster make_slow_model();
ModelForecaster make_tfvsir_model(FitConfig fit);
ModelForecaster make_simlr_model(PgmConfig pgm, FitConfig fit);

struct OriginError {
  Date origin;
  double actual = 0.0;
  double predicted = 0.0;
  double ape = 0.0;  // percent; NaN when actual == 0 (excluded)
};

struct EvalReport {
  std::string region;
  std::string model;
  int horizon = 1;
  std::vector<OriginError> errors;
  double mape = 0.0;  // NaN when undefined
  int n_origins = 0;  // origins that entered the mean
  int excluded_zero = 0;
  int skipped = 0;
};

struct EvalSkip {
  Date origin;
  std::string model;  // empty when the whole origin was skipped
  int horizon = 0;    // 0 for every horizon
  std::string reason;
};

struct EvalResult {
  std::vector<EvalReport> reports;  // model-major, then horizon
  std::vector<EvalSkip> skips;
};

struct EvalOptions {
  int max_horizon = 4;
  CleanOptions clean;
};

// The 39 weekly origins from 2020-07-26 through 2021-04-18.
std::vector<Date> default_origins();

EvalResult rolling_evaluate(const RegionInput& input, std::span<const ModelForecaster> models,
                            std::span<const Date> origins, const EvalOptions& options = {});

}  // namespace simlr
