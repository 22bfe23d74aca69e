#include "simlr/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "simlr/error.hpp"

namespace simlr {

MapeResult mape(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw std::invalid_argument("mape: length mismatch");
  MapeResult r;
  double total = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    if (actual[k] > 0.0) {
      total += 100.0 * std::abs(actual[k] - predicted[k]) / actual[k];
      ++r.used;
    } else {
      ++r.excluded_zero;
    }
  }
  if (r.used == 0) throw DataError("MAPE undefined: no week with positive actual cases");
  r.value = total / r.used;
  return r;
}

ModelForecaster make_slow_model() {
  return {"SLOW", [](const TrainingSlice& slice, int horizon) {
            if (slice.weekly_cases.empty()) throw ColdStartError("SLOW needs one observed week");
            return slow_forecast(slice.weekly_cases.back(), horizon);
          }};
}

ModelForecaster make_tfvsir_model(FitConfig fit) {
  return {"tf-v-SIR", [fit](const TrainingSlice& slice, int horizon) {
            const FittedHistory h = fit_history(slice, fit);
            if (h.weekly.size() < 3) throw ColdStartError("tf-v-SIR needs 3 fitted weeks before the origin");
            const TrendModel trend = fit_trend(h.weekly);
            return tfvsir_forecast(slice.daily_states.back(), h.weekly, trend, horizon);
          }};
}

ModelForecaster make_simlr_model(PgmConfig pgm, FitConfig fit) {
  return {"SIMLR", [pgm = std::move(pgm), fit](const TrainingSlice& slice, int horizon) {
            const ForecastInputs in = make_forecast_inputs(slice, fit);
            const TrendModel trend = fit_trend(in.history);
            std::vector<double> points;
            for (const Forecast& f : mixture_forecast(in, pgm, trend, horizon)) points.push_back(f.point);
            return points;
          }};
}

std::vector<Date> default_origins() {
  std::vector<Date> out;
  const Date first{std::chrono::year{2020} / std::chrono::July / 26};
  for (int k = 0; k < 39; ++k) out.push_back(first + std::chrono::days{7 * k});
  return out;
}

EvalResult rolling_evaluate(const RegionInput& input, std::span<const ModelForecaster> models,
                            std::span<const Date> origins, const EvalOptions& options) {
  const int H = options.max_horizon;
  if (H < 1 || H > 4) throw std::invalid_argument("rolling_evaluate: horizon must be 1..4");
  EvalResult result;
  for (const auto& m : models) {
    for (int h = 1; h <= H; ++h) result.reports.push_back({input.region, m.name, h, {}, 0.0, 0, 0, 0});
  }
  auto report = [&](std::size_t model, int h) -> EvalReport& {
    return result.reports[model * static_cast<std::size_t>(H) + static_cast<std::size_t>(h - 1)];
  };

  for (const Date origin : origins) {
    TrainingSlice slice;
    try {
      slice = make_training_slice(input, origin, options.clean);
    } catch (const DataError& e) {
      result.skips.push_back({origin, "", 0, e.what()});
      for (auto& r : result.reports) ++r.skipped;
      continue;
    }
    const std::vector<double> actual = weekly_totals(input, origin, H, options.clean);
    for (std::size_t m = 0; m < models.size(); ++m) {
      std::vector<double> predicted;
      try {
        predicted = models[m].forecast(slice, H);
      } catch (const DataError& e) {
        result.skips.push_back({origin, models[m].name, 0, e.what()});
        for (int h = 1; h <= H; ++h) ++report(m, h).skipped;
        continue;
      }
      for (int h = 1; h <= H; ++h) {
        const double a = actual[static_cast<std::size_t>(h - 1)];
        if (std::isnan(a)) {
          result.skips.push_back({origin, models[m].name, h, "target week beyond the data"});
          ++report(m, h).skipped;
          continue;
        }
        const double p = predicted[static_cast<std::size_t>(h - 1)];
        const double ape = a > 0.0 ? 100.0 * std::abs(a - p) / a : std::numeric_limits<double>::quiet_NaN();
        report(m, h).errors.push_back({origin, a, p, ape});
      }
    }
  }

  for (auto& r : result.reports) {
    std::vector<double> a, p;
    for (const auto& e : r.errors) {
      a.push_back(e.actual);
      p.push_back(e.predicted);
    }
    try {
      const MapeResult mr = mape(a, p);
      r.mape = mr.value;
      r.n_origins = mr.used;
      r.excluded_zero = mr.excluded_zero;
    } catch (const DataError&) {
      r.mape = std::numeric_limits<double>::quiet_NaN();
      r.n_origins = 0;
      r.excluded_zero = static_cast<int>(r.errors.size());
    }
  }
  return result;
}

}  // namespace simlr
