#include "simlr/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "simlr/error.hpp"

namespace simlr {
namespace {

constexpr int kMinFittedWeeks = 5;
constexpr int kMinPolicyWeeks = 4;

}  // namespace

ForecastInputs make_forecast_inputs(const TrainingSlice& slice, const FitConfig& config) {
  ForecastInputs in;
  in.region = slice.region;
  in.origin = slice.origin;
  in.population = slice.population;
  in.state = slice.daily_states.back();
  in.history = fit_history(slice, config).weekly;
  in.weekly_cases = slice.weekly_cases;
  in.weekly_cp = slice.weekly_cp;
  in.weeks_since_change = slice.weeks_since_change.empty() ? 0 : slice.weeks_since_change.back();
  return in;
}

std::vector<double> slow_forecast(double last_observed_week_cases, int horizon) {
  if (horizon < 1 || horizon > 4) throw std::invalid_argument("slow_forecast: horizon must be 1..4");
  if (!(last_observed_week_cases >= 0.0)) throw std::invalid_argument("slow_forecast: negative cases");
  return std::vector<double>(static_cast<std::size_t>(horizon), last_observed_week_cases);
}

RateParams rates_for_weekly_cases(const SirState& state, double gamma, double target) {
  auto cases_at = [&](double beta) { return run_week(state, {beta, gamma}).new_infections; };
  if (target <= 0.0 || state.i <= 0.0 || state.s <= 0.0) return {0.0, gamma};
  double lo = 0.0;
  double hi = 1.0;
  while (cases_at(hi) < target && hi < 1e6) hi *= 2.0;
  if (cases_at(hi) < target) return {hi, gamma};
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cases_at(mid) < target ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), gamma};
}

std::vector<Forecast> mixture_forecast(const ForecastInputs& in, const PgmConfig& pgm,
                                       const TrendModel& trend, int horizon) {
  if (horizon < 1 || horizon > 4) throw std::invalid_argument("mixture_forecast: horizon must be 1..4");
  if (static_cast<int>(in.history.size()) < kMinFittedWeeks) {
    throw ColdStartError("need at least " + std::to_string(kMinFittedWeeks) +
                         " fitted weeks before the origin, have " + std::to_string(in.history.size()));
  }
  if (static_cast<int>(in.weekly_cp.size()) < kMinPolicyWeeks || in.weekly_cases.size() < 2) {
    throw ColdStartError("need at least " + std::to_string(kMinPolicyWeeks) +
                         " weeks of policy and case history before the origin");
  }

  // Projected cases for the urgency features of unobserved weeks.
  const std::vector<double> projection = tfvsir_forecast(in.state, in.history, trend, horizon);
  std::vector<double> cases = in.weekly_cases;
  cases.insert(cases.end(), projection.begin(), projection.end() - 1);
  const std::size_t t = in.weekly_cases.size() - 1;
  std::vector<Dist3> urgency;
  for (int j = 0; j < horizon; ++j) {
    urgency.push_back(urgency_distribution(
        urgency_features(cases[t + j], cases[t + j - 1], in.population), pgm.urgency));
  }
  const PolicyPathDistribution chain = policy_chain(pgm.cpts, in.weeks_since_change, urgency);

  // CP value at absolute week index w along a path of future weeks.
  const long tt = static_cast<long>(in.weekly_cp.size()) - 1;
  auto cp_at = [&](long w, const std::vector<int>* path) {
    return w <= tt ? in.weekly_cp[static_cast<std::size_t>(w)] : (*path)[static_cast<std::size_t>(w - tt - 1)];
  };

  const std::size_t n = in.history.size();
  LagTriple betas{in.history[n - 1].beta, in.history[n - 2].beta, in.history[n - 3].beta};
  LagTriple gammas{in.history[n - 1].gamma, in.history[n - 2].gamma, in.history[n - 3].gamma};
  SirState state = in.state;
  double last_point = in.weekly_cases.back();

  std::vector<Forecast> out;
  for (int h = 1; h <= horizon; ++h) {
    Forecast f;
    f.region = in.region;
    f.origin = in.origin;
    f.horizon = h;

    const long lag1 = tt + h - 2, lag2 = tt + h - 3, lag3 = tt + h - 4;
    if (lag1 <= tt) {
      f.ct = ct_distribution(cp_at(lag1, nullptr), cp_at(lag2, nullptr), cp_at(lag3, nullptr),
                             pgm.cpts.ct);
    } else {
      f.ct = {0.0, 0.0, 0.0};
      for (const auto& [path, p] : chain.paths) {
        if (p == 0.0) continue;
        const Dist3 row = ct_distribution(cp_at(lag1, &path), cp_at(lag2, &path), cp_at(lag3, &path),
                                          pgm.cpts.ct);
        for (int k = 0; k < 3; ++k) f.ct[k] += p * row[k];
      }
      // Path masses sum to 1 only up to rounding; renormalize so a
      // deterministic CT table still yields exact 0/1 weights.
      const double total = f.ct[0] + f.ct[1] + f.ct[2];
      for (double& v : f.ct) v /= total;
      f.cp_forecasts.assign(chain.marginals.begin(), chain.marginals.begin() + (h - 2));
    }
    f.cp = chain.marginals[static_cast<std::size_t>(h - 1)];
    f.weight_trend = f.ct[1];
    f.weight_slow = 1.0 - f.weight_trend;  // exact at both degenerate ends

    const RateParams predicted = predict_params(trend, betas, gammas);
    const WeekOutcome tf_week = run_week(state, predicted);
    f.tfvsir_point = tf_week.new_infections;
    f.slow_point = last_point;
    f.point = f.weight_trend * f.tfvsir_point + f.weight_slow * f.slow_point;
    out.push_back(f);

    // Chain the next step on this step's mixture point.
    RateParams used = predicted;
    SirState next_state = tf_week.end;
    if (f.weight_slow != 0.0) {
      used = rates_for_weekly_cases(state, predicted.gamma, f.point);
      next_state = run_week(state, used).end;
    }
    state = next_state;
    betas = {used.beta, betas[0], betas[1]};
    gammas = {used.gamma, gammas[0], gammas[1]};
    last_point = f.point;
  }
  return out;
}

}  // namespace simlr
