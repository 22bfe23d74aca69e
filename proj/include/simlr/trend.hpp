#pragma once

#include <array>
#include <span>
#include <vector>

#include "simlr/param_fit.hpp"
#include "simlr/sir.hpp"

namespace simlr {

using ArCoefficients = std::array<double, 4>;  // intercept, lag 1, lag 2, lag 3
using LagTriple = std::array<double, 3>;       // most recent first

// Linear-Gaussian AR(3) evolution of the weekly rates while the trend holds.
struct TrendModel {
  ArCoefficients alpha{0.0, 1.0, 0.0, 0.0};  // beta
  ArCoefficients omega{0.0, 1.0, 0.0, 0.0};  // gamma
  double sigma_beta2 = 0.0;
  double sigma_gamma2 = 0.0;

  // Number of lags actually estimated for each series. Collinear designs are
  // refitted with fewer lags; 0 means the persistence fallback.
  int beta_order = 3;
  int gamma_order = 3;

  bool beta_persistence() const { return beta_order == 0; }
  bool gamma_persistence() const { return gamma_order == 0; }

  static TrendModel persistence();
};

// Least-squares (Gaussian maximum likelihood) fit of both AR(3) models.
// Falls back to persistence with fewer than 5 weekly pairs.
TrendModel fit_trend(std::span<const WeeklyParams> weekly);

double ar_mean(const ArCoefficients& coef, const LagTriple& lags);

// Conditional means of next week's rates, floored at zero.
RateParams predict_params(const TrendModel& model, const LagTriple& last3_beta,
                          const LagTriple& last3_gamma);

// Maps level/velocity/acceleration weights to the equivalent AR(3) weights.
ArCoefficients theta_to_alpha(const ArCoefficients& theta);

struct WeekOutcome {
  SirState end;
  double new_infections = 0.0;
};

// Seven daily steps at fixed rates.
WeekOutcome run_week(const SirState& start, const RateParams& params);

// Mean-path forecast of weekly new infections for 1..4 weeks, rolling the
// lag window forward on its own predictions. Needs >= 3 weeks of history.
std::vector<double> tfvsir_forecast(const SirState& state, std::span<const WeeklyParams> history,
                                    const TrendModel& model, int horizon);

}  // namespace simlr
