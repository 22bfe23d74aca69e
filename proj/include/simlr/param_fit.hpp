#pragma once

#include <span>
#include <vector>

#include "simlr/sir.hpp"

namespace simlr {

// Ridge-style pull of (beta, gamma) toward (beta0, gamma0). With Gaussian
// priors of variance sigma^2, lambda = 1 / (2 sigma^2).
struct FitConfig {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double beta0 = 0.0;
  double gamma0 = 0.0;
};

struct WindowFit {
  RateParams params;
  // Sum over transitions of the squared one-step prediction error of (S, I).
  double residual = 0.0;
  // The unconstrained optimum had a negative coordinate; params is the
  // optimum over the non-negative quadrant instead.
  bool clamped = false;
};

struct WeeklyParams {
  int week_index = 0;
  double beta = 0.0;
  double gamma = 0.0;
  double residual = 0.0;
  bool clamped = false;

  RateParams rates() const { return {beta, gamma}; }
};

// Objective minimized by fit_window: squared one-step errors plus the prior
// penalty. Exposed for oracles and diagnostics.
double fit_objective(std::span<const SirState> states, const FitConfig& config,
                     const RateParams& params);

// Closed-form least-squares fit of one (beta, gamma) to consecutive daily
// states. Throws UnidentifiableError when the normal matrix is singular.
WindowFit fit_window(std::span<const SirState> states, const FitConfig& config);

// Fits one (beta, gamma) per 7-day window. daily_states.size() must be
// 7 * weeks + 1; window k spans states [7k, 7k + 7].
std::vector<WeeklyParams> fit_weekly_series(std::span<const SirState> daily_states,
                                            const FitConfig& config);

}  // namespace simlr
