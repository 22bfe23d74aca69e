#include "simlr/trend.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simlr {
namespace {

constexpr int kMinWeeklyPairs = 5;
constexpr double kRankThreshold = 1e-9;

struct SeriesFit {
  ArCoefficients coef{0.0, 1.0, 0.0, 0.0};
  double sigma2 = 0.0;
  int order = 0;
};

// Tries AR(order) for order = 3, 2, 1 and keeps the first full-rank design.
SeriesFit fit_series(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  for (int order = 3; order >= 1; --order) {
    const int rows = n - order;
    if (rows < order + 1) continue;
    Eigen::MatrixXd design(rows, order + 1);
    Eigen::VectorXd target(rows);
    for (int r = 0; r < rows; ++r) {
      const int t = r + order;
      target(r) = x[t];
      design(r, 0) = 1.0;
      for (int lag = 1; lag <= order; ++lag) design(r, lag) = x[t - lag];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < order + 1) continue;
    const Eigen::VectorXd beta = qr.solve(target);
    SeriesFit fit;
    fit.order = order;
    fit.coef = {0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k <= order; ++k) fit.coef[k] = beta(k);
    fit.sigma2 = (design * beta - target).squaredNorm() / rows;
    return fit;
  }
  SeriesFit persistence;
  if (n >= 2) {
    double ss = 0.0;
    for (int t = 1; t < n; ++t) ss += (x[t] - x[t - 1]) * (x[t] - x[t - 1]);
    persistence.sigma2 = ss / (n - 1);
  }
  return persistence;
}

}  // namespace

TrendModel TrendModel::persistence() {
  TrendModel m;
  m.beta_order = 0;
  m.gamma_order = 0;
  return m;
}

TrendModel fit_trend(std::span<const WeeklyParams> weekly) {
  if (static_cast<int>(weekly.size()) < kMinWeeklyPairs) return TrendModel::persistence();
  std::vector<double> betas, gammas;
  betas.reserve(weekly.size());
  gammas.reserve(weekly.size());
  for (const auto& w : weekly) {
    betas.push_back(w.beta);
    gammas.push_back(w.gamma);
  }
  const SeriesFit b = fit_series(betas);
  const SeriesFit g = fit_series(gammas);
  TrendModel model;
  model.alpha = b.coef;
  model.omega = g.coef;
  model.sigma_beta2 = b.sigma2;
  model.sigma_gamma2 = g.sigma2;
  model.beta_order = b.order;
  model.gamma_order = g.order;
  return model;
}

double ar_mean(const ArCoefficients& coef, const LagTriple& lags) {
  return coef[0] + coef[1] * lags[0] + coef[2] * lags[1] + coef[3] * lags[2];
}

RateParams predict_params(const TrendModel& model, const LagTriple& last3_beta,
                          const LagTriple& last3_gamma) {
  for (double v : last3_beta) {
    if (!std::isfinite(v)) throw std::invalid_argument("predict_params: non-finite beta lag");
  }
  for (double v : last3_gamma) {
    if (!std::isfinite(v)) throw std::invalid_argument("predict_params: non-finite gamma lag");
  }
  return {std::max(ar_mean(model.alpha, last3_beta), 0.0),
          std::max(ar_mean(model.omega, last3_gamma), 0.0)};
}

ArCoefficients theta_to_alpha(const ArCoefficients& theta) {
  // v = x1 - x2, a = x1 - 2 x2 + x3
  return {theta[0], theta[1] + theta[2] + theta[3], -theta[2] - 2.0 * theta[3], theta[3]};
}

WeekOutcome run_week(const SirState& start, const RateParams& params) {
  SirState cur = start;
  for (int day = 0; day < 7; ++day) cur = step(cur, params);
  return {cur, new_infections(start, cur)};
}

std::vector<double> tfvsir_forecast(const SirState& state, std::span<const WeeklyParams> history,
                                    const TrendModel& model, int horizon) {
  if (horizon < 1 || horizon > 4) throw std::invalid_argument("tfvsir_forecast: horizon must be 1..4");
  if (history.size() < 3) throw std::invalid_argument("tfvsir_forecast: need >= 3 weeks of history");
  const std::size_t n = history.size();
  LagTriple betas{history[n - 1].beta, history[n - 2].beta, history[n - 3].beta};
  LagTriple gammas{history[n - 1].gamma, history[n - 2].gamma, history[n - 3].gamma};
  std::vector<double> out;
  out.reserve(horizon);
  SirState cur = state;
  for (int h = 0; h < horizon; ++h) {
    const RateParams next = predict_params(model, betas, gammas);
    const WeekOutcome week = run_week(cur, next);
    out.push_back(week.new_infections);
    cur = week.end;
    betas = {next.beta, betas[0], betas[1]};
    gammas = {next.gamma, gammas[0], gammas[1]};
  }
  return out;
}

}  // namespace simlr
