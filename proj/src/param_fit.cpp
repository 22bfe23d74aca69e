#include "simlr/param_fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "simlr/error.hpp"
#include "simlr/kernels.hpp"

namespace simlr {
namespace {

struct NormalEquations {
  double a_bb, a_bg, a_gg;
  double b_b, b_g;
  // largest squared design entry, used to judge singularity
  double scale;
};

NormalEquations assemble(std::span<const SirState> states, const FitConfig& config) {
  if (states.size() < 2) throw std::invalid_argument("fit_window: need at least two states");
  const double n = states.front().n;
  std::vector<double> s(states.size());
  std::vector<double> i(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].n != n) throw std::invalid_argument("fit_window: population changes within window");
    if (!std::isfinite(states[k].s) || !std::isfinite(states[k].i)) {
      throw std::invalid_argument("fit_window: non-finite state");
    }
    s[k] = states[k].s;
    i[k] = states[k].i;
  }
  const kernels::SirMoments m = kernels::sir_moments(s, i, n);
  NormalEquations eq{m.ata_bb + config.lambda1,
                     m.ata_bg,
                     m.ata_gg + config.lambda2,
                     m.atb_b + config.lambda1 * config.beta0,
                     m.atb_g + config.lambda2 * config.gamma0,
                     std::max(m.ata_bb, m.ata_gg)};
  return eq;
}

}  // namespace

double fit_objective(std::span<const SirState> states, const FitConfig& config,
                     const RateParams& params) {
  double total = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const StepDesign d = step_design(states[k - 1]);
    const double s_hat = d.m[0][0] * params.beta + d.m[0][1] * params.gamma + d.offset[0];
    const double i_hat = d.m[1][0] * params.beta + d.m[1][1] * params.gamma + d.offset[1];
    const double es = states[k].s - s_hat;
    const double ei = states[k].i - i_hat;
    total += es * es + ei * ei;
  }
  const double db = params.beta - config.beta0;
  const double dg = params.gamma - config.gamma0;
  return total + config.lambda1 * db * db + config.lambda2 * dg * dg;
}

WindowFit fit_window(std::span<const SirState> states, const FitConfig& config) {
  if (config.lambda1 < 0.0 || config.lambda2 < 0.0) {
    throw std::invalid_argument("fit_window: regularization weights must be non-negative");
  }
  const NormalEquations eq = assemble(states, config);

  // Relative singularity threshold on each diagonal and on the determinant.
  const double tiny = 1e-13 * std::max(eq.scale, std::numeric_limits<double>::min());
  const bool beta_dead = !(eq.a_bb > tiny);
  const bool gamma_dead = !(eq.a_gg > tiny);
  if (beta_dead && gamma_dead) throw UnidentifiableError("beta and gamma");
  if (beta_dead) throw UnidentifiableError("beta");
  if (gamma_dead) throw UnidentifiableError("gamma");
  const double det = eq.a_bb * eq.a_gg - eq.a_bg * eq.a_bg;
  if (!(det > 1e-12 * eq.a_bb * eq.a_gg)) throw UnidentifiableError("beta and gamma (collinear)");

  RateParams best{(eq.b_b * eq.a_gg - eq.a_bg * eq.b_g) / det,
                  (eq.a_bb * eq.b_g - eq.a_bg * eq.b_b) / det};
  bool clamped = false;
  if (best.beta < 0.0 || best.gamma < 0.0) {
    // The objective is a convex quadratic, so the constrained optimum lies on
    // one of the two boundary rays; take the better feasible one.
    clamped = true;
    const RateParams on_gamma_axis{0.0, std::max(eq.b_g / eq.a_gg, 0.0)};
    const RateParams on_beta_axis{std::max(eq.b_b / eq.a_bb, 0.0), 0.0};
    const double f_g = fit_objective(states, config, on_gamma_axis);
    const double f_b = fit_objective(states, config, on_beta_axis);
    best = f_b < f_g ? on_beta_axis : on_gamma_axis;
  }

  WindowFit fit;
  fit.params = best;
  fit.clamped = clamped;
  fit.residual = fit_objective(states, FitConfig{}, best);
  return fit;
}

std::vector<WeeklyParams> fit_weekly_series(std::span<const SirState> daily_states,
                                            const FitConfig& config) {
  if (daily_states.size() < 8 || (daily_states.size() - 1) % 7 != 0) {
    throw std::invalid_argument("fit_weekly_series: need 7 * weeks + 1 daily states, got " +
                                std::to_string(daily_states.size()));
  }
  const std::size_t weeks = (daily_states.size() - 1) / 7;
  std::vector<WeeklyParams> out;
  out.reserve(weeks);
  for (std::size_t w = 0; w < weeks; ++w) {
    try {
      const WindowFit fit = fit_window(daily_states.subspan(7 * w, 8), config);
      out.push_back({static_cast<int>(w), fit.params.beta, fit.params.gamma, fit.residual,
                     fit.clamped});
    } catch (const UnidentifiableError& e) {
      throw UnidentifiableError(e.parameter(), static_cast<int>(w));
    }
  }
  return out;
}

}  // namespace simlr
