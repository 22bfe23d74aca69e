#pragma once

#include <span>
#include <vector>

namespace simlr {

// Compartment counts at one time point. Counts are real-valued persons;
// rounding only happens when reporting.
struct SirState {
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;
  double n = 0.0;

  friend bool operator==(const SirState&, const SirState&) = default;
};

struct RateParams {
  double beta = 0.0;
  double gamma = 0.0;

  friend bool operator==(const RateParams&, const RateParams&) = default;
};

// Affine form of one step: [S', I'] = design * [beta, gamma] + [S, I].
struct StepDesign {
  double m[2][2];
  double offset[2];
};

StepDesign step_design(const SirState& state);

// Advances one step of the discretized SIR equations. The step length is
// whatever unit (beta, gamma) were fitted in; the fit and the forecasters
// both use one day. The susceptible outflow is clamped to S and the removal
// outflow to the infected pool, so no compartment goes negative.
SirState step(const SirState& state, const RateParams& params);

// result[k] is the state after k + 1 steps, the k-th using params[k].
std::vector<SirState> simulate(const SirState& initial, std::span<const RateParams> params);

// prev.s - next.s floored at zero.
double new_infections(const SirState& prev, const SirState& next);

// Throws std::invalid_argument if counts are negative or non-finite or do not
// sum to n within 1e-6 * n.
void validate(const SirState& state);

}  // namespace simlr
