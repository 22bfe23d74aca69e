#include "simlr/sir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace simlr {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}

}  // namespace

void validate(const SirState& state) {
  require_finite(state.s, "S");
  require_finite(state.i, "I");
  require_finite(state.r, "R");
  require_finite(state.n, "N");
  if (state.n <= 0.0) throw std::invalid_argument("population must be positive");
  if (state.s < 0.0 || state.i < 0.0 || state.r < 0.0) {
    throw std::invalid_argument("negative compartment count");
  }
  if (std::abs(state.s + state.i + state.r - state.n) > 1e-6 * state.n) {
    throw std::invalid_argument("compartments do not sum to population");
  }
}

StepDesign step_design(const SirState& state) {
  const double p = state.s * state.i / state.n;
  return StepDesign{{{-p, 0.0}, {p, -state.i}}, {state.s, state.i}};
}

SirState step(const SirState& state, const RateParams& params) {
  require_finite(state.s, "S");
  require_finite(state.i, "I");
  require_finite(state.r, "R");
  require_finite(state.n, "N");
  require_finite(params.beta, "beta");
  require_finite(params.gamma, "gamma");
  if (state.n <= 0.0) throw std::invalid_argument("population must be positive");
  if (params.beta < 0.0 || params.gamma < 0.0) throw std::invalid_argument("negative rate");

  const double infections = std::min(params.beta * state.s * state.i / state.n, state.s);
  const double removals = std::min(params.gamma * state.i, state.i);
  SirState next;
  next.n = state.n;
  next.s = state.s - infections;
  next.i = state.i + infections - removals;
  next.r = state.n - next.s - next.i;
  return next;
}

std::vector<SirState> simulate(const SirState& initial, std::span<const RateParams> params) {
  if (params.empty()) throw std::invalid_argument("simulate: empty parameter sequence");
  std::vector<SirState> out;
  out.reserve(params.size());
  SirState cur = initial;
  for (const auto& p : params) {
    cur = step(cur, p);
    out.push_back(cur);
  }
  return out;
}

double new_infections(const SirState& prev, const SirState& next) {
  return std::max(prev.s - next.s, 0.0);
}

}  // namespace simlr
