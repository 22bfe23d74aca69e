#include <stdexcept>

#include "simlr/error.hpp"
#include "simlr/pgm.hpp"

namespace simlr {

PolicyPathDistribution policy_chain(const CptSet& cpts, int weeks_since_change,
                                    std::span<const Dist3> urgency) {
  if (weeks_since_change < 0) throw std::invalid_argument("policy_chain: negative weeks since change");
  struct Partial {
    std::vector<int> path;
    int weeks;
    double p;
  };
  std::vector<Partial> frontier{{{}, weeks_since_change, 1.0}};
  for (const Dist3& u : urgency) {
    std::vector<Partial> next;
    next.reserve(frontier.size() * 3);
    for (const auto& part : frontier) {
      // CP_{k+1} | O_k, U_k with O_k | W_k, summed over O and U.
      const Dist2 o = willingness_distribution(part.weeks, cpts.o);
      Dist3 cp{0.0, 0.0, 0.0};
      for (int ov = 0; ov <= 1; ++ov) {
        for (int uv = -1; uv <= 1; ++uv) {
          const double w = o[ov] * u[ternary_index(uv)];
          if (w == 0.0) continue;
          const Dist3 row = cp_distribution(ov, uv, cpts.cp);
          for (int k = 0; k < 3; ++k) cp[k] += w * row[k];
        }
      }
      for (int cv = -1; cv <= 1; ++cv) {
        Partial child{part.path, cv == 0 ? part.weeks + 1 : 0, part.p * cp[ternary_index(cv)]};
        child.path.push_back(cv);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  PolicyPathDistribution out;
  out.marginals.assign(urgency.size(), Dist3{0.0, 0.0, 0.0});
  for (auto& part : frontier) {
    for (std::size_t k = 0; k < part.path.size(); ++k) {
      out.marginals[k][ternary_index(part.path[k])] += part.p;
    }
    out.paths.emplace_back(std::move(part.path), part.p);
  }
  return out;
}

UrgencyFeatures urgency_features(double cases, double previous_cases, double population) {
  if (!(population > 0.0)) throw std::invalid_argument("urgency_features: population must be positive");
  const double c = 1e5 * cases / population;
  const double c_prev = 1e5 * previous_cases / population;
  return {c, c - c_prev};
}

std::vector<Dist3> forecast_policy_chain(int weeks_since_change,
                                         std::span<const double> weekly_cases,
                                         std::size_t observed_weeks, double population,
                                         const PgmConfig& pgm, int horizon) {
  if (horizon < 1 || horizon > 4) throw std::invalid_argument("forecast_policy_chain: horizon must be 1..4");
  if (observed_weeks < 2) throw ColdStartError("policy chain needs two observed weeks of cases");
  // U_t .. U_{t+H-1}: U_{t+j} uses cases of weeks t+j and t+j-1.
  const std::size_t t = observed_weeks - 1;
  if (weekly_cases.size() < t + static_cast<std::size_t>(horizon)) {
    throw std::invalid_argument("forecast_policy_chain: projected cases do not cover the horizon");
  }
  std::vector<Dist3> urgency;
  for (int j = 0; j < horizon; ++j) {
    const UrgencyFeatures f =
        urgency_features(weekly_cases[t + j], weekly_cases[t + j - 1], population);
    urgency.push_back(urgency_distribution(f, pgm.urgency));
  }
  return policy_chain(pgm.cpts, weeks_since_change, urgency).marginals;
}

}  // namespace simlr
