#include <deque>
#include <stdexcept>

#include "simlr/data.hpp"

namespace simlr {

std::vector<SirState> build_sir_series(std::span<const double> infections,
                                       std::span<const double> deaths, double population,
                                       SirBuildStats* stats) {
  if (infections.size() != deaths.size()) {
    throw DataError("build_sir_series: infection and death series differ in length");
  }
  if (!(population > 0.0)) throw DataError("build_sir_series: population must be positive");

  struct Cohort {
    std::size_t day;
    double remaining;
  };
  std::deque<Cohort> cohorts;
  SirBuildStats st;
  std::vector<SirState> states;
  states.reserve(infections.size() + 1);
  SirState cur{population, 0.0, 0.0, population};
  states.push_back(cur);

  for (std::size_t d = 0; d < infections.size(); ++d) {
    double x = infections[d];
    if (x > cur.s) {
      x = cur.s;
      ++st.infection_overflow_days;
    }
    cur.s -= x;
    cur.i += x;
    if (x > 0.0) cohorts.push_back({d, x});

    double dead = deaths[d];
    if (dead > cur.i) {
      dead = cur.i;
      ++st.death_overflow_days;
    }
    cur.i -= dead;
    while (dead > 0.0 && !cohorts.empty()) {
      Cohort& oldest = cohorts.front();
      const double take = std::min(dead, oldest.remaining);
      oldest.remaining -= take;
      dead -= take;
      if (oldest.remaining <= 0.0) cohorts.pop_front();
    }

    while (!cohorts.empty() && cohorts.front().day + kRecoveryDays <= d) {
      cur.i -= cohorts.front().remaining;
      cohorts.pop_front();
    }
    if (cohorts.empty()) cur.i = 0.0;
    if (cur.i < 0.0) cur.i = 0.0;
    cur.r = population - cur.s - cur.i;
    states.push_back(cur);
  }
  if (stats) *stats = st;
  return states;
}

}  // namespace simlr
