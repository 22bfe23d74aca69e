#include <doctest.h>

#include "fixtures.hpp"
#include "gen.hpp"
#include "simlr/data.hpp"
#include "simlr/error.hpp"

using namespace simlr;

TEST_SUITE("sir_series") {
  TEST_CASE("hand cohort simulations") {
    for (const auto& f : simlr::testing::cohort_fixtures()) {
      CAPTURE(f.name);
      SirBuildStats st;
      const auto xs = build_sir_series(f.infections, f.deaths, f.population, &st);
      REQUIRE(xs.size() == f.infections.size() + 1);
      for (const auto& [idx, want] : f.checkpoints) {
        CAPTURE(idx);
        CHECK(xs[idx] == want);
      }
      for (const auto& x : xs) CHECK(x.s + x.i + x.r == x.n);
      CHECK(st.death_overflow_days == f.stats.death_overflow_days);
      CHECK(st.infection_overflow_days == f.stats.infection_overflow_days);
    }
  }

  TEST_CASE("misaligned or invalid inputs are rejected") {
    CHECK_THROWS_AS(build_sir_series(std::vector<double>{1, 2}, std::vector<double>{1}, 100), DataError);
    CHECK_THROWS_AS(build_sir_series(std::vector<double>{1}, std::vector<double>{1}, 0), DataError);
  }

  TEST_CASE("property: integer counts conserve the population exactly") {
    simlr::testing::Gen g(61);
    for (int trial = 0; trial < 200; ++trial) {
      const int days = g.integer(1, 80);
      std::vector<double> inf, dead;
      for (int d = 0; d < days; ++d) {
        inf.push_back(g.integer(0, 50));
        dead.push_back(g.coin(0.3) ? g.integer(0, 10) : 0);
      }
      const double n = g.integer(100, 100000);
      const auto xs = build_sir_series(inf, dead, n);
      double prev_r = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        CHECK(xs[k].s + xs[k].i + xs[k].r == n);
        CHECK(xs[k].i >= 0.0);
        CHECK(xs[k].r >= prev_r);
        prev_r = xs[k].r;
      }
      // New infections are exactly the drop in S while the pool lasts.
      double total = 0.0;
      for (double v : inf) total += v;
      if (total <= n) CHECK(xs.front().s - xs.back().s == total);
    }
  }
}
