#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "oracles.hpp"
#include "simlr/sir.hpp"

using namespace simlr;
using simlr::testing::Gen;

TEST_SUITE("sir") {
  TEST_CASE("no infected is a fixed point") {
    const SirState x = step({990, 0, 10, 1000}, {0.5, 0.2});
    CHECK(x == SirState{990, 0, 10, 1000});
  }

  TEST_CASE("zero transmission with full removal empties I") {
    const SirState x = step({500, 100, 400, 1000}, {0.0, 1.0});
    CHECK(x.s == 500);
    CHECK(x.i == 0);
    CHECK(x.r == 500);
  }

  TEST_CASE("hand-evaluated step") {
    // flow = 0.5 * 990 * 10 / 1000 = 4.95, removal = 0.2 * 10 = 2
    const SirState x = step({990, 10, 0, 1000}, {0.5, 0.2});
    CHECK(x.s == doctest::Approx(985.05).epsilon(1e-14));
    CHECK(x.i == doctest::Approx(12.95).epsilon(1e-14));
    // R is N - S - I, so it carries the rounding of both subtractions.
    CHECK(x.r == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("new infections") {
    CHECK(new_infections({1000, 0, 0, 1000}, {1000, 0, 0, 1000}) == 0.0);
    CHECK(new_infections({990, 10, 0, 1000}, step({990, 10, 0, 1000}, {0.5, 0.2})) == doctest::Approx(4.95));
    CHECK(new_infections({100, 0, 0, 100}, {100.0000001, 0, 0, 100}) == 0.0);
  }

  TEST_CASE("non-finite and invalid states are rejected") {
    CHECK_THROWS_AS(step({NAN, 1, 0, 1}, {0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(step({10, 1, 0, 11}, {INFINITY, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(step({10, 1, 0, 11}, {-0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate({10, 1, 5, 11}), std::invalid_argument);
  }

  TEST_CASE("simulate of length one equals one step") {
    const SirState x0{990, 10, 0, 1000};
    const std::vector<RateParams> p{{0.3, 0.1}};
    const auto xs = simulate(x0, p);
    REQUIRE(xs.size() == 1);
    CHECK(xs[0] == step(x0, p[0]));
  }

  TEST_CASE("single wave: I rises then falls once beta S / N drops below gamma") {
    const SirState x0{999'000, 1000, 0, 1e6};
    const std::vector<RateParams> p(100, {0.5, 0.2});
    const auto xs = simulate(x0, p);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < xs.size(); ++k)
      if (xs[k].i > xs[peak].i) peak = k;
    CHECK(peak > 0);
    CHECK(peak < xs.size() - 1);
    for (std::size_t k = 1; k <= peak; ++k) CHECK(xs[k].i >= xs[k - 1].i);
    for (std::size_t k = peak + 1; k < xs.size(); ++k) CHECK(xs[k].i <= xs[k - 1].i);
    // The turn happens where the effective reproduction number crosses 1.
    const SirState& before = peak == 0 ? x0 : xs[peak - 1];
    CHECK(0.5 * before.s / before.n >= 0.2);
    CHECK(0.5 * xs[peak].s / xs[peak].n <= 0.2 + 1e-3);
  }

  TEST_CASE("two-phase schedule peaks at the drop") {
    const SirState x0{999'000, 1000, 0, 1e6};
    std::vector<RateParams> p(70, {0.5, 0.2});
    for (std::size_t k = 10; k < p.size(); ++k) p[k].beta = 0.1;
    const auto xs = simulate(x0, p);
    // Independent scripted evaluation.
    std::vector<SirState> ref;
    SirState x = x0;
    for (const auto& q : p) ref.push_back(x = simlr::testing::step_oracle(x, q.beta, q.gamma));
    std::size_t peak = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      CHECK(xs[k].i == doctest::Approx(ref[k].i).epsilon(1e-12));
      if (xs[k].i > xs[peak].i) peak = k;
    }
    CHECK(std::abs(static_cast<long>(peak) - 9) <= 1);
  }

  TEST_CASE("property: conservation, monotone removal, oracle agreement") {
    Gen g(11);
    for (int trial = 0; trial < 300; ++trial) {
      SirState x = g.state(g.uniform(10, 1e7));
      for (int k = 0; k < 30; ++k) {
        const double beta = g.uniform(0, 3), gamma = g.uniform(0, 1.2);
        const SirState y = step(x, {beta, gamma});
        const SirState o = simlr::testing::step_oracle(x, beta, gamma);
        CHECK(std::fabs(y.s + y.i + y.r - y.n) <= 1e-6 * y.n);
        CHECK(y.s >= 0);
        CHECK(y.i >= 0);
        CHECK(y.r >= x.r - 1e-9 * x.n);
        CHECK(y.s == doctest::Approx(o.s).epsilon(1e-12));
        CHECK(y.i == doctest::Approx(o.i).epsilon(1e-12));
        x = y;
      }
    }
  }

  TEST_CASE("property: step is affine in the rates and matches the design form") {
    Gen g(12);
    for (int trial = 0; trial < 500; ++trial) {
      const SirState x = g.state(g.uniform(100, 1e7));
      // Stay inside the unclamped region: flows below the pools.
      const double beta = g.uniform(0, 0.9), gamma = g.uniform(0, 0.9);
      const StepDesign d = step_design(x);
      const SirState y = step(x, {beta, gamma});
      const double s_lin = d.m[0][0] * beta + d.m[0][1] * gamma + d.offset[0];
      const double i_lin = d.m[1][0] * beta + d.m[1][1] * gamma + d.offset[1];
      CHECK(y.s == doctest::Approx(s_lin).epsilon(1e-12));
      CHECK(y.i == doctest::Approx(i_lin).epsilon(1e-12));
      // Independent construction of the design matrix.
      const double p = x.s * x.i / x.n;
      CHECK(d.m[0][0] == doctest::Approx(-p).epsilon(1e-12));
      CHECK(d.m[0][1] == 0.0);
      CHECK(d.m[1][0] == doctest::Approx(p).epsilon(1e-12));
      CHECK(d.m[1][1] == doctest::Approx(-x.i).epsilon(1e-12));
      // Affinity: midpoint of two parameter points maps to the midpoint.
      const double b2 = g.uniform(0, 0.9), g2 = g.uniform(0, 0.9);
      const SirState y2 = step(x, {b2, g2});
      const SirState ym = step(x, {(beta + b2) / 2, (gamma + g2) / 2});
      CHECK(ym.s == doctest::Approx((y.s + y2.s) / 2).epsilon(1e-12));
      CHECK(ym.i == doctest::Approx((y.i + y2.i) / 2).epsilon(1e-12));
    }
  }
}
