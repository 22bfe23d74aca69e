#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "oracles.hpp"
#include "simlr/error.hpp"
#include "simlr/forecaster.hpp"
#include "chain_scenarios.hpp"
#include "synthetic.hpp"

using namespace simlr;

namespace {

const std::vector<std::string> kTern{"-1", "0", "1"};

Cpt flat_ct(const Dist3& row) {
  return Cpt("CT", {{"cp_lag1", kTern}, {"cp_lag2", kTern}, {"cp_lag3", kTern}}, kTern,
             std::vector<std::vector<double>>(27, std::vector<double>(row.begin(), row.end())));
}

NnCpd constant_net(const Dist3& p) {
  NnCpd net;
  for (int k = 0; k < 3; ++k) net.b2[k] = std::log(p[k]);
  return net;
}

ForecastInputs sample_inputs(double wobble = 0.01) {
  std::vector<RateParams> weekly;
  for (int w = 0; w < 8; ++w) weekly.push_back({0.22 + wobble * std::sin(w), 0.1 + 0.5 * wobble * std::cos(1.7 * w)});
  const auto e = testing::make_epidemic({1e6 - 500, 500, 0, 1e6}, weekly);
  ForecastInputs in;
  in.region = "Testland";
  in.origin = parse_date("2020-05-03");
  in.population = 1e6;
  in.state = e.daily.back();
  in.history = fit_weekly_series(e.daily, {});
  in.weekly_cases = e.weekly_cases;
  in.weekly_cp = {0, 1, 0, 0, -1, 0, 0, 0};
  in.weeks_since_change = 3;
  return in;
}

PgmConfig pgm_with(const Cpt& ct, const Dist3& urgency = {0.2, 0.5, 0.3}) {
  PgmConfig p{default_cpts(), constant_net(urgency)};
  p.cpts.ct = ct;
  return p;
}

}  // namespace

TEST_SUITE("forecaster") {
  TEST_CASE("same-as-last-week repeats the last observed week") {
    CHECK(slow_forecast(120.0, 3) == std::vector<double>{120.0, 120.0, 120.0});
    CHECK(slow_forecast(0.0, 1) == std::vector<double>{0.0});
    CHECK_THROWS_AS(slow_forecast(5.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(slow_forecast(5.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(slow_forecast(-1.0, 2), std::invalid_argument);
  }

  TEST_CASE("trend-certain tables reproduce the trend-following forecast exactly") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    const auto tf = tfvsir_forecast(in.state, in.history, trend, 4);
    const auto got = mixture_forecast(in, pgm_with(flat_ct({0, 1, 0})), trend, 4);
    REQUIRE(got.size() == 4);
    for (int h = 0; h < 4; ++h) {
      CHECK(got[h].weight_trend == 1.0);
      CHECK(got[h].weight_slow == 0.0);
      CHECK(got[h].point == tf[h]);
    }
  }

  TEST_CASE("change-certain tables reproduce same-as-last-week exactly") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    for (const Dist3 row : {Dist3{1, 0, 0}, Dist3{0, 0, 1}, Dist3{0.5, 0, 0.5}}) {
      const auto got = mixture_forecast(in, pgm_with(flat_ct(row)), trend, 4);
      const auto slow = slow_forecast(in.weekly_cases.back(), 4);
      for (int h = 0; h < 4; ++h) {
        CHECK(got[h].weight_trend == 0.0);
        CHECK(got[h].weight_slow == 1.0);
        CHECK(got[h].point == slow[h]);
      }
    }
  }

  TEST_CASE("one-week mixture by hand") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    const auto got = mixture_forecast(in, pgm_with(flat_ct({0.2, 0.6, 0.2})), trend, 1);
    const double tf = tfvsir_forecast(in.state, in.history, trend, 1)[0];
    const double slow = in.weekly_cases.back();
    REQUIRE(got.size() == 1);
    CHECK(got[0].weight_trend == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(got[0].weight_slow == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(got[0].tfvsir_point == tf);
    CHECK(got[0].slow_point == slow);
    CHECK(got[0].point == doctest::Approx(0.6 * tf + 0.4 * slow).epsilon(1e-14));
  }

  TEST_CASE("points are convex combinations and weights sum to one") {
    testing::Gen g(17);
    for (int trial = 0; trial < 60; ++trial) {
      const ForecastInputs in = sample_inputs(g.uniform(0.0, 0.03));
      const TrendModel trend = fit_trend(in.history);
      Dist3 row{g.uniform(0.0, 1.0), g.uniform(0.0, 1.0), g.uniform(0.0, 1.0)};
      const double sum = row[0] + row[1] + row[2];
      for (double& v : row) v /= sum;
      const Dist3 u{0.3, 0.3, 0.4};
      const PgmConfig pgm = trial % 2 ? pgm_with(flat_ct(row), u) : pgm_with(default_cpts().ct, u);
      for (const Forecast& f : mixture_forecast(in, pgm, trend, 4)) {
        CAPTURE(trial);
        CAPTURE(f.horizon);
        CHECK(f.weight_trend + f.weight_slow == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.weight_trend >= 0.0);
        CHECK(f.weight_slow >= 0.0);
        const double lo = std::min(f.tfvsir_point, f.slow_point);
        const double hi = std::max(f.tfvsir_point, f.slow_point);
        CHECK(f.point >= lo * (1 - 1e-12));
        CHECK(f.point <= hi * (1 + 1e-12));
        CHECK(f.ct[0] + f.ct[1] + f.ct[2] == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("shorter horizons are prefixes of longer ones") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    const PgmConfig pgm = pgm_with(default_cpts().ct);
    const auto full = mixture_forecast(in, pgm, trend, 4);
    for (int h = 1; h <= 3; ++h) {
      const auto part = mixture_forecast(in, pgm, trend, h);
      REQUIRE(part.size() == static_cast<std::size_t>(h));
      for (int k = 0; k < h; ++k) CHECK(part[k].point == doctest::Approx(full[k].point).epsilon(1e-12));
    }
  }

  TEST_CASE("CT beyond two weeks marginalizes the policy chain") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    for (const CptSet& tables : {default_cpts(), testing::skewed_cpts()}) {
      PgmConfig pgm{tables, constant_net({0.25, 0.35, 0.4})};
      const auto got = mixture_forecast(in, pgm, trend, 4);
      const std::vector<Dist3> urgency(4, Dist3{0.25, 0.35, 0.4});
      const auto marg = testing::enumerate_chain(tables, in.weeks_since_change, urgency);
      for (int h = 1; h <= 4; ++h) {
        CAPTURE(h);
        const Dist3 ct = testing::enumerate_ct(tables, in.weekly_cp, in.weeks_since_change,
                                               std::span(urgency).first(static_cast<std::size_t>(h)), h);
        for (int k = 0; k < 3; ++k) {
          CHECK(got[h - 1].ct[k] == doctest::Approx(ct[k]).epsilon(1e-12));
          CHECK(got[h - 1].cp[k] == doctest::Approx(marg[h - 1][k]).epsilon(1e-12));
        }
        CHECK(got[h - 1].cp_forecasts.size() == static_cast<std::size_t>(std::max(0, h - 2)));
      }
    }
  }

  TEST_CASE("observed lags alone set CT for the first two weeks") {
    const ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    const CptSet tables = default_cpts();
    const auto got = mixture_forecast(in, PgmConfig{tables, constant_net({0.2, 0.5, 0.3})}, trend, 2);
    // weekly_cp ends ..., -1, 0, 0, 0: h=1 looks at weeks t-1..t-3, h=2 at t..t-2.
    CHECK(got[0].ct == ct_distribution(0, 0, -1, tables.ct));
    CHECK(got[1].ct == ct_distribution(0, 0, 0, tables.ct));
  }

  TEST_CASE("cold start is reported") {
    ForecastInputs in = sample_inputs();
    const TrendModel trend = fit_trend(in.history);
    const PgmConfig pgm = pgm_with(default_cpts().ct);
    ForecastInputs few = in;
    few.history.resize(4);
    CHECK_THROWS_AS(mixture_forecast(few, pgm, trend, 1), ColdStartError);
    few = in;
    few.weekly_cp.resize(3);
    CHECK_THROWS_AS(mixture_forecast(few, pgm, trend, 1), ColdStartError);
    CHECK_THROWS_AS(mixture_forecast(in, pgm, trend, 5), std::invalid_argument);
  }

  TEST_CASE("bisected rates hit the target week") {
    testing::Gen g(5);
    for (int trial = 0; trial < 40; ++trial) {
      const double n = 1e6;
      const double i = g.uniform(100.0, 5e4);
      const SirState x{n - i - 1000.0, i, 1000.0, n};
      const RateParams truth{g.uniform(0.02, 0.6), g.uniform(0.02, 0.3)};
      const double target = run_week(x, truth).new_infections;
      const RateParams got = rates_for_weekly_cases(x, truth.gamma, target);
      CHECK(got.gamma == truth.gamma);
      CHECK(run_week(x, got).new_infections == doctest::Approx(target).epsilon(1e-9));
      CHECK(got.beta == doctest::Approx(truth.beta).epsilon(1e-6));
    }
    CHECK(rates_for_weekly_cases({1e6, 10, 0, 1e6 + 10}, 0.1, 0.0).beta == 0.0);
  }
}
