#include <doctest.h>

#include <cmath>

#include "chain_scenarios.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "simlr/pgm.hpp"

using namespace simlr;
using simlr::testing::Gen;

namespace {

NnCpd constant_net(const Dist3& p) {
  // Zero weights and log-probability output biases give a constant softmax.
  NnCpd net;
  for (int k = 0; k < 3; ++k) net.b2[k] = std::log(p[k]);
  return net;
}

}  // namespace

TEST_SUITE("policy_chain") {
  TEST_CASE("hand-built scenarios match exhaustive enumeration") {
    const auto scenarios = simlr::testing::chain_scenarios();
    CHECK(scenarios.size() >= 20);
    for (const auto& s : scenarios) {
      CAPTURE(s.name);
      const auto got = policy_chain(s.cpts, s.w0, s.urgency);
      const auto want = simlr::testing::enumerate_chain(s.cpts, s.w0, s.urgency);
      REQUIRE(got.marginals.size() == want.size());
      for (std::size_t k = 0; k < want.size(); ++k)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(got.marginals[k][j] - want[k][j]) <= 1e-12);
      double total = 0.0;
      for (const auto& [path, p] : got.paths) {
        CHECK(p >= 0.0);
        total += p;
      }
      CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("binary tables: a hand-traced two-step chain") {
    // w0 = 2 so O_0 = 1; U_0 certain +1 gives CP_1 = +1 and resets W to 0,
    // so O_1 = 0 and CP_2 = 0 whatever U_1 is.
    const CptSet c = simlr::testing::binary_cpts();
    const std::vector<Dist3> u{{0, 0, 1}, {0.5, 0, 0.5}};
    const auto got = policy_chain(c, 2, u);
    CHECK(got.marginals[0] == Dist3{0, 0, 1});
    CHECK(got.marginals[1] == Dist3{0, 1, 0});
  }

  TEST_CASE("property: random tables and urgencies match enumeration") {
    Gen g(31);
    auto random_dist3 = [&]() {
      Dist3 d{g.uniform(0, 1), g.uniform(0, 1), g.uniform(0, 1)};
      const double s = d[0] + d[1] + d[2];
      for (double& v : d) v /= s;
      return d;
    };
    for (int trial = 0; trial < 40; ++trial) {
      CptSet c = default_cpts();
      const std::vector<std::string> tern{"-1", "0", "1"};
      std::vector<std::vector<double>> orows, cprows;
      for (int k = 0; k < 5; ++k) {
        const double p = g.uniform(0, 1);
        orows.push_back({1 - p, p});
      }
      for (int k = 0; k < 6; ++k) {
        const Dist3 d = random_dist3();
        cprows.push_back({d[0], d[1], d[2]});
      }
      c.o = Cpt("O", {{"W", {"0", "1", "2", "3", "4+"}}}, {"0", "1"}, orows);
      c.cp = Cpt("CP", {{"O", {"0", "1"}}, {"U", tern}}, tern, cprows);
      std::vector<Dist3> u;
      const int steps = g.integer(1, 4);
      for (int k = 0; k < steps; ++k) u.push_back(random_dist3());
      const int w0 = g.integer(0, 6);
      const auto got = policy_chain(c, w0, u).marginals;
      const auto want = simlr::testing::enumerate_chain(c, w0, u);
      for (std::size_t k = 0; k < want.size(); ++k)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(got[k][j] - want[k][j]) <= 1e-12);
    }
  }

  TEST_CASE("one step equals a single marginalization over O and U") {
    const CptSet c = default_cpts();
    const Dist3 u{0.2, 0.3, 0.5};
    const NnCpd net = constant_net(u);
    const std::vector<double> cases{100, 120};
    const auto got = forecast_policy_chain(2, cases, 2, 1e5, PgmConfig{c, net}, 1);
    const Dist3 urgency = urgency_distribution({120, 20}, net);
    const Dist2 o = willingness_distribution(2, c.o);
    Dist3 want{0, 0, 0};
    for (int ov = 0; ov <= 1; ++ov)
      for (int uv = -1; uv <= 1; ++uv)
        for (int k = 0; k < 3; ++k) want[k] += o[ov] * urgency[uv + 1] * cp_distribution(ov, uv, c.cp)[k];
    REQUIRE(got.size() == 1);
    for (int k = 0; k < 3; ++k) CHECK(got[0][k] == doctest::Approx(want[k]).epsilon(1e-14));
  }

  TEST_CASE("no-change tables are absorbing") {
    CptSet c = default_cpts();
    const std::vector<std::string> tern{"-1", "0", "1"};
    c.cp = Cpt("CP", {{"O", {"0", "1"}}, {"U", tern}}, tern, std::vector<std::vector<double>>(6, {0, 1, 0}));
    const NnCpd net = constant_net({0.3, 0.3, 0.4});
    const std::vector<double> cases{10, 20, 30, 40, 50};
    const auto got = forecast_policy_chain(0, cases, 2, 1e5, PgmConfig{c, net}, 4);
    REQUIRE(got.size() == 4);
    for (const auto& d : got) CHECK(d == Dist3{0, 1, 0});
  }

  TEST_CASE("urgency features are per 100K and their weekly change") {
    const UrgencyFeatures f = urgency_features(500, 300, 1e6);
    CHECK(f.c == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(f.v == doctest::Approx(20.0).epsilon(1e-15));
    CHECK_THROWS(urgency_features(1, 1, 0));
  }

  TEST_CASE("inputs that cannot cover the horizon are rejected") {
    const PgmConfig pgm{default_cpts(), constant_net({0.3, 0.3, 0.4})};
    const std::vector<double> cases{10, 20};
    CHECK_THROWS(forecast_policy_chain(0, cases, 2, 1e5, pgm, 2));
    CHECK_THROWS(forecast_policy_chain(0, cases, 1, 1e5, pgm, 1));
    CHECK_THROWS(policy_chain(pgm.cpts, -1, std::vector<Dist3>{{0, 1, 0}}));
  }
}
