#pragma once

// Hand-computed cleaning and cohort fixtures. Expected values were worked out
// by hand from the cleaning and cohort rules, not produced by the code.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simlr/data.hpp"

namespace simlr::testing {

struct CleanFixture {
  std::string name;
  std::vector<std::optional<std::int64_t>> cumulative;
  bool clamp = true;
  std::vector<double> expected;
  CleanStats stats;
};

inline std::vector<std::optional<std::int64_t>> cumulate(const std::vector<std::int64_t>& daily,
                                                         std::int64_t start = 0) {
  std::vector<std::optional<std::int64_t>> out{start};
  for (auto d : daily) out.push_back(*out.back() + d);
  return out;
}

inline std::vector<CleanFixture> clean_fixtures() {
  std::vector<CleanFixture> f;
  const std::optional<std::int64_t> blank;

  f.push_back({"negative diff split into the next day", {100, 110, 105, 130}, true, {10, 12.5, 12.5}, {1, 1, 0, 0}});

  {
    std::vector<std::int64_t> d(30, 50);
    f.push_back({"constant series at the zero-sigma boundary", cumulate(d), true, std::vector<double>(30, 50.0), {}});
  }
  {
    std::vector<std::int64_t> d(10, 10);
    d.push_back(500);
    std::vector<double> e(10, 10.0);
    e.push_back(10.0);
    f.push_back({"spike after a flat window clamps to the mean", cumulate(d), true, e, {0, 0, 0, 1}});
  }
  f.push_back({"missing run spread over the run and the next report",
               {0, 4, blank, blank, 13, 15}, true, {4, 3, 3, 3, 2}, {0, 2, 0, 0}});
  f.push_back({"trailing missing days become zero", {0, 5, 11, blank, blank}, true, {5, 6, 0, 0}, {0, 0, 2, 0}});
  f.push_back({"consecutive negatives cascade", {0, 10, 9, 7, 37}, true, {10, 10, 10, 10}, {2, 2, 0, 0}});
  {
    // Window alternates 8, 12 (mean 10, sd 2) so the bound is 18. Day 11 then
    // sees 12,8,...,12,18 (mean 11, sd 3) and a bound of 23.
    std::vector<std::int64_t> d;
    for (int k = 0; k < 10; ++k) d.push_back(k % 2 == 0 ? 8 : 12);
    d.push_back(100);
    d.push_back(30);
    std::vector<double> e;
    for (int k = 0; k < 10; ++k) e.push_back(k % 2 == 0 ? 8.0 : 12.0);
    e.push_back(18.0);
    e.push_back(23.0);
    f.push_back({"mean plus four sigma clamp uses already clamped values", cumulate(d), true, e, {0, 0, 0, 2}});
  }
  {
    std::vector<std::int64_t> d;
    for (int k = 0; k < 10; ++k) d.push_back(k % 2 == 0 ? 8 : 12);
    d.push_back(18);
    std::vector<double> e;
    for (int k = 0; k < 10; ++k) e.push_back(k % 2 == 0 ? 8.0 : 12.0);
    e.push_back(18.0);
    f.push_back({"value equal to the bound is kept", cumulate(d), true, e, {}});
  }
  f.push_back({"blank first cumulative value", {blank, 10, 20, 26}, true, {5, 5, 6}, {0, 1, 0, 0}});
  {
    // Ten days of 10, a correction of -20, then 40: the 40 is split to 20, 20
    // and both halves clamp to the flat window's mean.
    std::vector<std::optional<std::int64_t>> c = cumulate(std::vector<std::int64_t>(10, 10));
    c.push_back(*c.back() - 20);
    c.push_back(*c.back() + 40);
    f.push_back({"fill then clamp", c, true, std::vector<double>(12, 10.0), {1, 1, 0, 2}});
  }
  f.push_back({"blank cumulative cells inside the series", {0, 5, blank, 15, 20}, true,
               {5, 5, 5, 5}, {0, 1, 0, 0}});
  {
    std::vector<std::int64_t> d(10, 10);
    d.push_back(500);
    std::vector<double> e(10, 10.0);
    e.push_back(500.0);
    f.push_back({"clamping disabled keeps spikes", cumulate(d), false, e, {}});
  }
  return f;
}

struct CohortFixture {
  std::string name;
  double population;
  std::vector<double> infections;
  std::vector<double> deaths;
  // (index into the state list, expected state)
  std::vector<std::pair<std::size_t, SirState>> checkpoints;
  SirBuildStats stats;
};

inline std::vector<CohortFixture> cohort_fixtures() {
  std::vector<CohortFixture> f;
  auto zeros = [](std::size_t n) { return std::vector<double>(n, 0.0); };
  {
    auto inf = zeros(20);
    inf[0] = 10;
    f.push_back({"single cohort recovers after fifteen days", 1000, inf, zeros(20),
                 {{1, {990, 10, 0, 1000}}, {15, {990, 10, 0, 1000}}, {16, {990, 0, 10, 1000}}, {20, {990, 0, 10, 1000}}},
                 {}});
  }
  {
    auto inf = zeros(20);
    inf[0] = 10;
    auto dead = zeros(20);
    dead[3] = 2;
    f.push_back({"deaths leave first, survivors recover on day fifteen", 1000, inf, dead,
                 {{3, {990, 10, 0, 1000}}, {4, {990, 8, 2, 1000}}, {15, {990, 8, 2, 1000}}, {16, {990, 0, 10, 1000}}},
                 {}});
  }
  f.push_back({"no infections keeps everyone susceptible", 500, zeros(30), zeros(30),
               {{0, {500, 0, 0, 500}}, {30, {500, 0, 0, 500}}}, {}});
  {
    auto inf = zeros(20);
    inf[0] = 5;
    inf[2] = 7;
    auto dead = zeros(20);
    dead[4] = 6;
    // The day-0 cohort (5) dies out first, one death comes from the day-2
    // cohort, which then recovers 6 people on day 17.
    f.push_back({"deaths drain the oldest cohort first", 1000, inf, dead,
                 {{5, {988, 6, 6, 1000}}, {16, {988, 6, 6, 1000}}, {17, {988, 6, 6, 1000}}, {18, {988, 0, 12, 1000}}},
                 {}});
  }
  {
    auto inf = zeros(5);
    inf[0] = 3;
    auto dead = zeros(5);
    dead[1] = 5;
    f.push_back({"deaths beyond the infected pool are capped", 100, inf, dead,
                 {{2, {97, 0, 3, 100}}, {5, {97, 0, 3, 100}}}, {1, 0}});
  }
  {
    std::vector<double> inf{4, 12, 0};
    f.push_back({"infections beyond the susceptible pool are capped", 10, inf, zeros(3),
                 {{1, {6, 4, 0, 10}}, {2, {0, 10, 0, 10}}}, {0, 1}});
  }
  {
    auto inf = zeros(40);
    for (int d = 0; d < 40; d += 3) inf[static_cast<std::size_t>(d)] = 2;
    // Cohorts of 2 every third day: on day d the cohorts from days
    // d-14 .. d are still infected.
    auto count_alive = [](int d) {
      int n = 0;
      for (int k = 0; k <= d; k += 3)
        if (k + 15 > d) ++n;
      return n;
    };
    std::vector<std::pair<std::size_t, SirState>> cps;
    for (int d : {14, 15, 16, 20, 30, 39}) {
      int infected_total = 0;
      for (int k = 0; k <= d; k += 3) infected_total += 2;
      const double i = 2.0 * count_alive(d);
      cps.push_back({static_cast<std::size_t>(d + 1), {1000.0 - infected_total, i, infected_total - i, 1000}});
    }
    f.push_back({"rolling cohorts", 1000, inf, zeros(40), cps, {}});
  }
  return f;
}

}  // namespace simlr::testing
