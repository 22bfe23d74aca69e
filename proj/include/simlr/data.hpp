#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simlr/dates.hpp"
#include "simlr/error.hpp"
#include "simlr/sir.hpp"

namespace simlr {

enum class IngestErrorCode { unknown_region, non_monotonic_dates, schema_mismatch };

class IngestError : public DataError {
 public:
  IngestError(IngestErrorCode code, const std::string& what) : DataError(what), code_(code) {}
  IngestErrorCode code() const noexcept { return code_; }

 private:
  IngestErrorCode code_;
};

// Region ids are "Country" (all rows of that country summed) or
// "Country/Province".
struct RegionId {
  std::string country;
  std::string province;  // empty for country level

  static RegionId parse(const std::string& id);
  std::string str() const;
};

// One cumulative column per date, JHU CSSE wide layout.
struct CumulativeSeries {
  std::string region;
  std::vector<Date> dates;
  std::vector<std::optional<std::int64_t>> values;  // nullopt = blank cell
};

struct RawSeries {
  std::string region;
  std::vector<Date> dates;  // daily, contiguous
  std::vector<std::optional<std::int64_t>> cumulative_cases;
  std::vector<std::optional<std::int64_t>> cumulative_deaths;
};

CumulativeSeries ingest_cumulative(std::istream& csv, const std::string& region);
// Aligns the case and death tables on their common date range.
RawSeries ingest_cases(std::istream& cases_csv, std::istream& deaths_csv, const std::string& region);

// ---- preprocessing -------------------------------------------------------
// Daily values use NaN for "missing".

struct CleanOptions {
  bool clamp_outliers = true;
  int outlier_window = 10;
  double outlier_sigmas = 4.0;
};

struct CleanStats {
  int negatives = 0;          // negative daily values turned into missing
  int missing_filled = 0;     // days filled by splitting the next report
  int trailing_missing = 0;   // missing days with no later report, set to 0
  int outliers_clamped = 0;
};

// First differences. Blank cells are missing days; the next report is
// differenced against the last reported value.
std::vector<double> difference(std::span<const std::optional<std::int64_t>> cumulative);
// Negative daily values become missing.
int mark_negative_missing(std::vector<double>& daily);
// A run of k missing days followed by a report shares that report
// evenly over k + 1 days. Returns the number of filled days.
int fill_missing(std::vector<double>& daily, int* trailing = nullptr);
// Day d := min(day d, mean + sigmas * sd) over the previous window,
// using already-clamped values. Population standard deviation.
int clamp_outliers(std::vector<double>& daily, int window = 10, double sigmas = 4.0);

// Negatives, fill, clamp, in that order. Idempotent on its own output.
std::vector<double> clean_daily(std::span<const double> daily, const CleanOptions& options = {},
                                CleanStats* stats = nullptr);

struct DailySeries {
  std::string region;
  Date first_day;  // date of infections[0]
  std::vector<double> infections;
  std::vector<double> deaths;
  CleanStats infection_stats;
  CleanStats death_stats;
};

// Differences then cleans both series. Outlier clamping applies to infections
// only. Throws DataError for series shorter than 11 days.
DailySeries preprocess(const RawSeries& raw, const CleanOptions& options = {});

// ---- SIR reconstruction --------------------------------------------------

struct SirBuildStats {
  int death_overflow_days = 0;      // deaths exceeded the infected pool
  int infection_overflow_days = 0;  // infections exceeded the susceptible pool
};

inline constexpr int kRecoveryDays = 15;

// states[0] is the all-susceptible start; states[d + 1] is the state at the
// end of day d. Cohorts leave I by death (oldest first) or by recovery on
// day d + 15.
std::vector<SirState> build_sir_series(std::span<const double> infections,
                                       std::span<const double> deaths, double population,
                                       SirBuildStats* stats = nullptr);

// ---- policy --------------------------------------------------------------

// Indicator order: workplace closing (C2), stay at home (C6), cancel public events (C3).
using PolicyLevels = std::array<int, 3>;

struct PolicySeries {
  std::string region;
  std::vector<Date> dates;
  std::vector<PolicyLevels> levels;
};

// OxCGRT long layout. Blank indicator cells carry the previous value forward.
PolicySeries ingest_policy(std::istream& csv, const std::string& region);

struct PolicyTimeline {
  std::string region;
  Date first_week;  // Sunday of week 0
  std::vector<int> cp;
  std::vector<int> weeks_since_change;
};

// Weekly change events on the Sunday grid starting at first_week. A week is
// +1 if any indicator rose during it, -1 if one fell and none rose, else 0.
// Levels before the first date equal the first row; after the last, the last.
PolicyTimeline derive_policy_changes(const PolicySeries& series, Date first_week, int weeks,
                                     int initial_weeks_since_change = 0);

}  // namespace simlr
