#include <algorithm>
#include <cmath>
#include <limits>

#include "simlr/data.hpp"

namespace simlr {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> difference(std::span<const std::optional<std::int64_t>> cumulative) {
  std::vector<double> out;
  if (cumulative.size() < 2) return out;
  out.reserve(cumulative.size() - 1);
  // A report after blank cells is differenced against the last report, so
  // the gap's cases land on the reporting day and get spread back by the fill.
  std::optional<std::int64_t> last = cumulative[0];
  for (std::size_t k = 1; k < cumulative.size(); ++k) {
    if (cumulative[k] && last) {
      out.push_back(static_cast<double>(*cumulative[k] - *last));
    } else {
      out.push_back(kMissing);
    }
    if (cumulative[k]) last = cumulative[k];
  }
  return out;
}

int mark_negative_missing(std::vector<double>& daily) {
  int count = 0;
  for (auto& v : daily) {
    if (v < 0.0) {
      v = kMissing;
      ++count;
    }
  }
  return count;
}

int fill_missing(std::vector<double>& daily, int* trailing) {
  int filled = 0;
  int tail = 0;
  std::size_t k = 0;
  while (k < daily.size()) {
    if (!std::isnan(daily[k])) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < daily.size() && std::isnan(daily[end])) ++end;
    if (end == daily.size()) {
      for (std::size_t j = k; j < end; ++j) daily[j] = 0.0;
      tail += static_cast<int>(end - k);
      break;
    }
    const double share = daily[end] / static_cast<double>(end - k + 1);
    for (std::size_t j = k; j <= end; ++j) daily[j] = share;
    filled += static_cast<int>(end - k);
    k = end + 1;
  }
  if (trailing) *trailing = tail;
  return filled;
}

int clamp_outliers(std::vector<double>& daily, int window, double sigmas) {
  int clamped = 0;
  const std::size_t w = static_cast<std::size_t>(window);
  for (std::size_t d = w; d < daily.size(); ++d) {
    double mean = 0.0;
    for (std::size_t j = d - w; j < d; ++j) mean += daily[j];
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t j = d - w; j < d; ++j) var += (daily[j] - mean) * (daily[j] - mean);
    const double bound = mean + sigmas * std::sqrt(var / static_cast<double>(w));
    if (daily[d] > bound) {
      daily[d] = bound;
      ++clamped;
    }
  }
  return clamped;
}

std::vector<double> clean_daily(std::span<const double> daily, const CleanOptions& options,
                                CleanStats* stats) {
  std::vector<double> out(daily.begin(), daily.end());
  CleanStats s;
  s.negatives = mark_negative_missing(out);
  s.missing_filled = fill_missing(out, &s.trailing_missing);
  if (options.clamp_outliers) s.outliers_clamped = clamp_outliers(out, options.outlier_window, options.outlier_sigmas);
  if (stats) *stats = s;
  return out;
}

DailySeries preprocess(const RawSeries& raw, const CleanOptions& options) {
  const std::size_t days = raw.dates.empty() ? 0 : raw.dates.size() - 1;
  if (days < 11) {
    throw DataError("series too short for outlier removal: " + std::to_string(days) +
                    " daily values, need at least 11");
  }
  DailySeries out;
  out.region = raw.region;
  out.first_day = raw.dates[1];
  out.infections = clean_daily(difference(raw.cumulative_cases), options, &out.infection_stats);
  CleanOptions death_options = options;
  death_options.clamp_outliers = false;
  out.deaths = clean_daily(difference(raw.cumulative_deaths), death_options, &out.death_stats);
  return out;
}

}  // namespace simlr
