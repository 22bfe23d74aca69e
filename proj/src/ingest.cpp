#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>

#include "simlr/csv.hpp"
#include "simlr/data.hpp"

namespace simlr {
namespace {

std::optional<Date> try_date(const std::string& text) {
  try {
    return parse_date(csv::trim(text));
  } catch (const DataError&) {
    return std::nullopt;
  }
}

int find_column(const std::vector<std::string>& header, std::initializer_list<const char*> names) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    const std::string h = csv::trim(header[k]);
    for (const char* n : names) {
      if (h == n) return static_cast<int>(k);
    }
  }
  return -1;
}

std::optional<std::int64_t> parse_count(const std::string& field, const std::string& where) {
  const std::string t = csv::trim(field);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v) || v != std::floor(v)) {
    throw IngestError(IngestErrorCode::schema_mismatch,
                      "expected an integer count, got '" + t + "' (" + where + ")");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

RegionId RegionId::parse(const std::string& id) {
  const auto slash = id.find('/');
  if (slash == std::string::npos) return {csv::trim(id), ""};
  return {csv::trim(id.substr(0, slash)), csv::trim(id.substr(slash + 1))};
}

std::string RegionId::str() const { return province.empty() ? country : country + "/" + province; }

CumulativeSeries ingest_cumulative(std::istream& in, const std::string& region) {
  const auto records = csv::read_records(in);
  if (records.empty()) throw IngestError(IngestErrorCode::schema_mismatch, "case table is empty");
  const auto& header = records.front();
  const int country_col = find_column(header, {"Country/Region", "Country_Region"});
  const int province_col = find_column(header, {"Province/State", "Province_State"});
  if (country_col < 0 || province_col < 0) {
    throw IngestError(IngestErrorCode::schema_mismatch,
                      "case table header needs Province/State and Country/Region columns");
  }
  std::vector<int> date_cols;
  std::vector<Date> header_dates;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (static_cast<int>(k) == country_col || static_cast<int>(k) == province_col) continue;
    if (auto d = try_date(header[k])) {
      date_cols.push_back(static_cast<int>(k));
      header_dates.push_back(*d);
    }
  }
  if (date_cols.empty()) throw IngestError(IngestErrorCode::schema_mismatch, "case table has no date columns");
  for (std::size_t k = 1; k < header_dates.size(); ++k) {
    if (header_dates[k] <= header_dates[k - 1]) {
      throw IngestError(IngestErrorCode::non_monotonic_dates,
                        "case table dates are not increasing at column '" + header[date_cols[k]] + "'");
    }
  }

  const RegionId id = RegionId::parse(region);
  std::vector<std::optional<std::int64_t>> sum(header_dates.size(), std::int64_t{0});
  bool found = false;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw IngestError(IngestErrorCode::schema_mismatch,
                        "case table row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                            " fields, header has " + std::to_string(header.size()));
    }
    if (csv::trim(rec[country_col]) != id.country) continue;
    if (!id.province.empty() && csv::trim(rec[province_col]) != id.province) continue;
    found = true;
    for (std::size_t k = 0; k < date_cols.size(); ++k) {
      const auto v = parse_count(rec[date_cols[k]], "row " + std::to_string(r));
      if (!v || !sum[k]) sum[k] = std::nullopt;
      else *sum[k] += *v;
    }
  }
  if (!found) throw IngestError(IngestErrorCode::unknown_region, "unknown region: " + region);

  CumulativeSeries out;
  out.region = id.str();
  for (std::size_t k = 0; k < header_dates.size(); ++k) {
    if (k > 0) {
      for (Date d = header_dates[k - 1] + std::chrono::days{1}; d < header_dates[k]; d += std::chrono::days{1}) {
        out.dates.push_back(d);
        out.values.push_back(std::nullopt);
      }
    }
    out.dates.push_back(header_dates[k]);
    out.values.push_back(sum[k]);
  }
  return out;
}

RawSeries ingest_cases(std::istream& cases_csv, std::istream& deaths_csv, const std::string& region) {
  const CumulativeSeries cases = ingest_cumulative(cases_csv, region);
  const CumulativeSeries deaths = ingest_cumulative(deaths_csv, region);
  const Date first = std::max(cases.dates.front(), deaths.dates.front());
  const Date last = std::min(cases.dates.back(), deaths.dates.back());
  if (last < first) throw IngestError(IngestErrorCode::schema_mismatch, "case and death tables do not overlap");
  RawSeries raw;
  raw.region = cases.region;
  const auto off_c = (first - cases.dates.front()).count();
  const auto off_d = (first - deaths.dates.front()).count();
  const auto len = (last - first).count() + 1;
  for (long k = 0; k < len; ++k) {
    raw.dates.push_back(first + std::chrono::days{k});
    raw.cumulative_cases.push_back(cases.values[off_c + k]);
    raw.cumulative_deaths.push_back(deaths.values[off_d + k]);
  }
  return raw;
}

PolicySeries ingest_policy(std::istream& in, const std::string& region) {
  const auto records = csv::read_records(in);
  if (records.empty()) throw IngestError(IngestErrorCode::schema_mismatch, "policy table is empty");
  const auto& header = records.front();
  const int country_col = find_column(header, {"CountryName"});
  const int region_col = find_column(header, {"RegionName"});
  const int date_col = find_column(header, {"Date"});
  auto indicator = [&](const char* code, const char* label) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      const std::string h = csv::trim(header[k]);
      if (h.rfind(code, 0) == 0 && h.find(label) != std::string::npos && h.find("Flag") == std::string::npos) {
        return static_cast<int>(k);
      }
    }
    return -1;
  };
  const std::array<int, 3> cols{indicator("C2", "Workplace closing"),
                                indicator("C6", "Stay at home requirements"),
                                indicator("C3", "Cancel public events")};
  if (country_col < 0 || date_col < 0 || cols[0] < 0 || cols[1] < 0 || cols[2] < 0) {
    throw IngestError(IngestErrorCode::schema_mismatch,
                      "policy table needs CountryName, Date and the C2/C6/C3 indicator columns");
  }
  const RegionId id = RegionId::parse(region);
  PolicySeries out;
  out.region = id.str();
  PolicyLevels last{0, 0, 0};
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw IngestError(IngestErrorCode::schema_mismatch,
                        "policy table row " + std::to_string(r) + " has the wrong field count");
    }
    if (csv::trim(rec[country_col]) != id.country) continue;
    const std::string reg = region_col >= 0 ? csv::trim(rec[region_col]) : std::string();
    if (reg != id.province) continue;
    const auto d = try_date(rec[date_col]);
    if (!d) throw IngestError(IngestErrorCode::schema_mismatch, "policy table: bad date '" + rec[date_col] + "'");
    if (!out.dates.empty() && *d <= out.dates.back()) {
      throw IngestError(IngestErrorCode::non_monotonic_dates,
                        "policy table dates are not increasing at " + format_date(*d));
    }
    PolicyLevels lv = last;
    for (int k = 0; k < 3; ++k) {
      if (auto v = parse_count(rec[cols[k]], "policy row " + std::to_string(r))) lv[k] = static_cast<int>(*v);
    }
    out.dates.push_back(*d);
    out.levels.push_back(lv);
    last = lv;
  }
  if (out.dates.empty()) throw IngestError(IngestErrorCode::unknown_region, "unknown region in policy table: " + region);
  return out;
}

}  // namespace simlr
