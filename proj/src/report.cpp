#include "simlr/report.hpp"

#include <cmath>
#include <json.hpp>
#include <ostream>

#include "simlr/csv.hpp"

namespace simlr {
namespace {

std::string num(double v) { return std::isnan(v) ? std::string() : csv::format_exact(v); }

nlohmann::json jnum(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

}  // namespace

std::string meta_comment(const OutputMeta& meta) {
  return "# simlr " + meta.kind + " v" + std::to_string(meta.format_version) + " code=" +
         meta.code_version + " config=" + meta.config_hash + " seed=" + std::to_string(meta.seed);
}

void write_eval_summary_csv(std::ostream& out, const EvalResult& result, const OutputMeta& meta) {
  out << meta_comment(meta) << '\n';
  out << "region,model,horizon,mape,n_origins,excluded_zero,skipped\n";
  for (const auto& r : result.reports) {
    out << r.region << ',' << r.model << ',' << r.horizon << ',' << num(r.mape) << ',' << r.n_origins
        << ',' << r.excluded_zero << ',' << r.skipped << '\n';
  }
}

void write_eval_json(std::ostream& out, const EvalResult& result, const OutputMeta& meta) {
  nlohmann::json doc;
  doc["meta"] = {{"kind", meta.kind},
                 {"format_version", meta.format_version},
                 {"code_version", meta.code_version},
                 {"config_hash", meta.config_hash},
                 {"seed", meta.seed}};
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& r : result.reports) {
    nlohmann::json origins = nlohmann::json::array();
    for (const auto& e : r.errors) {
      origins.push_back({{"origin", format_date(e.origin)},
                         {"actual", e.actual},
                         {"predicted", e.predicted},
                         {"error", jnum(e.ape)}});
    }
    summary.push_back({{"region", r.region},
                       {"model", r.model},
                       {"horizon", r.horizon},
                       {"mape", jnum(r.mape)},
                       {"n_origins", r.n_origins},
                       {"excluded_zero", r.excluded_zero},
                       {"skipped", r.skipped},
                       {"origins", origins}});
  }
  doc["summary"] = summary;
  nlohmann::json skips = nlohmann::json::array();
  for (const auto& s : result.skips) {
    skips.push_back({{"origin", format_date(s.origin)},
                     {"model", s.model},
                     {"horizon", s.horizon},
                     {"reason", s.reason}});
  }
  doc["skips"] = skips;
  out << doc.dump(2) << '\n';
}

void write_eval_plot_csv(std::ostream& out, const EvalResult& result, const OutputMeta& meta) {
  out << meta_comment(meta) << '\n';
  out << "region,model,horizon,origin,error\n";
  for (const auto& r : result.reports) {
    for (const auto& e : r.errors) {
      out << r.region << ',' << r.model << ',' << r.horizon << ',' << format_date(e.origin) << ','
          << num(e.ape) << '\n';
    }
  }
}

void write_forecast_csv(std::ostream& out, std::span<const Forecast> forecasts, const OutputMeta& meta) {
  out << meta_comment(meta) << '\n';
  out << "region,origin,horizon,target_week,point,tfvsir,slow,weight_trend,weight_slow,"
         "ct_minus1,ct_0,ct_plus1,cp_minus1,cp_0,cp_plus1\n";
  for (const auto& f : forecasts) {
    const Date target = f.origin + std::chrono::days{7 * (f.horizon - 1)};
    out << f.region << ',' << format_date(f.origin) << ',' << f.horizon << ',' << format_date(target) << ','
        << num(f.point) << ',' << num(f.tfvsir_point) << ',' << num(f.slow_point) << ','
        << num(f.weight_trend) << ',' << num(f.weight_slow) << ',' << num(f.ct[0]) << ',' << num(f.ct[1])
        << ',' << num(f.ct[2]) << ',' << num(f.cp[0]) << ',' << num(f.cp[1]) << ',' << num(f.cp[2]) << '\n';
  }
}

}  // namespace simlr
