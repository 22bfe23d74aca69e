#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "simlr/eval.hpp"
#include "simlr/forecaster.hpp"

namespace simlr {

// Provenance stamped into every output file.
struct OutputMeta {
  std::string kind;  // e.g. "eval-summary"
  int format_version = 1;
  std::string code_version = SIMLR_VERSION;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// "# simlr <kind> v<format> code=<version> config=<hash> seed=<seed>"
std::string meta_comment(const OutputMeta& meta);

// Columns: region,model,horizon,mape,n_origins,excluded_zero,skipped
void write_eval_summary_csv(std::ostream& out, const EvalResult& result, const OutputMeta& meta);
// Same summary fields plus per-origin errors and skips.
void write_eval_json(std::ostream& out, const EvalResult& result, const OutputMeta& meta);
// Long format: region,model,horizon,origin,error
void write_eval_plot_csv(std::ostream& out, const EvalResult& result, const OutputMeta& meta);

// Columns: region,origin,horizon,target_week,point,tfvsir,slow,weight_trend,
// weight_slow,ct_minus1,ct_0,ct_plus1,cp_minus1,cp_0,cp_plus1
void write_forecast_csv(std::ostream& out, std::span<const Forecast> forecasts, const OutputMeta& meta);

}  // namespace simlr
