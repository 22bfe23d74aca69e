#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "simlr/checksum.hpp"
#include "simlr/csv.hpp"
#include "simlr/data.hpp"
#include "simlr/error.hpp"
#include "simlr/eval.hpp"
#include "simlr/forecaster.hpp"
#include "simlr/kernels.hpp"
#include "simlr/pgm.hpp"
#include "simlr/region.hpp"
#include "simlr/report.hpp"

namespace simlr::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string region;
  double population = 0.0;
  fs::path data_dir;
  fs::path cases_csv, deaths_csv, policy_csv;
  fs::path cpt_file, soft_labels, nn_weights;
  FitConfig fit;
  CleanOptions clean;
  std::vector<Date> origins;
  std::uint64_t seed = 42;
  fs::path out_dir;
  json effective;  // resolved settings, hashed into every output

  std::string hash() const { return hex64(fnv1a64(effective.dump())); }
};

struct Overrides {
  std::string config;
  std::string region;
  std::string out;
  std::optional<std::uint64_t> seed;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("config: no ") + what + " given");
  if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

RunConfig load_config(const Overrides& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  std::ifstream in(o.config);
  if (!in) throw ConfigError("cannot open config file: " + o.config);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  const fs::path base = fs::absolute(fs::path(o.config)).parent_path();
  RunConfig c;
  try {
    c.region = o.region.empty() ? doc.at("region").get<std::string>() : o.region;
    if (doc.contains("populations") && doc["populations"].contains(c.region)) {
      c.population = doc["populations"][c.region].get<double>();
    } else {
      c.population = doc.at("population").get<double>();
    }
    std::string data_dir = doc.value("data_dir", std::string("."));
    if (const char* env = std::getenv("SIMLR_DATA_DIR")) data_dir = env;
    c.data_dir = resolve(base, data_dir);
    c.cases_csv = resolve(c.data_dir, doc.value("cases_csv", std::string()));
    c.deaths_csv = resolve(c.data_dir, doc.value("deaths_csv", std::string()));
    c.policy_csv = resolve(c.data_dir, doc.value("policy_csv", std::string()));
    c.cpt_file = resolve(base, doc.value("cpt_file", std::string()));
    c.soft_labels = resolve(base, doc.value("soft_labels", std::string()));
    c.nn_weights = resolve(base, doc.value("nn_weights", std::string()));
    if (doc.contains("fit")) {
      const auto& f = doc["fit"];
      c.fit = {f.value("lambda1", 0.0), f.value("lambda2", 0.0), f.value("beta0", 0.0), f.value("gamma0", 0.0)};
    }
    if (doc.contains("clean")) c.clean.clamp_outliers = doc["clean"].value("clamp_outliers", true);
    if (doc.contains("origins")) {
      for (const auto& d : doc["origins"]) c.origins.push_back(parse_date(d.get<std::string>()));
    } else {
      c.origins = default_origins();
    }
    c.seed = o.seed ? *o.seed : doc.value("seed", std::uint64_t{42});
    c.out_dir = o.out.empty() ? resolve(base, doc.value("out_dir", std::string("out"))) : fs::path(o.out);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  } catch (const DataError& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  if (!(c.population > 0.0)) throw ConfigError("config: population must be positive");
  if (c.fit.lambda1 < 0.0 || c.fit.lambda2 < 0.0) throw ConfigError("config: lambda values must be >= 0");

  json origins = json::array();
  for (Date d : c.origins) origins.push_back(format_date(d));
  c.effective = {{"region", c.region},
                 {"population", c.population},
                 {"fit", {{"lambda1", c.fit.lambda1}, {"lambda2", c.fit.lambda2},
                          {"beta0", c.fit.beta0}, {"gamma0", c.fit.gamma0}}},
                 {"clamp_outliers", c.clean.clamp_outliers},
                 {"origins", origins},
                 {"seed", c.seed},
                 {"cases_csv", c.cases_csv.filename().string()},
                 {"deaths_csv", c.deaths_csv.filename().string()},
                 {"policy_csv", c.policy_csv.filename().string()}};
  return c;
}

std::string slug(const std::string& region) {
  std::string s;
  for (char ch : region) s.push_back(std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
  return s;
}

fs::path region_dir(const RunConfig& c) {
  fs::path dir = c.out_dir / slug(c.region);
  fs::create_directories(dir);
  return dir;
}

std::ifstream open_input(const fs::path& p, const char* what) {
  require_file(p, what);
  std::ifstream in(p);
  if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + p.string());
  return in;
}

struct LoadedRegion {
  RawSeries raw;
  PolicySeries policy;
  RegionInput input;
};

LoadedRegion load_region(const RunConfig& c) {
  require_file(c.cases_csv, "case table");
  require_file(c.deaths_csv, "death table");
  require_file(c.policy_csv, "policy table");
  auto cases = open_input(c.cases_csv, "case table");
  auto deaths = open_input(c.deaths_csv, "death table");
  auto policy = open_input(c.policy_csv, "policy table");
  LoadedRegion r;
  r.raw = ingest_cases(cases, deaths, c.region);
  r.policy = ingest_policy(policy, c.region);
  r.input = make_region_input(r.raw, r.policy, c.population);
  return r;
}

PgmConfig load_pgm(const RunConfig& c, std::ostream& err) {
  require_file(c.cpt_file, "CPT file");
  PgmConfig pgm;
  pgm.cpts = load_cpts(c.cpt_file);
  if (!c.nn_weights.empty() && fs::exists(c.nn_weights)) {
    pgm.urgency = load_nn_cpd(c.nn_weights);
  } else {
    require_file(c.soft_labels, "soft-label dataset");
    TrainLog log;
    pgm.urgency = train_nn_cpd(load_soft_labels(c.soft_labels), TrainOptions{0.05, 5000, c.seed}, &log);
    err << "urgency net: trained " << log.epochs << " epochs, step " << log.step_size << ", seed "
        << log.seed << ", loss " << log.initial_loss << " -> " << log.final_loss << '\n';
  }
  return pgm;
}

OutputMeta meta(const RunConfig& c, const std::string& kind) {
  OutputMeta m;
  m.kind = kind;
  m.config_hash = c.hash();
  m.seed = c.seed;
  return m;
}

// The Sunday after the last complete grid week of the data.
Date latest_origin(const RegionInput& in) {
  const Date end = in.first_day + std::chrono::days{static_cast<long>(in.daily_cases.size())};
  return week_start(end);
}

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  const LoadedRegion r = load_region(c);
  const DailySeries daily = preprocess(r.raw, c.clean);
  const std::vector<SirState> states = build_sir_series(daily.infections, daily.deaths, c.population);
  const fs::path dir = region_dir(c);
  {
    std::ofstream f(dir / "daily.csv");
    f << meta_comment(meta(c, "daily")) << "\ndate,new_infections,new_deaths\n";
    for (std::size_t k = 0; k < daily.infections.size(); ++k) {
      f << format_date(daily.first_day + std::chrono::days{static_cast<long>(k)}) << ','
        << csv::format_exact(daily.infections[k]) << ',' << csv::format_exact(daily.deaths[k]) << '\n';
    }
  }
  {
    std::ofstream f(dir / "sir.csv");
    f << meta_comment(meta(c, "sir")) << "\ndate,S,I,R,N\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
      f << format_date(daily.first_day + std::chrono::days{static_cast<long>(k)}) << ','
        << csv::format_exact(states[k].s) << ',' << csv::format_exact(states[k].i) << ','
        << csv::format_exact(states[k].r) << ',' << csv::format_exact(states[k].n) << '\n';
    }
  }
  const Date first_week = week_start(daily.first_day + std::chrono::days{6});
  const long span_days = static_cast<long>(daily.infections.size()) - (first_week - daily.first_day).count();
  const int weeks = static_cast<int>(std::max(0L, span_days / 7));
  {
    std::ofstream f(dir / "policy.csv");
    f << meta_comment(meta(c, "policy")) << "\nweek_start,cp,weeks_since_change\n";
    if (weeks > 0) {
      const PolicyTimeline tl = derive_policy_changes(r.policy, first_week, weeks);
      for (int w = 0; w < weeks; ++w) {
        f << format_date(first_week + std::chrono::days{7 * w}) << ',' << tl.cp[w] << ','
          << tl.weeks_since_change[w] << '\n';
      }
    }
  }
  out << "region " << c.region << '\n'
      << "days " << daily.infections.size() << '\n'
      << "weeks " << weeks << '\n'
      << "negative_days " << daily.infection_stats.negatives + daily.death_stats.negatives << '\n'
      << "missing_filled " << daily.infection_stats.missing_filled + daily.death_stats.missing_filled << '\n'
      << "trailing_missing " << daily.infection_stats.trailing_missing + daily.death_stats.trailing_missing
      << '\n'
      << "outliers_clamped " << daily.infection_stats.outliers_clamped << '\n'
      << "output " << dir.string() << '\n';
  return kOk;
}

Date origin_or_latest(const std::string& origin, const RegionInput& in) {
  if (origin.empty()) return latest_origin(in);
  Date d;
  try {
    d = parse_date(origin);
  } catch (const DataError& e) {
    throw ConfigError(std::string("--origin: ") + e.what());
  }
  if (!is_sunday(d)) throw ConfigError("--origin must be a Sunday (weeks run Sunday to Saturday)");
  return d;
}

int cmd_fit(const RunConfig& c, const std::string& origin_text, std::ostream& out) {
  const LoadedRegion r = load_region(c);
  const Date origin = origin_or_latest(origin_text, r.input);
  const TrainingSlice slice = make_training_slice(r.input, origin, c.clean);
  const FittedHistory h = fit_history(slice, c.fit);
  const TrendModel trend = fit_trend(h.weekly);
  const fs::path dir = region_dir(c);
  std::ofstream f(dir / "weekly_params.csv");
  f << meta_comment(meta(c, "weekly-params")) << "\nweek_start,beta,gamma,residual,clamped\n";
  for (const auto& w : h.weekly) {
    f << format_date(slice.first_week + std::chrono::days{7 * w.week_index}) << ','
      << csv::format_exact(w.beta) << ',' << csv::format_exact(w.gamma) << ','
      << csv::format_exact(w.residual) << ',' << (w.clamped ? 1 : 0) << '\n';
  }
  json tj = {{"meta", {{"kind", "trend"}, {"code_version", SIMLR_VERSION}, {"config_hash", c.hash()}, {"seed", c.seed}}},
             {"origin", format_date(origin)},
             {"alpha", trend.alpha},
             {"omega", trend.omega},
             {"sigma_beta2", trend.sigma_beta2},
             {"sigma_gamma2", trend.sigma_gamma2},
             {"beta_order", trend.beta_order},
             {"gamma_order", trend.gamma_order}};
  std::ofstream(dir / "trend.json") << tj.dump(2) << '\n';
  out << "fitted " << h.weekly.size() << " weeks before " << format_date(origin) << "; beta lags "
      << trend.beta_order << ", gamma lags " << trend.gamma_order << '\n';
  return kOk;
}

int cmd_forecast(const RunConfig& c, const std::string& origin_text, int horizon, const std::string& model,
                 std::ostream& out, std::ostream& err) {
  if (horizon < 1 || horizon > 4) throw ConfigError("--horizon must be 1..4");
  if (model != "simlr" && model != "tfvsir" && model != "slow") {
    throw ConfigError("--model must be simlr, tfvsir or slow");
  }
  const LoadedRegion r = load_region(c);
  const Date origin = origin_or_latest(origin_text, r.input);
  const TrainingSlice slice = make_training_slice(r.input, origin, c.clean);
  const ForecastInputs in = make_forecast_inputs(slice, c.fit);
  const TrendModel trend = fit_trend(in.history);

  std::vector<Forecast> forecasts;
  if (model == "simlr") {
    forecasts = mixture_forecast(in, load_pgm(c, err), trend, horizon);
  } else {
    if (in.history.size() < 3) throw ColdStartError("need at least 3 fitted weeks before the origin");
    const std::vector<double> tf = tfvsir_forecast(in.state, in.history, trend, horizon);
    const std::vector<double> slow = slow_forecast(in.weekly_cases.back(), horizon);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int h = 1; h <= horizon; ++h) {
      Forecast f;
      f.region = in.region;
      f.origin = origin;
      f.horizon = h;
      f.tfvsir_point = tf[h - 1];
      f.slow_point = slow[h - 1];
      f.weight_trend = model == "tfvsir" ? 1.0 : 0.0;
      f.weight_slow = 1.0 - f.weight_trend;
      f.point = model == "tfvsir" ? f.tfvsir_point : f.slow_point;
      f.ct = {nan, nan, nan};
      f.cp = {nan, nan, nan};
      forecasts.push_back(f);
    }
  }
  const OutputMeta m = meta(c, "forecast-" + model);
  write_forecast_csv(out, forecasts, m);
  std::ofstream f(region_dir(c) / ("forecast_" + format_date(origin) + "_" + model + ".csv"));
  write_forecast_csv(f, forecasts, m);
  return kOk;
}

int cmd_evaluate(const RunConfig& c, int horizon, std::ostream& out, std::ostream& err) {
  if (horizon < 1 || horizon > 4) throw ConfigError("--horizon must be 1..4");
  const LoadedRegion r = load_region(c);
  const PgmConfig pgm = load_pgm(c, err);
  const std::vector<ModelForecaster> models{make_simlr_model(pgm, c.fit), make_tfvsir_model(c.fit),
                                            make_slow_model()};
  EvalOptions opts;
  opts.max_horizon = horizon;
  opts.clean = c.clean;
  const EvalResult result = rolling_evaluate(r.input, models, c.origins, opts);
  const fs::path dir = region_dir(c);
  {
    std::ofstream f(dir / "eval_summary.csv");
    write_eval_summary_csv(f, result, meta(c, "eval-summary"));
  }
  {
    std::ofstream f(dir / "eval.json");
    write_eval_json(f, result, meta(c, "eval"));
  }
  {
    std::ofstream f(dir / "eval_plot.csv");
    write_eval_plot_csv(f, result, meta(c, "eval-plot"));
  }
  for (const auto& s : result.skips) {
    err << "skipped " << format_date(s.origin) << (s.model.empty() ? "" : " " + s.model)
        << (s.horizon ? " h" + std::to_string(s.horizon) : "") << ": " << s.reason << '\n';
  }
  write_eval_summary_csv(out, result, meta(c, "eval-summary"));
  return kOk;
}

int cmd_train_urgency(const RunConfig& c, const std::string& dest, std::ostream& out) {
  require_file(c.soft_labels, "soft-label dataset");
  const SoftLabelDataset data = load_soft_labels(c.soft_labels);
  TrainLog log;
  const NnCpd net = train_nn_cpd(data, TrainOptions{0.05, 5000, c.seed}, &log);
  fs::path path = dest.empty() ? c.out_dir / "urgency_nncpd.txt" : fs::path(dest);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_nn_cpd(path, net);
  out << "rows " << data.size() << "\nepochs " << log.epochs << "\nstep_size " << log.step_size << "\nseed "
      << log.seed << "\nloss_initial " << log.initial_loss << "\nloss_final " << log.final_loss
      << "\nloss_uniform " << uniform_loss(data) << "\nweights " << path.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SIMLR: policy-aware SIR forecasting of weekly new infections"};
  app.require_subcommand(1);
  Overrides o;
  std::string origin;
  std::string model = "simlr";
  std::string dest;
  int horizon = 4;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration (JSON)")->required();
    sub->add_option("--region", o.region, "Region id, e.g. Canada/Alberta");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", seed, "Seed for the urgency network initialization");
  };
  CLI::App* ingest = app.add_subcommand("ingest", "Clean raw tables and write SIR and policy series");
  add_common(ingest);
  CLI::App* fit = app.add_subcommand("fit", "Fit weekly rates and the trend model");
  add_common(fit);
  fit->add_option("--origin", origin, "Fit on data before this Sunday (default: all full weeks)");
  CLI::App* forecast = app.add_subcommand("forecast", "Forecast weekly new infections 1-4 weeks ahead");
  add_common(forecast);
  forecast->add_option("--origin", origin, "First forecast week (a Sunday)");
  forecast->add_option("--horizon", horizon, "Weeks ahead (1-4)");
  forecast->add_option("--model", model, "simlr, tfvsir or slow");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Rolling-origin MAPE of SIMLR, tf-v-SIR and SLOW");
  add_common(evaluate);
  evaluate->add_option("--horizon", horizon, "Largest horizon (1-4)");
  CLI::App* train = app.add_subcommand("train-urgency", "Train the urgency network and save its weights");
  add_common(train);
  train->add_option("--weights", dest, "Destination weights file");
  CLI::App* defaults = app.add_subcommand("default-cpts", "Print the built-in CPT file");

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUserError;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      for (const auto* opt : sub->get_options()) {
        if (opt->get_name() == "--seed" && opt->count() > 0) o.seed = seed;
      }
    }
    if (defaults->parsed()) {
      out << cpts_to_json(default_cpts());
      return kOk;
    }
    const RunConfig c = load_config(o);
    err << "kernels: " << kernels::isa_name(kernels::active().isa) << ", config " << c.hash() << ", seed "
        << c.seed << '\n';
    if (ingest->parsed()) return cmd_ingest(c, out);
    if (fit->parsed()) return cmd_fit(c, origin, out);
    if (forecast->parsed()) return cmd_forecast(c, origin, horizon, model, out, err);
    if (evaluate->parsed()) return cmd_evaluate(c, horizon, out, err);
    if (train->parsed()) return cmd_train_urgency(c, dest, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUserError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << '\n';
    return e.kind() == ErrorKind::config ? kUserError : e.kind() == ErrorKind::data ? kDataError : kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace simlr::cli
