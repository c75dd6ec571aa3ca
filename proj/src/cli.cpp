#include "cgf_outliers/cli.hpp"

#include "cgf_outliers/detector.hpp"
#include "cgf_outliers/distributions.hpp"
#include "cgf_outliers/errors.hpp"
#include "cgf_outliers/evaluation.hpp"
#include "cgf_outliers/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>

namespace cgf_outliers {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

// Inconsistent flag combinations (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  // simulate / sweep
  std::string dist = "stdnormal";
  std::size_t n = 30;
  std::size_t T = 500;
  std::optional<double> nu;
  std::string alpha_range = "-1:4";
  std::string cov_path;
  double outlier_scale = 15.0;
  double condition = 20.0;

  // returns
  std::string prices_path;
  std::string returns_kind = "linear";

  // detect / evaluate
  std::string data_path;
  std::string labels_path;
  std::string crisis_date;
  double beta = 3.25;
  std::string beta_grid = "0.5:0.25:10";
  double eps_target = 0.1;
  std::size_t starts = 1000;
  std::string method = "maxcgf";
  double tolerance = 1e-7;
  std::size_t max_iters = 10000;
  double dedup_cos = 0.995;
  double radius = 0.0;

  // sweep
  std::string seeds = "1:5";

  // wall-clock timings go to a separate file so the other outputs stay byte-stable
  bool timings = false;
};

std::vector<double> parse_colon_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(':', pos);
    const std::string piece = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": cannot parse '" + text + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() != expected) throw UsageError(std::string(flag) + ": expected " + std::to_string(expected) + " ':'-separated values");
  return parts;
}

std::vector<double> resolve_grid(const Options& o) {
  const auto g = parse_colon_list(o.beta_grid, 3, "--beta-grid");
  try {
    return beta_grid(g[0], g[1], g[2]);
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--beta-grid: ") + e.what());
  }
}

std::vector<std::uint64_t> resolve_seeds(const Options& o) {
  const auto s = parse_colon_list(o.seeds, 2, "--seeds");
  if (s[0] < 0 || s[1] < s[0] || s[0] != std::floor(s[0]) || s[1] != std::floor(s[1])) {
    throw UsageError("--seeds: expected lo:hi with 0 <= lo <= hi integers");
  }
  std::vector<std::uint64_t> seeds;
  for (auto k = static_cast<std::uint64_t>(s[0]); k <= static_cast<std::uint64_t>(s[1]); ++k) seeds.push_back(k);
  return seeds;
}

DetectorConfig detector_config(const Options& o) {
  DetectorConfig cfg;
  cfg.beta = o.beta;
  cfg.target_eps = o.eps_target;
  cfg.method = parse_method(o.method);
  cfg.radius_override = o.radius;
  cfg.multistart.n_starts = o.starts;
  cfg.multistart.tolerance = o.tolerance;
  cfg.multistart.max_iters = o.max_iters;
  cfg.multistart.seed = o.seed;
  cfg.multistart.dedup_cos = o.dedup_cos;
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

json detector_json(const DetectorConfig& c) {
  return json{{"beta", c.beta},
              {"eps_target", c.target_eps},
              {"method", to_string(c.method)},
              {"radius_override", c.radius_override},
              {"starts", c.multistart.n_starts},
              {"tolerance", c.multistart.tolerance},
              {"max_iters", c.multistart.max_iters},
              {"dedup_cos", c.multistart.dedup_cos},
              {"seed", c.multistart.seed}};
}

json radius_json(const RadiusSelection& r) {
  return json{{"r_bar", r.r_bar},
              {"lambda1", r.lambda1},
              {"target_eps", r.target_eps},
              {"feasible", r.feasible},
              {"eps_achieved", r.eps_achieved}};
}

json envelope(const std::string& kind) {
  return json{{"schema", "cgf-outliers/" + kind}, {"schema_version", kSchemaVersion}, {"version", CGF_OUTLIERS_VERSION}};
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

SimulationSpec simulation_spec(const Options& o, std::uint64_t seed) {
  SimulationSpec spec;
  try {
    spec.family = parse_family(o.dist);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  spec.n = o.n;
  spec.T = o.T;
  spec.seed = seed;
  spec.outlier_scale = o.outlier_scale;
  if (o.nu.has_value() != (spec.family == Family::student_t)) {
    throw UsageError("--nu is required with --dist student and not accepted otherwise");
  }
  spec.nu = o.nu;
  if (spec.family != Family::std_normal) {
    if (!o.cov_path.empty()) {
      const DataMatrix cov = read_data_csv(o.cov_path);
      spec.sigma_mat = cov.values;
      if (cov.rows() != o.n || cov.cols() != o.n) throw UsageError("--cov: covariance must be n x n");
    } else {
      spec.sigma_mat = synthetic_covariance(o.n, o.condition, seed);
    }
  } else if (!o.cov_path.empty()) {
    throw UsageError("--cov is not used with --dist stdnormal");
  }
  if (spec.family == Family::skew_normal) {
    const auto range = parse_colon_list(o.alpha_range, 2, "--alpha-range");
    spec.alpha = draw_alpha(o.n, range[0], range[1], seed);
  }
  try {
    spec.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

json simulation_json(const SimulationSpec& s) {
  json j{{"dist", to_string(s.family)},
         {"n", s.n},
         {"t", s.T},
         {"seed", s.seed},
         {"outlier_scale", s.outlier_scale},
         {"outlier_row_frac", s.outlier_row_frac},
         {"outlier_col_frac", s.outlier_col_frac}};
  if (s.nu) j["nu"] = *s.nu;
  if (s.alpha) j["alpha"] = to_std(*s.alpha);
  return j;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------- subcommands

int cmd_simulate(const Options& o, std::ostream& out) {
  const SimulationSpec spec = simulation_spec(o, o.seed);
  const LabeledDataset ds = inject_outliers(spec);
  const fs::path dir(o.out_dir);
  write_text_file(dir / "data.csv", format_data_csv(ds.data));
  write_text_file(dir / "labels.csv", format_labels_csv(ds.truth));
  json meta = envelope("simulation");
  meta["config"] = simulation_json(spec);
  meta["config"]["cov"] = o.cov_path.empty() ? json(nullptr) : json(o.cov_path);
  meta["config"]["condition"] = o.condition;
  write_json(dir / "simulation.json", meta);
  out << "wrote " << (dir / "data.csv").string() << " and " << (dir / "labels.csv").string() << "\n";
  return kExitOk;
}

int cmd_returns(const Options& o, std::ostream& out) {
  if (o.prices_path.empty()) throw UsageError("returns: --prices is required");
  const PriceTable prices = read_prices_csv(o.prices_path);
  const DataMatrix r = compute_returns(prices, parse_return_kind(o.returns_kind));
  const fs::path path = fs::path(o.out_dir) / "returns.csv";
  write_text_file(path, format_data_csv(r, prices.tickers));
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_detect(const Options& o, std::ostream& out) {
  if (o.data_path.empty()) throw UsageError("detect: --data is required");
  const DetectorConfig cfg = detector_config(o);
  const DataMatrix data = read_data_csv(o.data_path);
  const DetectionReport rep = detect(data, cfg);

  json j = envelope("report");
  j["config"] = detector_json(cfg);
  j["config"]["data"] = o.data_path;
  j["radius"] = radius_json(rep.r_used);
  j["beta"] = rep.beta;
  j["n_rows"] = data.rows();
  j["n_flagged"] = rep.flagged_count();
  std::vector<std::size_t> flagged;
  std::vector<int> flags;
  for (std::size_t t = 0; t < rep.outlier_flags.size(); ++t) {
    flags.push_back(rep.outlier_flags[t] ? 1 : 0);
    if (rep.outlier_flags[t]) flagged.push_back(t);
  }
  j["flagged_rows"] = flagged;
  if (data.has_labels()) {
    std::vector<std::string> dates;
    for (std::size_t t : flagged) dates.push_back(data.row_labels[t]);
    j["flagged_labels"] = dates;
  }
  j["outlier_flags"] = flags;
  j["q_scores"] = rep.q_scores;  // NaN (never scored) serializes as null
  j["iterations_total"] = rep.iterations_total;
  json dirs = json::array();
  for (const auto& d : rep.directions) {
    dirs.push_back(json{{"initial", to_std(d.initial.theta())},
                        {"final", to_std(d.final_direction.theta())},
                        {"initial_cgf", d.initial_cgf},
                        {"kurtosis", d.kurtosis},
                        {"removed_per_iteration", d.removed_per_iteration},
                        {"removed", d.removed},
                        {"skipped", d.skipped},
                        {"note", d.note}});
  }
  j["directions"] = dirs;
  j["warnings"] = rep.warnings;
  const fs::path path = fs::path(o.out_dir) / "report.json";
  write_json(path, j);
  out << "flagged " << rep.flagged_count() << " of " << data.rows() << " rows; wrote " << path.string() << "\n";
  return kExitOk;
}

LabeledDataset load_labeled(const Options& o) {
  if (o.data_path.empty()) throw UsageError("--data is required");
  const DataMatrix data = read_data_csv(o.data_path);
  if (!o.labels_path.empty() && !o.crisis_date.empty()) throw UsageError("use either --labels or --crisis-date, not both");
  if (!o.crisis_date.empty()) return label_by_crisis(data, o.crisis_date);
  if (o.labels_path.empty()) throw UsageError("--labels or --crisis-date is required");
  LabeledDataset ds{data, read_labels_csv(o.labels_path)};
  if (ds.truth.size() != data.rows()) throw UsageError("labels row count does not match data");
  return ds;
}

std::string roc_csv(const RocCurve& c) {
  std::string s = "beta,fpr,tpr,youden_j\n";
  for (const auto& p : c.points) {
    s += format_double(p.beta) + "," + format_double(p.fpr) + "," + format_double(p.tpr) + "," +
         format_double(p.youden_j()) + "\n";
  }
  return s;
}

json sweep_summary(const RocSweepResult& res) {
  json runs = json::array();
  for (const auto& r : res.runs) {
    json e{{"beta", r.beta}, {"ok", r.ok}};
    if (r.ok) {
      e["tpr"] = r.rates.tpr;
      e["fpr"] = r.rates.fpr;
      e["flagged"] = r.flagged;
    } else {
      e["error"] = r.error;
    }
    runs.push_back(e);
  }
  return json{{"auc", res.curve.auc},
              {"bcv", res.curve.bcv},
              {"beta_star", res.curve.beta_star},
              {"radius", radius_json(res.radius)},
              {"directions", res.directions},
              {"runs", runs},
              {"warnings", res.warnings}};
}

json timings_json(const RocSweepResult& res) {
  json per_beta = json::array();
  for (const auto& r : res.runs) per_beta.push_back(json{{"beta", r.beta}, {"seconds", r.seconds}});
  return json{{"prepare_seconds", res.prepare_seconds}, {"per_beta", per_beta}};
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const DetectorConfig cfg = detector_config(o);
  const auto grid = resolve_grid(o);
  const LabeledDataset ds = load_labeled(o);
  const RocSweepResult res = roc_sweep(ds, grid, cfg);

  const fs::path dir(o.out_dir);
  write_text_file(dir / "roc.csv", roc_csv(res.curve));
  json j = envelope("summary");
  j["config"] = detector_json(cfg);
  j["config"].erase("beta");
  j["config"]["beta_grid"] = o.beta_grid;
  j["config"]["data"] = o.data_path;
  j["config"]["labels"] = o.labels_path.empty() ? json(nullptr) : json(o.labels_path);
  j["config"]["crisis_date"] = o.crisis_date.empty() ? json(nullptr) : json(o.crisis_date);
  j.update(sweep_summary(res));
  write_json(dir / "summary.json", j);
  if (o.timings) {
    json t = envelope("timings");
    t.update(timings_json(res));
    write_json(dir / "timings.json", t);
  }
  out << "auc " << res.curve.auc << " bcv " << res.curve.bcv << " beta* " << res.curve.beta_star << "; wrote "
      << (dir / "roc.csv").string() << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto seeds = resolve_seeds(o);
  const auto grid = resolve_grid(o);
  const bool fixed_data = !o.data_path.empty();
  std::optional<LabeledDataset> fixed;
  if (fixed_data) fixed = load_labeled(o);
  const fs::path dir(o.out_dir);

  json per_seed = json::array();
  json timing = json::array();
  std::vector<double> aucs;
  std::vector<double> bcvs;
  std::map<double, int> beta_star_counts;
  for (std::uint64_t seed : seeds) {
    Options so = o;
    so.seed = seed;
    const DetectorConfig cfg = detector_config(so);
    json entry{{"seed", seed}};
    LabeledDataset ds;
    if (fixed_data) {
      ds = *fixed;
    } else {
      const SimulationSpec spec = simulation_spec(o, seed);
      ds = inject_outliers(spec);
      entry["simulation"] = simulation_json(spec);
    }
    try {
      const RocSweepResult res = roc_sweep(ds, grid, cfg);
      write_text_file(dir / ("roc_seed" + std::to_string(seed) + ".csv"), roc_csv(res.curve));
      entry.update(sweep_summary(res));
      aucs.push_back(res.curve.auc);
      bcvs.push_back(res.curve.bcv);
      ++beta_star_counts[res.curve.beta_star];
      timing.push_back(json{{"seed", seed}, {"timings", timings_json(res)}});
    } catch (const DetectorError& e) {
      entry["error"] = e.what();
    }
    per_seed.push_back(entry);
  }

  auto mean_sd = [](const std::vector<double>& v) {
    if (v.empty()) return json{{"mean", nullptr}, {"sd", nullptr}, {"count", 0}};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return json{{"mean", mean}, {"sd", sd}, {"count", v.size()}};
  };
  json mode = nullptr;
  int best = 0;
  for (const auto& [b, c] : beta_star_counts) {
    if (c > best) {  // map order: smallest beta wins ties
      best = c;
      mode = b;
    }
  }

  json j = envelope("sweep");
  Options shown = o;
  j["config"] = detector_json(detector_config(shown));
  j["config"].erase("beta");
  j["config"].erase("seed");
  j["config"]["beta_grid"] = o.beta_grid;
  j["config"]["seeds"] = o.seeds;
  if (fixed_data) {
    j["config"]["data"] = o.data_path;
  } else {
    j["config"]["dist"] = o.dist;
    j["config"]["n"] = o.n;
    j["config"]["t"] = o.T;
  }
  j["per_seed"] = per_seed;
  j["aggregate"] = json{{"auc", mean_sd(aucs)}, {"bcv", mean_sd(bcvs)}, {"beta_star_mode", mode}};
  write_json(dir / "summary.json", j);
  if (o.timings) {
    json t = envelope("timings");
    t["per_seed"] = timing;
    write_json(dir / "timings.json", t);
  }
  out << "mean auc " << (aucs.empty() ? 0.0 : std::accumulate(aucs.begin(), aucs.end(), 0.0) / static_cast<double>(aucs.size()))
      << " over " << aucs.size() << " seeds; wrote " << (dir / "summary.json").string() << "\n";
  return aucs.empty() ? kExitRuntime : kExitOk;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Outlier detection by projection on CGF-maximizing directions", "cgf-outliers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CGF_OUTLIERS_VERSION);

  auto add_seed_out = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--dist", o.dist, "stdnormal | normal | skewnormal | student")->capture_default_str();
    sub->add_option("--n", o.n, "Number of variables")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--t", o.T, "Number of observations")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--nu", o.nu, "Student-t degrees of freedom (> 2)");
    sub->add_option("--alpha-range", o.alpha_range, "Skew-normal shape range lo:hi")->capture_default_str();
    sub->add_option("--cov", o.cov_path, "Covariance CSV (n x n, header row)");
    sub->add_option("--outlier-scale", o.outlier_scale, "Covariance multiplier for the outlier block")->capture_default_str();
    sub->add_option("--condition", o.condition, "Eigenvalue spread of the synthetic covariance")->capture_default_str();
  };
  auto add_detector = [&](CLI::App* sub) {
    sub->add_option("--eps-target", o.eps_target, "Target relative error of the CGF estimate")->capture_default_str();
    sub->add_option("--starts", o.starts, "Multistart points")->capture_default_str();
    sub->add_option("--method", o.method, "maxcgf | pca")->capture_default_str();
    sub->add_option("--tolerance", o.tolerance, "Ascent stopping tolerance")->capture_default_str();
    sub->add_option("--max-iters", o.max_iters, "Ascent iteration cap")->capture_default_str();
    sub->add_option("--dedup-cos", o.dedup_cos, "|cos| above which directions are merged")->capture_default_str();
    sub->add_option("--radius", o.radius, "Fixed radius (0 = select automatically)")->capture_default_str();
  };
  auto add_timings = [&](CLI::App* sub) {
    sub->add_flag("--timings", o.timings, "Also write wall-clock timings to timings.json");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate data with planted outliers");
  add_seed_out(simulate);
  add_sim(simulate);

  auto* returns = app.add_subcommand("returns", "Convert a price table to returns");
  returns->add_option("--prices", o.prices_path, "Price CSV (date + tickers)");
  returns->add_option("--returns", o.returns_kind, "linear | log")->capture_default_str();
  returns->add_option("--out", o.out_dir, "Output directory")->capture_default_str();

  auto* detect_cmd = app.add_subcommand("detect", "Flag outliers at one threshold");
  add_seed_out(detect_cmd);
  add_detector(detect_cmd);
  detect_cmd->add_option("--data", o.data_path, "Data CSV");
  detect_cmd->add_option("--beta", o.beta, "q-score threshold")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "ROC sweep over a beta grid on labelled data");
  add_seed_out(evaluate);
  add_detector(evaluate);
  evaluate->add_option("--data", o.data_path, "Data CSV");
  evaluate->add_option("--labels", o.labels_path, "Labels CSV");
  evaluate->add_option("--crisis-date", o.crisis_date, "Label rows dated on/after this day as outliers");
  evaluate->add_option("--beta-grid", o.beta_grid, "lo:step:hi")->capture_default_str();
  add_timings(evaluate);

  auto* sweep = app.add_subcommand("sweep", "Repeat evaluate over a seed range and aggregate");
  sweep->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  add_sim(sweep);
  add_detector(sweep);
  sweep->add_option("--seeds", o.seeds, "Seed range lo:hi")->capture_default_str();
  sweep->add_option("--data", o.data_path, "Fixed data CSV (seeds then vary only the detector)");
  sweep->add_option("--labels", o.labels_path, "Labels CSV for --data");
  sweep->add_option("--crisis-date", o.crisis_date, "Crisis date for dated --data");
  sweep->add_option("--beta-grid", o.beta_grid, "lo:step:hi")->capture_default_str();
  add_timings(sweep);

  std::vector<const char*> argv;
  argv.push_back("cgf-outliers");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CGF_OUTLIERS_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*returns) return cmd_returns(o, out);
    if (*detect_cmd) return cmd_detect(o, out);
    if (*evaluate) return cmd_evaluate(o, out);
    if (*sweep) return cmd_sweep(o, out);
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what());
    return kExitUsage;
  } catch (const ArgumentError& e) {
    report_error(err, "argument", e.what());
    return kExitUsage;
  } catch (const ParameterError& e) {
    report_error(err, "parameter", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, "runtime", e.what());
    return kExitRuntime;
  }
  report_error(err, "usage", "no subcommand given");
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cgf_outliers
