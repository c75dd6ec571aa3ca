// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//   acceptance [criterion-number ...]
#include "cgf_outliers/cgf.hpp"
#include "cgf_outliers/cli.hpp"
#include "cgf_outliers/detector.hpp"
#include "cgf_outliers/distributions.hpp"
#include "cgf_outliers/evaluation.hpp"
#include "cgf_outliers/io.hpp"
#include "cgf_outliers/rng.hpp"
#include "cgf_outliers/stats.hpp"

#include <json.hpp>

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace cgf_outliers;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double g_of_xi(const DataMatrix& x, const Vector& xi) {
  const double r = xi.norm();
  return r == 0.0 ? 0.0 : cgf_estimate(x, r, UnitDirection(xi));
}

Eigen::MatrixXd spd_with_spectrum(const Vector& eig, std::uint64_t seed) {
  const auto n = eig.size();
  Rng rng = make_stream(seed, 99);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = nd(rng);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  Eigen::MatrixXd s = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

// ---------------------------------------------------------------------------

Outcome convexity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> nd;
  double worst = -INFINITY;
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
    const std::size_t T = 5 + static_cast<std::size_t>(k % 50);
    const auto id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const DataMatrix x = k % 2 ? sample_normal(id, T, static_cast<std::uint64_t>(k)) : sample_student_t(id, 3.0, T, static_cast<std::uint64_t>(k));
    Vector a(static_cast<Eigen::Index>(n));
    Vector b(static_cast<Eigen::Index>(n));
    const double spread = 0.1 + 3.0 * u01(rng);
    for (auto& v : a) v = spread * nd(rng);
    for (auto& v : b) v = spread * nd(rng);
    const double gamma = u01(rng);
    const double slack = g_of_xi(x, gamma * a + (1.0 - gamma) * b) - (gamma * g_of_xi(x, a) + (1.0 - gamma) * g_of_xi(x, b));
    worst = std::max(worst, slack);
    if (slack > 1e-9) ++failures;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 10.0, fmt("1000 midpoint checks, %d violations, max slack %.3g, %.2f s", failures, worst, secs)};
}

Outcome gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(77);
  std::uniform_real_distribution<double> ur(0.1, 5.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
    const DataMatrix x = sample_normal(synthetic_covariance(n, 5.0, static_cast<std::uint64_t>(k)), 60, static_cast<std::uint64_t>(k) + 500);
    const double r = ur(rng);
    const UnitDirection theta = sample_unit_sphere(n, 1, static_cast<std::uint64_t>(k) + 7).front();
    const Vector grad = cgf_gradient(x, r, theta);
    const Vector xi = r * theta.theta();
    Vector fd(static_cast<Eigen::Index>(n));
    const double h = 1e-5;
    for (Eigen::Index j = 0; j < fd.size(); ++j) {
      Vector p = xi;
      Vector m = xi;
      p[j] += h;
      m[j] -= h;
      fd[j] = r * (g_of_xi(x, p) - g_of_xi(x, m)) / (2.0 * h);
    }
    worst = std::max(worst, (fd - grad).norm() / grad.norm());
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 10.0, fmt("100 cases, max relative error %.3g, %.2f s", worst, secs)};
}

Outcome normal_pc1() {
  const auto t0 = std::chrono::steady_clock::now();
  Vector eig(5);
  eig << 8.0, 2.0, 1.5, 1.2, 1.0;
  int hits = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::MatrixXd sigma = spd_with_spectrum(eig, seed);
    const DataMatrix x = center(sample_normal(sigma, 5000, seed)).data;
    const CovarianceSummary cov = covariance_pca(x);
    // minimum-variance radius a = r^2 lambda1 = a*
    const double r = std::sqrt(error_curve_argmin() / cov.lambda1());
    MultistartConfig cfg;
    cfg.n_starts = 100;
    cfg.seed = seed;
    const auto res = maximize_cgf(x, r, cfg);
    const double c = std::abs(res.directions.front().theta().dot(cov.pc1()));
    worst = std::min(worst, c);
    if (c >= 0.99) ++hits;
  }
  const double secs = seconds_since(t0);
  return {hits >= 18 && secs < 120.0, fmt("|cos| >= 0.99 in %d/20 seeds (min %.5f), %.1f s", hits, worst, secs)};
}

Outcome skew_small_r() {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.2, 0.0, 0.0, 0.5143;
  Vector alpha(2);
  alpha << 4.365, -1.455;
  const auto params = SkewNormalParams::make(Vector::Zero(2), sigma, alpha);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(params.cov_mat);
  const Vector pc1 = es.eigenvectors().col(1);
  const double r = 0.1 / std::sqrt(es.eigenvalues()[1]);
  int hits = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DataMatrix x = center(sample_skew_normal(params, 100000, seed)).data;
    MultistartConfig cfg;
    cfg.n_starts = 10;
    cfg.seed = seed;
    const auto res = maximize_cgf(x, r, cfg);
    const double c = std::abs(res.directions.front().theta().dot(pc1));
    worst = std::min(worst, c);
    if (c >= 0.98) ++hits;
  }
  return {hits == 10, fmt("r = %.4f, |cos| with PC1 of the skew-normal covariance >= 0.98 in %d/10 seeds (min %.5f)", r, hits, worst)};
}

// Independent oracle: scan a = r^2 lambda1 on a fine grid.
struct ScanResult {
  double r_upper = NAN;
  double r_argmin = NAN;
  double eps_min = NAN;
};

ScanResult grid_scan(double lambda1, double T, double eps) {
  ScanResult out;
  const double h = 1e-6;
  double best = INFINITY;
  double prev_a = h;
  double prev_v = 4.0 / T * std::expm1(prev_a) / (prev_a * prev_a);
  for (double a = 2 * h; a < 20.0; a += h) {
    const double v = 4.0 / T * std::expm1(a) / (a * a);
    if (v < best) {
      best = v;
      out.r_argmin = std::sqrt(a / lambda1);
    }
    if (prev_v <= eps * eps && v > eps * eps && a > 1.0) {
      const double root = prev_a + (eps * eps - prev_v) / (v - prev_v) * (a - prev_a);
      out.r_upper = std::sqrt(root / lambda1);
    }
    prev_a = a;
    prev_v = v;
  }
  out.eps_min = std::sqrt(best);
  return out;
}

Outcome radius() {
  const auto feasible = select_radius(1.0, 1000, 0.1);
  const auto infeasible = select_radius(1.0, 500, 0.1);
  const auto scaled = select_radius(4.0, 1000, 0.1);
  const ScanResult s1 = grid_scan(1.0, 1000, 0.1);
  const ScanResult s2 = grid_scan(1.0, 500, 0.1);
  const bool ok = feasible.feasible && std::abs(feasible.r_bar - 1.8432) <= 1e-3 && std::abs(feasible.r_bar - s1.r_upper) <= 1e-5 &&
                  !infeasible.feasible && std::abs(infeasible.r_bar - 1.2624) <= 1e-3 &&
                  std::abs(infeasible.r_bar - s2.r_argmin) <= 1e-5 && std::abs(infeasible.eps_achieved - s2.eps_min) <= 1e-8 &&
                  std::abs(scaled.r_bar - feasible.r_bar / 2.0) <= 1e-12;
  return {ok, fmt("r = %.6f (scan %.6f); T=500 infeasible, argmin r = %.6f (scan %.6f), min eps %.6f; lambda1=4 gives %.6f",
                  feasible.r_bar, s1.r_upper, infeasible.r_bar, s2.r_argmin, infeasible.eps_achieved, scaled.r_bar)};
}

Outcome monte_carlo_variance() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t T = 1000;
  const double r = 1.0;
  const auto one = UnitDirection::from_normalized(Vector::Ones(1));
  std::vector<double> g(2000);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const DataMatrix x = sample_normal(Eigen::MatrixXd::Identity(1, 1), T, 10000 + k);
    g[k] = cgf_estimate(x, r, one);
  }
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= static_cast<double>(g.size());
  double ss = 0.0;
  for (double v : g) ss += (v - mean) * (v - mean);
  const double rel_sd = std::sqrt(ss / static_cast<double>(g.size() - 1)) / mean;
  const double predicted = std::sqrt(relative_variance(r, 1.0, T));
  const double ratio = rel_sd / predicted;
  const double secs = seconds_since(t0);
  return {ratio >= 0.5 && ratio <= 2.0 && secs < 300.0,
          fmt("empirical relative sd %.5f vs predicted %.5f (ratio %.3f), %.1f s", rel_sd, predicted, ratio, secs)};
}

struct SweepStats {
  double mean_auc = 0.0;
  double mean_bcv = 0.0;
  std::vector<double> aucs;
  std::vector<double> beta_stars;
  double seconds = 0.0;
};

SweepStats sweep_family(const std::function<SimulationSpec(std::uint64_t)>& make_spec, int seeds, std::size_t starts,
                        DetectionMethod method = DetectionMethod::max_cgf) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepStats out;
  for (int s = 1; s <= seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    const LabeledDataset ds = inject_outliers(make_spec(seed));
    DetectorConfig cfg;
    cfg.method = method;
    cfg.multistart.n_starts = starts;
    cfg.multistart.seed = seed;
    const RocSweepResult res = roc_sweep(ds, default_beta_grid(), cfg);
    out.aucs.push_back(res.curve.auc);
    out.beta_stars.push_back(res.curve.beta_star);
    out.mean_auc += res.curve.auc / seeds;
    out.mean_bcv += res.curve.bcv / seeds;
  }
  out.seconds = seconds_since(t0);
  return out;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
  return s;
}

SimulationSpec std_normal_spec(std::uint64_t seed) {
  SimulationSpec spec;
  spec.seed = seed;
  return spec;
}

SimulationSpec normal_spec(std::uint64_t seed) {
  SimulationSpec spec;
  spec.family = Family::normal;
  spec.sigma_mat = synthetic_covariance(30, 20.0, seed);
  spec.seed = seed;
  return spec;
}

SimulationSpec skew_spec(std::uint64_t seed) {
  SimulationSpec spec = normal_spec(seed);
  spec.family = Family::skew_normal;
  spec.alpha = draw_alpha(30, -1.0, 4.0, seed);
  return spec;
}

SimulationSpec student_spec(std::uint64_t seed) {
  SimulationSpec spec = normal_spec(seed);
  spec.family = Family::student_t;
  spec.nu = 5.0;
  return spec;
}

Outcome std_normal_experiment() {
  const SweepStats s = sweep_family(std_normal_spec, 5, 200);
  return {s.mean_auc >= 0.93 && s.mean_bcv >= 0.85 && s.seconds < 600.0,
          fmt("mean AUC %.4f, mean BCV %.4f, beta* {%s}, %.1f s", s.mean_auc, s.mean_bcv, list(s.beta_stars).c_str(), s.seconds)};
}

Outcome normal_experiment() {
  const SweepStats s = sweep_family(normal_spec, 5, 1000);
  return {s.mean_auc >= 0.82, fmt("mean AUC %.4f (per seed %s), mean BCV %.4f, %.1f s", s.mean_auc, list(s.aucs).c_str(), s.mean_bcv, s.seconds)};
}

Outcome skew_experiment() {
  const SweepStats s = sweep_family(skew_spec, 5, 1000);
  return {s.mean_auc >= 0.85, fmt("mean AUC %.4f (per seed %s), mean BCV %.4f, %.1f s", s.mean_auc, list(s.aucs).c_str(), s.mean_bcv, s.seconds)};
}

Outcome student_vs_pca() {
  const SweepStats cgf = sweep_family(student_spec, 10, 1000);
  const SweepStats pca = sweep_family(student_spec, 10, 1000, DetectionMethod::pca_baseline);
  const double gap = cgf.mean_auc - pca.mean_auc;
  return {gap > 0.0, fmt("nu = 5: MaxCGF mean AUC %.4f, PCA mean AUC %.4f, gap %+.4f, %.1f s", cgf.mean_auc, pca.mean_auc, gap,
                         cgf.seconds + pca.seconds)};
}

Outcome roc_arithmetic() {
  const RocCurve hand = build_roc({{1.0, 0.1, 0.7}, {0.5, 0.3, 0.9}});
  const RocCurve perfect = build_roc({{1.0, 0.0, 1.0}});
  const RocCurve diagonal = build_roc({{1.0, 0.2, 0.2}, {2.0, 0.6, 0.6}});
  const bool ok = std::abs(hand.auc - 0.86) <= 1e-15 && std::abs(hand.bcv - 0.6) <= 1e-15 && perfect.auc == 1.0 &&
                  diagonal.auc == 0.5 && diagonal.bcv == 0.0;
  return {ok, fmt("hand curve AUC %.17g BCV %.17g; perfect %.17g; diagonal %.17g", hand.auc, hand.bcv, perfect.auc, diagonal.auc)};
}

Outcome hand_values() {
  int bad = 0;
  auto near = [&](double got, double want) {
    if (!(std::abs(got - want) <= 1e-12)) ++bad;
  };
  auto mm = median_and_mad(std::vector<double>{-1, 0, 1});
  near(mm.median, 0);
  near(mm.mad, 1);
  mm = median_and_mad(std::vector<double>{0, 1, 2, 3, 10});
  near(mm.median, 2);
  near(mm.mad, 1);
  mm = median_and_mad(std::vector<double>{5, 5, 5});
  near(mm.median, 5);
  near(mm.mad, 0);
  near(kurtosis(std::vector<double>{-1, -1, 1, 1}), 1.0);
  near(kurtosis(std::vector<double>{-1, 0, 1}), 1.5);
  auto k = first_four_cumulants(std::vector<double>{7, 7, 7});
  near(k.k1, 7);
  near(k.k2, 0);
  near(k.k3, 0);
  near(k.k4, 0);
  k = first_four_cumulants(std::vector<double>{-1, 1});
  near(k.k1, 0);
  near(k.k2, 1);
  near(k.k3, 0);
  near(k.k4, -2);
  k = first_four_cumulants(std::vector<double>{0, 1, 2});
  near(k.k1, 1);
  near(k.k2, 2.0 / 3.0);
  near(k.k3, 0);
  near(k.k4, -2.0 / 3.0);
  const Vector q1 = q_scores(std::vector<double>{-1, 0, 1});
  near(q1[0], 1);
  near(q1[1], 0);
  near(q1[2], 1);
  const Vector q2 = q_scores(std::vector<double>{0, 1, 2, 3, 10});
  const double want[] = {2, 1, 0, 1, 8};
  for (int i = 0; i < 5; ++i) near(q2[i], want[i]);
  const PriceTable p3 = parse_prices_csv(parse_csv("date,A\n2020-01-01,100\n2020-01-02,110\n2020-01-03,99\n"));
  const DataMatrix lin = compute_returns(p3, ReturnKind::linear);
  near(lin.values(0, 0), 0.10);
  near(lin.values(1, 0), -0.10);
  const DataMatrix lg = compute_returns(parse_prices_csv(parse_csv("date,A\n2020-01-01,100\n2020-01-02,110\n")), ReturnKind::log);
  near(lg.values(0, 0), std::log(1.1));
  const DataMatrix flat = compute_returns(parse_prices_csv(parse_csv("date,A\n2020-01-01,5\n2020-01-02,5\n2020-01-03,5\n")), ReturnKind::linear);
  near(flat.values.cwiseAbs().maxCoeff(), 0.0);
  return {bad == 0, fmt("median/MAD, kurtosis, cumulant, q-score and returns examples: %d mismatches", bad)};
}

// ---------------------------------------------------------------- CLI helpers

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("cgf_outliers_acceptance_" + std::to_string(::getpid()) + "_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  if (code != 0) std::fprintf(stderr, "  cli failed (%d): %s", code, err.str().c_str());
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Geometric random walk; after `crisis_row` the volatility is multiplied by `vol_mult`.
void write_price_fixture(const fs::path& path, std::uint64_t seed, std::size_t days, std::size_t crisis_row, double vol_mult,
                         std::string* crisis_date) {
  const std::size_t n = 8;
  const Eigen::MatrixXd sigma = 1e-4 * synthetic_covariance(n, 5.0, seed);
  const DataMatrix calm = sample_normal(sigma, days, seed * 2 + 1);
  std::ofstream f(path);
  f << "date";
  for (std::size_t j = 0; j < n; ++j) f << ",T" << j;
  f << "\n";
  Vector price = Vector::Constant(static_cast<Eigen::Index>(n), 100.0);
  int y = 2019, m = 1, d = 1;
  for (std::size_t t = 0; t < days; ++t) {
    char date[40];
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", y, m, d);
    if (t == crisis_row) *crisis_date = date;
    if (t > 0) {
      const double mult = t >= crisis_row ? vol_mult : 1.0;
      for (Eigen::Index j = 0; j < price.size(); ++j) price[j] *= std::exp(mult * calm.values(static_cast<Eigen::Index>(t), j));
    }
    f << date;
    for (Eigen::Index j = 0; j < price.size(); ++j) f << "," << format_double(price[j]);
    f << "\n";
    if (++d > 28) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
}

// Runs every invocation twice in the same directory (reports embed input paths)
// and compares the two output trees byte for byte.
Outcome determinism() {
  TempDir work("det_work");
  TempDir a("det_a");
  TempDir b("det_b");
  std::string crisis;
  write_price_fixture(work.path / "prices.csv", 3, 200, 170, 4.0, &crisis);

  bool ok = true;
  for (const TempDir* keep : {&a, &b}) {
    const std::string o = work.path.string();
    ok &= cli({"simulate", "--dist", "skewnormal", "--n", "12", "--t", "200", "--seed", "7", "--out", o + "/sim"}) == 0;
    ok &= cli({"simulate", "--dist", "student", "--nu", "4", "--n", "10", "--t", "150", "--seed", "8", "--out", o + "/simt"}) == 0;
    ok &= cli({"returns", "--prices", o + "/prices.csv", "--returns", "log", "--out", o + "/ret"}) == 0;
    ok &= cli({"detect", "--data", o + "/sim/data.csv", "--beta", "4", "--starts", "150", "--seed", "7", "--out", o + "/det"}) == 0;
    ok &= cli({"detect", "--data", o + "/ret/returns.csv", "--beta", "4", "--starts", "150", "--seed", "7", "--out", o + "/detr"}) == 0;
    ok &= cli({"evaluate", "--data", o + "/sim/data.csv", "--labels", o + "/sim/labels.csv", "--starts", "150", "--seed", "7",
               "--out", o + "/eval"}) == 0;
    ok &= cli({"evaluate", "--data", o + "/ret/returns.csv", "--crisis-date", crisis, "--method", "pca", "--out", o + "/evalr"}) == 0;
    ok &= cli({"sweep", "--dist", "normal", "--n", "10", "--t", "120", "--seeds", "1:3", "--starts", "60", "--beta-grid", "1:0.5:8",
               "--out", o + "/sweep"}) == 0;
    for (const auto& entry : fs::directory_iterator(work.path)) {
      if (entry.is_directory()) fs::rename(entry.path(), keep->path / entry.path().filename());
    }
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a.path);
    ++files;
    if (slurp(entry.path()) != slurp(b.path / rel)) {
      ++differing;
      std::fprintf(stderr, "  differs: %s\n", rel.string().c_str());
    }
  }
  return {ok && files >= 15 && differing == 0, fmt("%zu output files from 8 invocations run twice, %zu differ", files, differing)};
}

Outcome price_fixture_pipeline() {
  std::vector<double> aucs;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TempDir d("prices_" + std::to_string(seed));
    const std::string o = d.path.string();
    std::string crisis;
    write_price_fixture(d.path / "prices.csv", seed, 300, 270, 4.0, &crisis);
    ok &= cli({"returns", "--prices", o + "/prices.csv", "--out", o}) == 0;
    ok &= cli({"evaluate", "--data", o + "/returns.csv", "--crisis-date", crisis, "--seed", std::to_string(seed), "--out", o}) == 0;
    if (!ok) break;
    aucs.push_back(nlohmann::json::parse(slurp(d.path / "summary.json"))["auc"].get<double>());
  }
  double mean = 0.0;
  for (double v : aucs) mean += v / static_cast<double>(aucs.size());
  return {ok && mean >= 0.8, fmt("prices -> returns -> evaluate with a 4x volatility regime: mean AUC %.4f (per seed %s)", mean, list(aucs).c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "convexity", convexity},
      {2, "gradient oracle", gradient},
      {3, "normal-case PC1 equivalence", normal_pc1},
      {4, "skew-normal small-r collapse", skew_small_r},
      {5, "radius selection", radius},
      {6, "Monte-Carlo relative variance", monte_carlo_variance},
      {7, "standard-normal experiment", std_normal_experiment},
      {8, "correlated-normal experiment", normal_experiment},
      {9, "skew-normal experiment", skew_experiment},
      {10, "Student-t MaxCGF vs PCA", student_vs_pca},
      {11, "ROC arithmetic", roc_arithmetic},
      {12, "hand-value exactness", hand_values},
      {13, "determinism", determinism},
      {14, "price fixture pipeline", price_fixture_pipeline},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
