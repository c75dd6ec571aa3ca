#include "cgf_outliers/evaluation.hpp"

#include "cgf_outliers/errors.hpp"
#include "cgf_outliers/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace cgf_outliers {

Rates confusion_rates(const std::vector<bool>& flags, const std::vector<bool>& truth) {
  if (flags.size() != truth.size()) throw ArgumentError("confusion_rates: length mismatch");
  std::size_t pos = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) {
      ++pos;
      if (flags[i]) ++tp;
    } else if (flags[i]) {
      ++fp;
    }
  }
  const std::size_t neg = truth.size() - pos;
  if (pos == 0 || neg == 0) throw ArgumentError("confusion_rates: truth must contain both outliers and inliers");
  return {static_cast<double>(tp) / static_cast<double>(pos), static_cast<double>(fp) / static_cast<double>(neg)};
}

RocCurve build_roc(std::vector<RocPoint> points) {
  if (points.empty()) throw ArgumentError("build_roc: no points");
  RocCurve curve;

  // BCV / beta* first, from the points alone; anchors are not thresholds.
  curve.bcv = points.front().youden_j();
  curve.beta_star = points.front().beta;
  for (const auto& p : points) {
    const double j = p.youden_j();
    if (j > curve.bcv || (j == curve.bcv && p.beta < curve.beta_star)) {
      curve.bcv = j;
      curve.beta_star = p.beta;
    }
  }

  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    if (a.tpr != b.tpr) return a.tpr < b.tpr;
    return a.beta < b.beta;
  });

  double auc = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  auto add = [&](double x1, double y1) {
    auc += (x1 - x0) * (y0 + y1) * 0.5;
    x0 = x1;
    y0 = y1;
  };
  for (const auto& p : points) add(p.fpr, p.tpr);
  add(1.0, 1.0);
  curve.auc = std::clamp(auc, 0.0, 1.0);
  curve.points = std::move(points);
  return curve;
}

std::vector<double> beta_grid(double lo, double step, double hi) {
  if (!(step > 0.0) || !(hi >= lo) || !(lo > 0.0)) throw ArgumentError("beta grid must satisfy 0 < lo <= hi and step > 0");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  return grid;
}

std::vector<double> default_beta_grid() { return beta_grid(0.5, 0.25, 10.0); }

RocSweepResult roc_sweep(const LabeledDataset& dataset, const std::vector<double>& grid,
                         const DetectorConfig& base_config) {
  if (grid.empty()) throw ArgumentError("roc_sweep: empty beta grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ArgumentError("roc_sweep: beta grid must be ascending");
  if (dataset.truth.size() != dataset.data.rows()) throw ArgumentError("roc_sweep: labels do not match data rows");

  using clock = std::chrono::steady_clock;
  RocSweepResult result;
  const auto t0 = clock::now();
  const DetectionPlan plan = prepare_detection(dataset.data, base_config);
  result.prepare_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  result.radius = plan.radius;
  result.directions = plan.directions.size();
  result.warnings = plan.warnings;

  result.runs.resize(grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  const bool fork = count > 1 && can_fork();
#pragma omp parallel for schedule(dynamic, 1) if (fork) num_threads(thread_cap())
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    SweepRun& run = result.runs[static_cast<std::size_t>(k)];
    run.beta = grid[static_cast<std::size_t>(k)];
    DetectorConfig cfg = base_config;
    cfg.beta = run.beta;
    const auto start = clock::now();
    try {
      const DetectionReport report = run_detection(plan, cfg);
      run.rates = confusion_rates(report.outlier_flags, dataset.truth);
      run.flagged = report.flagged_count();
      run.ok = true;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    run.seconds = std::chrono::duration<double>(clock::now() - start).count();
  }

  std::vector<RocPoint> points;
  for (const auto& run : result.runs) {
    if (run.ok) {
      points.push_back({run.beta, run.rates.fpr, run.rates.tpr});
    } else {
      result.warnings.push_back("beta " + std::to_string(run.beta) + " omitted: " + run.error);
    }
  }
  if (points.empty()) throw DetectorError("roc_sweep: every beta in the grid failed");
  result.curve = build_roc(std::move(points));
  return result;
}

}  // namespace cgf_outliers
