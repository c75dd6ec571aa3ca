#pragma once

#include "cgf_outliers/detector.hpp"
#include "cgf_outliers/distributions.hpp"

#include <string>
#include <vector>

namespace cgf_outliers {

struct RocPoint {
  double beta = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
  double youden_j() const { return tpr - fpr; }
};

struct Rates {
  double tpr = 0.0;
  double fpr = 0.0;
};

// tpr = TP / P, fpr = FP / N. Truth must contain both classes.
Rates confusion_rates(const std::vector<bool>& flags, const std::vector<bool>& truth);

struct RocCurve {
  std::vector<RocPoint> points;  // empirical points, fpr ascending (ties by tpr)
  double auc = 0.0;
  double bcv = 0.0;
  double beta_star = 0.0;
};

// Sorts the points, integrates AUC by the trapezoid rule over the curve
// anchored at (0,0) and (1,1), and picks BCV = max(tpr - fpr) with beta* the
// smallest beta attaining it. Throws ArgumentError for an empty point list.
RocCurve build_roc(std::vector<RocPoint> points);

struct SweepRun {
  double beta = 0.0;
  bool ok = false;
  Rates rates;
  std::size_t flagged = 0;
  double seconds = 0.0;
  std::string error;
};

struct RocSweepResult {
  RocCurve curve;
  std::vector<SweepRun> runs;  // one per grid value, in grid order
  RadiusSelection radius;
  std::size_t directions = 0;
  double prepare_seconds = 0.0;
  std::vector<std::string> warnings;
};

// lo, lo+step, ..., hi (inclusive up to round-off).
std::vector<double> beta_grid(double lo, double step, double hi);
std::vector<double> default_beta_grid();  // 0.5 : 0.25 : 10

// Runs the detector once per beta on the same data with the same seed. The
// beta-independent part (centering, radius, multistart directions) is computed
// once and shared; the per-beta runs are a parallel map. A beta whose run
// throws is omitted from the curve and recorded in `runs`.
RocSweepResult roc_sweep(const LabeledDataset& dataset, const std::vector<double>& grid,
                         const DetectorConfig& base_config);

}  // namespace cgf_outliers
