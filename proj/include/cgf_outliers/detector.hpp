#pragma once

#include "cgf_outliers/cgf.hpp"
#include "cgf_outliers/stats.hpp"
#include "cgf_outliers/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace cgf_outliers {

enum class DetectionMethod { max_cgf, pca_baseline };

std::string to_string(DetectionMethod m);
DetectionMethod parse_method(const std::string& name);  // "maxcgf" | "pca"

struct DetectorConfig {
  double beta = 3.25;
  double target_eps = 0.1;
  MultistartConfig multistart{};
  DetectionMethod method = DetectionMethod::max_cgf;
  // Fixed radius; <= 0 means "select from lambda1 and target_eps".
  double radius_override = 0.0;

  void validate() const;
};

// q_t = |z_t - median(z)| / MAD(z). Throws DegenerateInputError when MAD = 0
// and ArgumentError for fewer than 3 values.
Vector q_scores(std::span<const double> z);

struct DirectionTrace {
  UnitDirection initial;           // direction as found on the full centered data
  UnitDirection final_direction;   // after the last re-estimation
  double initial_cgf = 0.0;
  std::vector<double> kurtosis;    // Kur_0, Kur_1, ... as evaluated
  std::vector<std::size_t> removed_per_iteration;
  std::size_t removed = 0;
  bool skipped = false;
  std::string note;
};

struct DetectionReport {
  std::vector<bool> outlier_flags;    // indexed by original row
  std::vector<double> q_scores;       // last q evaluated for each row (NaN if never scored)
  std::vector<DirectionTrace> directions;
  RadiusSelection r_used;
  std::size_t iterations_total = 0;
  double beta = 0.0;
  std::vector<std::string> warnings;

  std::size_t flagged_count() const;
};

// Everything in a detect() run that does not depend on beta: the centered
// data, the radius and the initial direction list. A ROC sweep builds this
// once and reuses it for every threshold.
//
// The ascent runs on `working` = centered / scale with radius r_bar * scale,
// scale = sqrt(lambda1). G is unchanged by this substitution, and the fixed
// step then no longer depends on the units of the data, so a detect() run is
// invariant under global rescaling.
struct DetectionPlan {
  CenteredData centered;
  DataMatrix working;
  double scale = 1.0;
  RadiusSelection radius;
  std::vector<UnitDirection> directions;
  std::vector<double> direction_cgf;
  std::vector<std::string> warnings;
};

DetectionPlan prepare_detection(const DataMatrix& data, const DetectorConfig& config);
DetectionReport run_detection(const DetectionPlan& plan, const DetectorConfig& config);

// prepare_detection + run_detection.
DetectionReport detect(const DataMatrix& data, const DetectorConfig& config);

}  // namespace cgf_outliers
