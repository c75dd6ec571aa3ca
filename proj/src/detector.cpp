#include "cgf_outliers/detector.hpp"

#include "cgf_outliers/errors.hpp"
#include "cgf_outliers/kernels.hpp"
#include "cgf_outliers/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cgf_outliers {

std::string to_string(DetectionMethod m) {
  return m == DetectionMethod::max_cgf ? "maxcgf" : "pca";
}

DetectionMethod parse_method(const std::string& name) {
  if (name == "maxcgf" || name == "max_cgf") return DetectionMethod::max_cgf;
  if (name == "pca" || name == "pca_baseline") return DetectionMethod::pca_baseline;
  throw ArgumentError("unknown detection method '" + name + "' (expected maxcgf or pca)");
}

void DetectorConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("detector: beta must be > 0");
  if (!(target_eps > 0.0 && target_eps < 1.0)) throw ArgumentError("detector: target_eps must be in (0,1)");
  if (!(radius_override >= 0.0) || !std::isfinite(radius_override)) {
    throw ArgumentError("detector: radius override must be finite and >= 0");
  }
  multistart.validate();
}

Vector q_scores(std::span<const double> z) {
  if (z.size() < 3) throw ArgumentError("q_scores needs at least 3 values");
  const MedianMad mm = median_and_mad(z);
  if (!(mm.mad > 0.0)) throw DegenerateInputError("projection has zero MAD");
  Vector q(static_cast<Eigen::Index>(z.size()));
  for (std::size_t t = 0; t < z.size(); ++t) {
    q[static_cast<Eigen::Index>(t)] = std::abs(z[t] - mm.median) / mm.mad;
  }
  return q;
}

std::size_t DetectionReport::flagged_count() const {
  return static_cast<std::size_t>(std::count(outlier_flags.begin(), outlier_flags.end(), true));
}

namespace {

constexpr std::size_t kMinRows = 3;

Matrix gather_rows(const Matrix& values, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

UnitDirection leading_component(const DataMatrix& data, const Vector& align_with) {
  Vector pc1 = covariance_pca(data).pc1();
  if (pc1.dot(align_with) < 0.0) pc1 = -pc1;
  return UnitDirection(pc1);
}

UnitDirection reestimate(const DataMatrix& cleaned, const UnitDirection& current, double r,
                         const DetectorConfig& config, std::vector<std::string>& warnings) {
  if (config.method == DetectionMethod::pca_baseline) {
    return leading_component(cleaned, current.theta());
  }
  // Warm start from the current direction: tracks the same local maximum
  // instead of re-running the whole multistart.
  AscentResult run = ascend(cleaned, r, current, config.multistart.tolerance, config.multistart.max_iters);
  if (!run.converged) {
    warnings.push_back("re-estimation did not converge within max_iters; using last iterate");
  }
  return run.direction;
}

}  // namespace

DetectionPlan prepare_detection(const DataMatrix& data, const DetectorConfig& config) {
  config.validate();
  data.validate(10);

  DetectionPlan plan;
  plan.centered = center(data);
  const CovarianceSummary cov = covariance_pca(plan.centered.data);
  const double lambda1 = cov.lambda1();
  if (!(lambda1 > 0.0)) throw DetectorError("data has zero variance in every direction");

  if (config.radius_override > 0.0) {
    plan.radius.r_bar = config.radius_override;
    plan.radius.lambda1 = lambda1;
    plan.radius.target_eps = config.target_eps;
    plan.radius.feasible = true;
    plan.radius.eps_achieved =
        std::sqrt(relative_variance(config.radius_override, lambda1, plan.centered.data.rows()));
  } else {
    plan.radius = select_radius(lambda1, plan.centered.data.rows(), config.target_eps);
    if (!plan.radius.feasible) {
      plan.warnings.push_back("target relative error not attainable for this T; using the error-curve argmin radius");
    }
  }

  plan.scale = std::sqrt(lambda1);
  plan.working = DataMatrix(Matrix(plan.centered.data.values / plan.scale));
  const double r_work = plan.radius.r_bar * plan.scale;

  if (config.method == DetectionMethod::pca_baseline) {
    plan.directions.push_back(UnitDirection(cov.pc1()));
    plan.direction_cgf.push_back(cgf_estimate(plan.working, r_work, plan.directions.back()));
    return plan;
  }

  try {
    MaximizerResult found = maximize_cgf(plan.working, r_work, config.multistart);
    plan.directions = std::move(found.directions);
    plan.direction_cgf = std::move(found.cgf_values);
    if (found.ascent_violations > 0) {
      plan.warnings.push_back(std::to_string(found.ascent_violations) +
                              " non-monotone ascent steps observed during the multistart");
    }
  } catch (const ConvergenceError& e) {
    throw DetectorError(e.what());
  }
  return plan;
}

DetectionReport run_detection(const DetectionPlan& plan, const DetectorConfig& config) {
  config.validate();
  const Matrix& y0 = plan.working.values;
  const std::size_t T = static_cast<std::size_t>(y0.rows());
  const double r = plan.radius.r_bar * plan.scale;

  DetectionReport report;
  report.outlier_flags.assign(T, false);
  report.q_scores.assign(T, std::numeric_limits<double>::quiet_NaN());
  report.r_used = plan.radius;
  report.beta = config.beta;
  report.warnings = plan.warnings;

  std::vector<std::size_t> alive(T);
  for (std::size_t t = 0; t < T; ++t) alive[t] = t;

  for (std::size_t j = 0; j < plan.directions.size(); ++j) {
    DirectionTrace trace;
    trace.initial = plan.directions[j];
    trace.final_direction = plan.directions[j];
    trace.initial_cgf = plan.direction_cgf.at(j);

    auto skip = [&](const std::string& why) {
      trace.skipped = true;
      trace.note = why;
      report.warnings.push_back("direction " + std::to_string(j) + " skipped: " + why);
    };

    if (alive.size() < kMinRows) {
      skip("fewer than 3 observations left");
      report.directions.push_back(std::move(trace));
      continue;
    }

    UnitDirection theta = plan.directions[j];
    DataMatrix y(gather_rows(y0, alive));
    Vector z = kernels::project(y.values, theta.theta());
    double kur_prev = 0.0;
    try {
      kur_prev = kurtosis(as_span(z));
    } catch (const DegenerateInputError&) {
      skip("projection has zero variance");
      report.directions.push_back(std::move(trace));
      continue;
    }
    trace.kurtosis.push_back(kur_prev);

    // Kur_i < Kur_{i-1} or i = 0
    for (;;) {
      Vector q;
      try {
        q = q_scores(as_span(z));
      } catch (const DegenerateInputError&) {
        if (trace.removed == 0) {
          skip("projection has zero MAD");
        } else {
          trace.note = "stopped: projection has zero MAD";
        }
        break;
      }
      ++report.iterations_total;

      std::vector<std::size_t> kept;
      kept.reserve(alive.size());
      std::size_t removed_now = 0;
      for (std::size_t t = 0; t < alive.size(); ++t) {
        const double qt = q[static_cast<Eigen::Index>(t)];
        report.q_scores[alive[t]] = qt;
        if (qt > config.beta) {
          report.outlier_flags[alive[t]] = true;
          ++removed_now;
        } else {
          kept.push_back(alive[t]);
        }
      }
      trace.removed_per_iteration.push_back(removed_now);
      trace.removed += removed_now;
      if (kept.empty()) throw DetectorError("every observation was removed as an outlier");

      // Nothing removed: the cleaned data equals the current data, the
      // re-estimated direction is the current one and the kurtosis cannot
      // decrease, so the loop would stop here anyway.
      if (removed_now == 0) break;

      alive = std::move(kept);
      if (alive.size() < kMinRows) {
        trace.note = "stopped: fewer than 3 observations left";
        break;
      }
      y = DataMatrix(gather_rows(y0, alive));
      theta = reestimate(y, theta, r, config, report.warnings);
      trace.final_direction = theta;
      z = kernels::project(y.values, theta.theta());

      double kur = 0.0;
      try {
        kur = kurtosis(as_span(z));
      } catch (const DegenerateInputError&) {
        trace.note = "stopped: projection has zero variance";
        break;
      }
      trace.kurtosis.push_back(kur);
      if (!(kur < kur_prev)) break;
      kur_prev = kur;
    }
    report.directions.push_back(std::move(trace));
  }
  return report;
}

DetectionReport detect(const DataMatrix& data, const DetectorConfig& config) {
  return run_detection(prepare_detection(data, config), config);
}

}  // namespace cgf_outliers
