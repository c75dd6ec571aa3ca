#pragma once

#include "cgf_outliers/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cgf_outliers {

/// Empirical CGF of centered data along xi = r * theta:
///   G(r, theta) = ln( (1/T) sum_t exp(r theta' X_t) ).
/// Evaluated with log-sum-exp. r = 0 returns 0.
double cgf_estimate(const DataMatrix& data, double r, const UnitDirection& theta);

/// Gradient of G with respect to theta: r times the exp(r theta' X_t)-weighted
/// mean of the rows.
Vector cgf_gradient(const DataMatrix& data, double r, const UnitDirection& theta);

/// Closed-form relative variance of the CGF estimate for Gaussian data,
///   eps^2 = (4/T) (exp(r^2 lambda1) - 1) / (r^4 lambda1^2).
/// It depends on r and lambda1 only through a = r^2 lambda1.
double relative_variance(double r, double lambda1, std::size_t T);

/// a* = r^2 lambda1 minimizing the error curve: root of e^a (a - 2) = -2.
double error_curve_argmin();

struct RadiusSelection {
  double r_bar = 0.0;
  double lambda1 = 0.0;
  double target_eps = 0.0;
  bool feasible = false;
  double eps_achieved = 0.0;
};

/// Picks the projection radius. The error curve eps(r) = sqrt(relative_variance)
/// is U-shaped; when its minimum is at or below target_eps the largest r with
/// eps(r) <= target_eps is returned (feasible). Otherwise the argmin radius is
/// returned with feasible = false.
RadiusSelection select_radius(double lambda1, std::size_t T, double target_eps);

/// `count` directions uniform on the unit sphere in R^n. Direction k is drawn
/// from its own RNG stream keyed on (seed, k), so any subset can be
/// regenerated independently.
std::vector<UnitDirection> sample_unit_sphere(std::size_t n, std::size_t count, std::uint64_t seed);

struct MultistartConfig {
  std::size_t n_starts = 1000;
  double tolerance = 1e-7;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
  double dedup_cos = 0.995;

  void validate() const;
};

/// One run of the projected-gradient scheme from a single start.
struct AscentResult {
  UnitDirection direction;
  double cgf_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Steps where G dropped by more than 1e-12 (relative); the fixed 1/r step
  // does not guarantee monotone ascent, so these are counted, not repaired.
  std::size_t ascent_violations = 0;
  std::vector<double> trace;  // G at every iterate, filled when requested
};

/// theta <- normalize(theta + (1/r) grad G) until ||theta_{i+1} - theta_i|| <= tolerance.
AscentResult ascend(const DataMatrix& data, double r, const UnitDirection& start, double tolerance,
                    std::size_t max_iters, bool keep_trace = false);

struct MaximizerResult {
  std::vector<UnitDirection> directions;  // distinct local maxima, CGF-descending
  std::vector<double> cgf_values;
  std::vector<std::size_t> iteration_counts;
  std::size_t starts_converged = 0;
  std::size_t starts_total = 0;
  std::size_t ascent_violations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<AscentResult> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<AscentResult>& partial() const { return partial_; }

 private:
  std::vector<AscentResult> partial_;
};

/// Multistart maximizer: runs `ascend` from config.n_starts random points on
/// the sphere (parallel map over starts), keeps converged runs, sorts them by
/// G descending and drops any whose |cosine| with an already-kept direction
/// exceeds dedup_cos. Throws ConvergenceError if no start converged.
MaximizerResult maximize_cgf(const DataMatrix& data, double r, const MultistartConfig& config);

}  // namespace cgf_outliers
