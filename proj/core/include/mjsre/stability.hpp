#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mjsre/sampling.hpp"
#include "mjsre/scenario.hpp"

namespace mjsre {

/// Growth rate gamma of the saturated pile and the boundary lambda_c = 1/gamma.
struct StabilityEstimate {
  double gamma = 0.0;
  double lambda_c = 0.0;
  std::int64_t ell_used = 0;
  double epsilon = 0.0;
  bool converged = false;
  /// (jobs, gamma estimate) at every milestone.
  std::vector<std::pair<std::int64_t, double>> history;
  /// Confidence half-width on gamma, when the estimator provides one.
  double half_width = std::numeric_limits<double>::quiet_NaN();
};

struct StabilityOptions {
  double epsilon = 0.0;  // <= 0 selects default_epsilon(scenario)
  std::int64_t ell0 = std::int64_t{1} << 16;
  std::int64_t ell_max = std::int64_t{1} << 32;
  std::int64_t renormalize_every = std::int64_t{1} << 16;  // 0 disables
  /// Also require the batch-means confidence half-width of gamma to be at
  /// most epsilon before declaring convergence.
  bool precision_guard = true;
  double confidence = 0.99;
  int batches = 32;  // minimum batch count for the half-width

  void validate() const;
};

/// Milestone bookkeeping shared by the pile growth-rate estimators. The
/// caller advances its pile to next_checkpoint() jobs and reports the pile
/// height there; record() returns true once the estimate is final.
class GrowthMonitor {
 public:
  GrowthMonitor(const StabilityOptions& options, double epsilon);

  std::int64_t next_checkpoint() const noexcept;
  bool record(std::int64_t jobs, double height);
  StabilityEstimate result() const;

 private:
  double half_width(std::int64_t jobs) const;

  StabilityOptions options_;
  StabilityEstimate est_;
  std::int64_t ell_;
  std::int64_t grid_;                 // jobs per stored height
  std::vector<double> grid_heights_;  // height after k * grid_ jobs, k = 0, 1, ...
  bool first_ = true;
  double previous_ = 0.0;
};

/// 1% of the ideal growth rate: 0.01 / lambda_ideal.
double default_epsilon(const Scenario& scenario);

/// Doubling milestones over the saturated pile driven by the stream's jobs
/// 1, 2, ...; stops when consecutive estimates differ by at most epsilon.
/// Inter-arrival draws are never consumed.
StabilityEstimate estimate_gamma(const Scenario& scenario, const Stream& stream, const StabilityOptions& options = {});

/// Regenerative estimator for scenarios with global (alpha = s) jobs:
/// gamma = p_g E[pile height over one cycle], averaged over `cycles` cycles.
/// The half-width is at `confidence`.
StabilityEstimate gamma_global_cycle(const Scenario& scenario, const Stream& stream, std::int64_t cycles,
                                     double confidence = 0.99);

/// Mean servers idle at saturation: s - E[alpha sigma] / gamma.
double saturated_waste(const Scenario& scenario, double gamma);

/// Fills lambda_c from gamma.
void finalize(StabilityEstimate& estimate);

}  // namespace mjsre
