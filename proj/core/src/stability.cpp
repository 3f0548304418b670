#include "mjsre/stability.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "mjsre/errors.hpp"
#include "mjsre/stats.hpp"

namespace mjsre {

void StabilityOptions::validate() const {
  if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
  if (ell0 < 1) throw ConfigError("ell0 must be >= 1");
  if (ell_max < ell0) throw ConfigError("ell_max must be >= ell0");
  if (renormalize_every < 0) throw ConfigError("renormalize_every must be >= 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must be in (0,1)");
  if (batches < 2) throw ConfigError("batches must be >= 2");
}

double default_epsilon(const Scenario& scenario) { return 0.01 / lambda_ideal(scenario); }

void finalize(StabilityEstimate& estimate) { estimate.lambda_c = 1.0 / estimate.gamma; }

GrowthMonitor::GrowthMonitor(const StabilityOptions& options, double epsilon)
    : options_(options), ell_(options.ell0), grid_(std::max<std::int64_t>(1, options.ell0 / options.batches)) {
  est_.epsilon = epsilon;
  grid_heights_.push_back(0.0);
}

std::int64_t GrowthMonitor::next_checkpoint() const noexcept {
  const auto next_grid = static_cast<std::int64_t>(grid_heights_.size()) * grid_;
  return std::min(next_grid, ell_);
}

bool GrowthMonitor::record(std::int64_t jobs, double height) {
  if (jobs == static_cast<std::int64_t>(grid_heights_.size()) * grid_) {
    grid_heights_.push_back(height);
    // Keep between `batches` and 2 * `batches` increments by merging pairs.
    if (static_cast<std::int64_t>(grid_heights_.size()) > 2 * options_.batches + 1) {
      std::vector<double> merged;
      merged.reserve(grid_heights_.size() / 2 + 1);
      for (std::size_t k = 0; k < grid_heights_.size(); k += 2) merged.push_back(grid_heights_[k]);
      grid_heights_ = std::move(merged);
      grid_ *= 2;
    }
  }
  if (jobs != ell_) return false;

  const double current = height / static_cast<double>(ell_);
  est_.history.emplace_back(ell_, current);
  est_.gamma = current;
  est_.ell_used = ell_;
  est_.half_width = half_width(jobs);
  const bool settled = !first_ && std::abs(current - previous_) <= est_.epsilon;
  const bool precise = !options_.precision_guard || est_.half_width <= est_.epsilon;
  if (settled && precise) {
    est_.converged = true;
    return true;
  }
  first_ = false;
  previous_ = current;
  if (ell_ > options_.ell_max / 2) return true;
  ell_ *= 2;
  return false;
}

double GrowthMonitor::half_width(std::int64_t jobs) const {
  // Batch means over the completed grid increments up to `jobs`.
  const auto complete = std::min<std::int64_t>(static_cast<std::int64_t>(grid_heights_.size()) - 1, jobs / grid_);
  if (complete < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(complete));
  for (std::int64_t k = 1; k <= complete; ++k) {
    rates.push_back((grid_heights_[static_cast<std::size_t>(k)] - grid_heights_[static_cast<std::size_t>(k - 1)]) /
                    static_cast<double>(grid_));
  }
  const SampleMoments m = moments(rates);
  const boost::math::students_t t(static_cast<double>(complete - 1));
  const double q = boost::math::quantile(t, 0.5 + options_.confidence / 2.0);
  return q * std::sqrt(m.variance / static_cast<double>(complete));
}

StabilityEstimate GrowthMonitor::result() const {
  StabilityEstimate out = est_;
  finalize(out);
  return out;
}

StabilityEstimate estimate_gamma(const Scenario& scenario, const Stream& stream, const StabilityOptions& options) {
  scenario.validate();
  options.validate();
  GrowthMonitor monitor(options, options.epsilon > 0.0 ? options.epsilon : default_epsilon(scenario));

  PileBuffer pile(static_cast<std::size_t>(scenario.servers));
  std::int64_t done = 0;
  std::int64_t since_renorm = 0;
  do {
    for (const std::int64_t stop = monitor.next_checkpoint(); done < stop; ++done) {
      const TaggedJob job = sample_saturated(scenario, stream.key(static_cast<std::uint64_t>(done + 1)));
      pile.apply(job.mark.alpha, job.mark.sigma);
      if (options.renormalize_every > 0 && ++since_renorm == options.renormalize_every) {
        pile.renormalize();
        since_renorm = 0;
      }
    }
  } while (!monitor.record(done, pile.sup_norm()));
  return monitor.result();
}

StabilityEstimate gamma_global_cycle(const Scenario& scenario, const Stream& stream, std::int64_t cycles,
                                     double confidence) {
  scenario.validate();
  if (cycles < 2) throw PreconditionError("gamma_global_cycle needs at least 2 cycles");
  double p_global = 0.0;
  for (const JobClass& jc : scenario.classes) {
    if (jc.demand == scenario.servers) p_global += jc.probability;
  }
  if (p_global <= 0.0) throw PreconditionError("scenario has no global (alpha = s) class");

  const auto s = static_cast<std::size_t>(scenario.servers);
  std::uint64_t index = 1;
  auto next_job = [&] { return sample_saturated(scenario, stream.key(index++)).mark; };

  // Skip to the first global job; it opens the first cycle.
  JobMark job = next_job();
  while (job.alpha != scenario.servers) job = next_job();

  RunningStats heights;
  StabilityEstimate est;
  est.epsilon = 0.0;
  std::int64_t milestone = 1024;
  for (std::int64_t c = 0; c < cycles; ++c) {
    PileBuffer pile(s);
    pile.apply(job.alpha, job.sigma);
    job = next_job();
    while (job.alpha != scenario.servers) {
      pile.apply(job.alpha, job.sigma);
      job = next_job();
    }
    heights.add(pile.sup_norm());
    if (static_cast<std::int64_t>(heights.count()) == milestone || c + 1 == cycles) {
      est.history.emplace_back(static_cast<std::int64_t>(heights.count()), p_global * heights.mean());
      milestone *= 2;
    }
  }
  est.gamma = p_global * heights.mean();
  est.half_width = p_global * normal_quantile_two_sided(confidence) * heights.std_error();
  est.ell_used = static_cast<std::int64_t>(index - 1);
  est.converged = true;
  finalize(est);
  return est;
}

double saturated_waste(const Scenario& scenario, double gamma) {
  if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
  return scenario.servers - mean_work(scenario) / gamma;
}

}  // namespace mjsre
