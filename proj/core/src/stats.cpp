#include "mjsre/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>

#include "mjsre/errors.hpp"

namespace mjsre {

double RunningStats::variance() const noexcept {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double m = sum_.value() / n;
  const double v = (sum_sq_.value() - n * m * m) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

SampleMoments moments(std::span<const double> xs) {
  SampleMoments out;
  out.count = xs.size();
  if (xs.empty()) return out;
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  out.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    CompensatedSum sq;
    for (double x : xs) sq.add((x - out.mean) * (x - out.mean));
    out.variance = sq.value() / static_cast<double>(xs.size() - 1);
  }
  return out;
}

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must be in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw PreconditionError("percentile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("percentile must be in (0,1]");
  const double n = static_cast<double>(sorted.size());
  // p n = 9.000000000000002 for p = 0.9, n = 10 must give rank 9.
  const double r = p * n;
  const double nearest = std::round(r);
  auto rank = static_cast<std::size_t>(std::abs(r - nearest) <= 1e-9 * n ? nearest : std::ceil(r));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace mjsre
