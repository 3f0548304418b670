#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mjsre {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mean and unbiased variance from compensated first and second sums.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++n_;
    sum_.add(x);
    sum_sq_.add(x * x);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return n_ ? sum_.value() / static_cast<double>(n_) : 0.0; }
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const noexcept;
  double std_error() const noexcept { return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

/// Two-pass mean/variance of a sample.
struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};
SampleMoments moments(std::span<const double> xs);

/// z such that P(|N(0,1)| <= z) = confidence.
double normal_quantile_two_sided(double confidence);

/// Nearest-rank percentile of an ascending sample: element ceil(p n) (1-based).
double nearest_rank(std::span<const double> sorted, double p);

}  // namespace mjsre
