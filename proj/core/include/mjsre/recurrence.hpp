#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mjsre {

/// Ordered vector of per-server remaining-busy times (seconds), as seen by an
/// arriving job. Components are non-negative and sorted ascending.
class WorkloadVector {
 public:
  WorkloadVector() = default;

  /// Empty system with `servers` idle servers.
  explicit WorkloadVector(std::size_t servers);

  /// Throws PreconditionError unless `values` is sorted and non-negative.
  explicit WorkloadVector(std::vector<double> values);

  struct Trusted {};
  /// Adopts `values` without validation; the caller guarantees the invariant.
  WorkloadVector(Trusted, std::vector<double> values) noexcept : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Workload of the `alpha`-th least loaded server (1-based), i.e. W^alpha.
  double at_demand(int alpha) const;

  double max() const noexcept { return values_.empty() ? 0.0 : values_.back(); }
  bool is_zero() const noexcept;

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>&& release() && noexcept { return std::move(values_); }

  friend bool operator==(const WorkloadVector&, const WorkloadVector&) = default;

 private:
  std::vector<double> values_;
};

/// Componentwise a <= b. Sizes must match.
bool dominated_by(const WorkloadVector& a, const WorkloadVector& b);

/// One job: server demand, service time and the inter-arrival time to the
/// following job.
struct JobMark {
  int alpha = 1;
  double sigma = 0.0;
  double tau = 0.0;

  /// Throws DemandError if alpha is outside 1..servers, PreconditionError on
  /// negative times.
  void validate(int servers) const;

  friend bool operator==(const JobMark&, const JobMark&) = default;
};

/// Saturated workload. The true pile is `values[i] + offset`; the offset
/// absorbs growth so that `values` stays small over long runs.
struct PileVector {
  std::vector<double> values;
  double offset = 0.0;

  static PileVector zero(std::size_t servers) { return {std::vector<double>(servers, 0.0), 0.0}; }

  std::size_t size() const noexcept { return values.size(); }
  /// Sup-norm of the true pile.
  double sup_norm() const noexcept { return (values.empty() ? 0.0 : values.back()) + offset; }
};

inline double positive_part(double x) noexcept { return x > 0.0 ? x : 0.0; }

/// Indicator of the first `alpha` positions among `servers`.
std::vector<double> l_vector(int alpha, int servers);

/// Synchronization map: component i becomes max(W^alpha, W^i).
std::vector<double> sync_map(int alpha, const WorkloadVector& w);

/// One step of the multiserver-job recurrence:
/// R(S(alpha, W) + sigma L(alpha) - tau U)^+.
WorkloadVector mjsre_step(const WorkloadVector& w, const JobMark& mark);

/// Kiefer-Wolfowitz step, the alpha = 1 case of mjsre_step.
WorkloadVector kw_step(const WorkloadVector& w, double sigma, double tau);

/// Saturated step R(S(alpha, H) + sigma L(alpha)); the offset is untouched.
PileVector pile_step(const PileVector& h, int alpha, double sigma);

/// Shifts values down by their minimum and moves that amount into the offset.
PileVector renormalize(const PileVector& h);

// In-place kernels used by the samplers. They perform exactly the same
// floating-point operations as mjsre_step / pile_step, so results are
// bit-identical, but they skip idle servers and avoid a full sort.

class WorkloadBuffer {
 public:
  explicit WorkloadBuffer(std::size_t servers);
  explicit WorkloadBuffer(const WorkloadVector& init);

  void reset();  // back to the empty system
  void assign(const WorkloadVector& w);

  /// Applies one recurrence step. `mark` must be valid for this size.
  void apply(const JobMark& mark) noexcept;

  /// W^alpha of the current state.
  double at_demand(int alpha) const noexcept { return values_[static_cast<std::size_t>(alpha) - 1]; }
  bool is_zero() const noexcept { return zeros_ == values_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  WorkloadVector snapshot() const { return WorkloadVector(WorkloadVector::Trusted{}, values_); }

 private:
  std::vector<double> values_;
  std::size_t zeros_;  // values_[0, zeros_) are exactly 0
};

class PileBuffer {
 public:
  explicit PileBuffer(std::size_t servers);

  void apply(int alpha, double sigma) noexcept;
  void renormalize() noexcept;

  double sup_norm() const noexcept { return values_.back() + offset_; }
  double offset() const noexcept { return offset_; }
  std::span<const double> values() const noexcept { return values_; }
  PileVector snapshot() const { return {values_, offset_}; }

 private:
  std::vector<double> values_;
  double offset_ = 0.0;
};

}  // namespace mjsre
