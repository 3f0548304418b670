#include "mjsre/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "mjsre/errors.hpp"

namespace mjsre {

namespace {

void check_demand(int alpha, std::size_t servers) {
  if (alpha < 1 || static_cast<std::size_t>(alpha) > servers) {
    throw DemandError("demand " + std::to_string(alpha) + " outside 1.." + std::to_string(servers));
  }
}

}  // namespace

WorkloadVector::WorkloadVector(std::size_t servers) : values_(servers, 0.0) {}

WorkloadVector::WorkloadVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0)) throw PreconditionError("workload component " + std::to_string(i) + " is negative");
    if (i > 0 && values_[i] < values_[i - 1]) throw PreconditionError("workload vector is not sorted ascending");
  }
}

double WorkloadVector::at_demand(int alpha) const {
  check_demand(alpha, values_.size());
  return values_[static_cast<std::size_t>(alpha) - 1];
}

bool WorkloadVector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool dominated_by(const WorkloadVector& a, const WorkloadVector& b) {
  if (a.size() != b.size()) throw PreconditionError("workload vectors differ in size");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

void JobMark::validate(int servers) const {
  check_demand(alpha, static_cast<std::size_t>(servers));
  if (!(sigma >= 0.0)) throw PreconditionError("service time must be non-negative");
  if (!(tau >= 0.0)) throw PreconditionError("inter-arrival time must be non-negative");
}

std::vector<double> l_vector(int alpha, int servers) {
  if (servers < 1) throw PreconditionError("server count must be positive");
  check_demand(alpha, static_cast<std::size_t>(servers));
  std::vector<double> l(static_cast<std::size_t>(servers), 0.0);
  std::fill_n(l.begin(), alpha, 1.0);
  return l;
}

std::vector<double> sync_map(int alpha, const WorkloadVector& w) {
  const double level = w.at_demand(alpha);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::max(level, w[i]);
  return out;
}

WorkloadVector mjsre_step(const WorkloadVector& w, const JobMark& mark) {
  mark.validate(static_cast<int>(w.size()));
  std::vector<double> out = sync_map(mark.alpha, w);
  const std::vector<double> l = l_vector(mark.alpha, static_cast<int>(w.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double loaded = l[i] != 0.0 ? out[i] + mark.sigma : out[i];
    out[i] = positive_part(loaded - mark.tau);
  }
  std::stable_sort(out.begin(), out.end());
  return WorkloadVector(WorkloadVector::Trusted{}, std::move(out));
}

WorkloadVector kw_step(const WorkloadVector& w, double sigma, double tau) {
  return mjsre_step(w, JobMark{1, sigma, tau});
}

PileVector pile_step(const PileVector& h, int alpha, double sigma) {
  check_demand(alpha, h.size());
  if (!(sigma >= 0.0)) throw PreconditionError("service time must be non-negative");
  const double level = h.values[static_cast<std::size_t>(alpha) - 1];
  PileVector out{h.values, h.offset};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = std::max(level, out.values[i]);
    if (i < static_cast<std::size_t>(alpha)) out.values[i] = out.values[i] + sigma;
  }
  std::stable_sort(out.values.begin(), out.values.end());
  return out;
}

PileVector renormalize(const PileVector& h) {
  PileVector out = h;
  if (out.values.empty()) return out;
  const double shift = out.values.front();
  if (shift == 0.0) return out;
  for (double& v : out.values) v -= shift;
  out.offset += shift;
  return out;
}

WorkloadBuffer::WorkloadBuffer(std::size_t servers) : values_(servers, 0.0), zeros_(servers) {}

WorkloadBuffer::WorkloadBuffer(const WorkloadVector& init) : values_(init.size(), 0.0), zeros_(0) { assign(init); }

void WorkloadBuffer::reset() {
  std::fill(values_.begin(), values_.end(), 0.0);
  zeros_ = values_.size();
}

void WorkloadBuffer::assign(const WorkloadVector& w) {
  if (w.size() != values_.size()) throw PreconditionError("workload size mismatch");
  std::copy(w.values().begin(), w.values().end(), values_.begin());
  zeros_ = 0;
  while (zeros_ < values_.size() && values_[zeros_] == 0.0) ++zeros_;
}

void WorkloadBuffer::apply(const JobMark& mark) noexcept {
  const std::size_t s = values_.size();
  const std::size_t a = static_cast<std::size_t>(mark.alpha);
  double* w = values_.data();

  const double level = a <= zeros_ ? 0.0 : w[a - 1];
  const double v = level + mark.sigma;

  // Remove the first a components, then insert a copies of v. Components
  // below `lo` are zeros and stay in place.
  std::size_t lo;
  std::size_t first_live;
  if (a <= zeros_) {
    lo = zeros_;
    first_live = zeros_ - a;
  } else {
    lo = a;
    first_live = 0;
  }
  const std::size_t p = static_cast<std::size_t>(std::lower_bound(w + lo, w + s, v) - w);
  if (p > lo) std::memmove(w + lo - a, w + lo, (p - lo) * sizeof(double));
  std::fill(w + (p - a), w + p, v);

  const double tau = mark.tau;
  for (std::size_t i = first_live; i < s; ++i) w[i] = positive_part(w[i] - tau);
  zeros_ = first_live;
  while (zeros_ < s && w[zeros_] == 0.0) ++zeros_;
}

PileBuffer::PileBuffer(std::size_t servers) : values_(servers, 0.0) {
  if (servers == 0) throw PreconditionError("server count must be positive");
}

void PileBuffer::apply(int alpha, double sigma) noexcept {
  const std::size_t s = values_.size();
  const std::size_t a = static_cast<std::size_t>(alpha);
  double* h = values_.data();
  const double v = h[a - 1] + sigma;
  const std::size_t p = static_cast<std::size_t>(std::lower_bound(h + a, h + s, v) - h);
  if (p > a) std::memmove(h, h + a, (p - a) * sizeof(double));
  std::fill(h + (p - a), h + p, v);
}

void PileBuffer::renormalize() noexcept {
  const double shift = values_.front();
  if (shift == 0.0) return;
  for (double& v : values_) v -= shift;
  offset_ += shift;
}

}  // namespace mjsre
