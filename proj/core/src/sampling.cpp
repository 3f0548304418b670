#include "mjsre/sampling.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

#include "mjsre/errors.hpp"

namespace mjsre {

void SpsOptions::validate() const {
  if (ell0 < 1) throw ConfigError("ell0 must be >= 1");
  if (ell_max < ell0) throw ConfigError("ell_max must be >= ell0");
  if (mark_cache_limit < 0) throw ConfigError("mark_cache_limit must be >= 0");
}

namespace {

// Marks of jobs -1, -2, ... of one replica, cached up to a limit.
class BackwardMarks {
 public:
  BackwardMarks(const Scenario& scenario, const Stream& stream, std::int64_t cache_limit)
      : scenario_(scenario), stream_(stream), cache_limit_(cache_limit) {}

  const TaggedJob& at(std::int64_t n) {
    if (n <= static_cast<std::int64_t>(cache_.size())) return cache_[static_cast<std::size_t>(n - 1)];
    if (n <= cache_limit_) {
      cache_.reserve(static_cast<std::size_t>(n));
      for (auto j = static_cast<std::int64_t>(cache_.size()) + 1; j <= n; ++j) {
        cache_.push_back(sample_tagged(scenario_, stream_.key(static_cast<std::uint64_t>(j))));
      }
      return cache_.back();
    }
    scratch_ = sample_tagged(scenario_, stream_.key(static_cast<std::uint64_t>(n)));
    return scratch_;
  }

  // Jobs of class `c` among jobs -1..-ell.
  std::int64_t count_class(int c, std::int64_t ell) {
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= ell; ++n) count += at(n).job_class == c ? 1 : 0;
    return count;
  }

 private:
  const Scenario& scenario_;
  Stream stream_;
  std::int64_t cache_limit_;
  std::vector<TaggedJob> cache_;
  TaggedJob scratch_;
};

// Applies jobs -from .. -(to+1). Returns true if the state hit the empty
// system and `stop_when_empty` is set.
bool apply_range(WorkloadBuffer& buf, BackwardMarks& marks, std::int64_t from, std::int64_t to,
                 bool stop_when_empty) {
  for (std::int64_t n = from; n > to; --n) {
    buf.apply(marks.at(n).mark);
    if (stop_when_empty && buf.is_zero()) return true;
  }
  return false;
}

int rarest_class(const Scenario& scenario) {
  int best = 0;
  for (std::size_t c = 1; c < scenario.classes.size(); ++c) {
    if (scenario.classes[c].probability < scenario.classes[static_cast<std::size_t>(best)].probability) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

WorkloadVector run_window(const Scenario& scenario, const Stream& stream, std::int64_t n1, std::int64_t n2,
                          const WorkloadVector& w_init) {
  scenario.validate();
  if (n2 < 0 || n1 < n2) throw PreconditionError("run_window needs n1 >= n2 >= 0");
  if (w_init.size() != static_cast<std::size_t>(scenario.servers)) {
    throw PreconditionError("initial workload size differs from the server count");
  }
  WorkloadBuffer buf(w_init);
  for (std::int64_t n = n1; n > n2; --n) buf.apply(sample_job(scenario, stream.key(static_cast<std::uint64_t>(n))));
  return buf.snapshot();
}

SpsResult backward_sps(const Scenario& scenario, const Stream& stream, const SpsOptions& options) {
  scenario.validate();
  options.validate();
  BackwardMarks marks(scenario, stream, options.mark_cache_limit);
  WorkloadBuffer buf(static_cast<std::size_t>(scenario.servers));

  std::int64_t ell = options.ell0;
  apply_range(buf, marks, ell, 0, false);
  WorkloadVector previous = buf.snapshot();

  SpsResult result;
  result.replica = stream.replica;
  for (;;) {
    if (ell > options.ell_max / 2) {
      result.workload = std::move(previous);
      result.ell_final = ell;
      result.converged = false;
      break;
    }
    const std::int64_t longer = 2 * ell;
    // M(2l) = M_{l,0}(M_{2l,l}(0)). If the state empties on the way, the run
    // from -l (which is dominated by this one) is empty at the same job too,
    // so both end identical.
    buf.reset();
    apply_range(buf, marks, longer, ell, false);
    const bool coupled = buf.is_zero() || apply_range(buf, marks, ell, 0, true);
    ell = longer;
    ++result.doublings;
    if (coupled) {
      result.workload = std::move(previous);
      result.converged = true;
      break;
    }
    WorkloadVector current = buf.snapshot();
    if (current == previous) {
      result.workload = std::move(current);
      result.converged = true;
      break;
    }
    previous = std::move(current);
  }
  result.ell_final = ell;
  result.rare_class_count = marks.count_class(rarest_class(scenario), ell);
  return result;
}

std::vector<SpsResult> batch_sps(const Scenario& scenario, std::uint64_t seed, std::int64_t replicas,
                                 const SpsOptions& options, int workers) {
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  scenario.validate();
  options.validate();
  std::vector<SpsResult> results(static_cast<std::size_t>(replicas));
  parallel_for(replicas, workers, [&](std::int64_t i) {
    try {
      results[static_cast<std::size_t>(i)] = backward_sps(scenario, Stream{seed, static_cast<std::uint64_t>(i)}, options);
    } catch (const std::exception& e) {
      throw Error("replica " + std::to_string(i) + ": " + e.what());
    }
  });
  return results;
}

Trajectory forward_run(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs, const WorkloadVector& w0,
                       bool record_workloads) {
  scenario.validate();
  if (n_jobs < 1) throw PreconditionError("n_jobs must be >= 1");
  if (w0.size() != static_cast<std::size_t>(scenario.servers)) {
    throw PreconditionError("initial workload size differs from the server count");
  }
  Trajectory t;
  const auto n = static_cast<std::size_t>(n_jobs);
  t.job_index.reserve(n);
  t.alpha.reserve(n);
  t.sigma.reserve(n);
  t.tau.reserve(n);
  t.waiting_time.reserve(n);
  if (record_workloads) t.workload_after.reserve(n);

  WorkloadBuffer buf(w0);
  for (std::int64_t j = 0; j < n_jobs; ++j) {
    const JobMark mark = sample_job(scenario, stream.key(static_cast<std::uint64_t>(j)));
    t.job_index.push_back(j);
    t.alpha.push_back(mark.alpha);
    t.sigma.push_back(mark.sigma);
    t.tau.push_back(mark.tau);
    t.waiting_time.push_back(buf.at_demand(mark.alpha));
    buf.apply(mark);
    if (record_workloads) t.workload_after.push_back(buf.snapshot());
  }
  return t;
}

int default_workers() {
  if (const char* env = std::getenv("MJSRE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mjsre
