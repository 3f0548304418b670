#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mjsre/recurrence.hpp"
#include "mjsre/scenario.hpp"

namespace mjsre {

/// One replica's random stream: every job of the replica is addressed by
/// StreamKey{seed, replica, job_index}.
struct Stream {
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;

  StreamKey key(std::uint64_t job_index) const noexcept { return {seed, replica, job_index}; }
};

struct SpsOptions {
  std::int64_t ell0 = 10'000;
  std::int64_t ell_max = std::int64_t{1} << 24;
  /// Marks of a replica are cached up to this many jobs; longer windows
  /// regenerate marks chunk by chunk.
  std::int64_t mark_cache_limit = std::int64_t{1} << 20;

  void validate() const;
};

/// Sub-perfect sample of the stationary workload seen by job 0.
struct SpsResult {
  WorkloadVector workload;
  std::int64_t ell_final = 0;
  int doublings = 0;
  bool converged = false;
  std::uint64_t replica = 0;
  /// Jobs of the least likely class inside the final window.
  std::int64_t rare_class_count = 0;
};

/// Per-job records of a forward run, stored column-wise.
struct Trajectory {
  std::vector<std::int64_t> job_index;
  std::vector<int> alpha;
  std::vector<double> sigma;
  std::vector<double> tau;
  /// W_n^{alpha_n}: workload at the job's own demand level before its mark is applied.
  std::vector<double> waiting_time;
  /// Filled only when requested.
  std::vector<WorkloadVector> workload_after;

  std::size_t size() const noexcept { return waiting_time.size(); }
};

/// Workload at the arrival of job -n2, starting from `w_init` at the arrival
/// of job -n1 and applying the marks of jobs -n1 .. -(n2+1).
WorkloadVector run_window(const Scenario& scenario, const Stream& stream, std::int64_t n1, std::int64_t n2,
                          const WorkloadVector& w_init);

/// Backward sampling with doubling: evaluates M(l) for l = ell0, 2 ell0, ...
/// and stops at the first l with M(2l) == M(l). The result is a componentwise
/// lower bound of a perfect sample; `converged` is false when ell_max was hit.
SpsResult backward_sps(const Scenario& scenario, const Stream& stream, const SpsOptions& options = {});

/// Replicas 0..replicas-1 in parallel. The output does not depend on `workers`.
std::vector<SpsResult> batch_sps(const Scenario& scenario, std::uint64_t seed, std::int64_t replicas,
                                 const SpsOptions& options = {}, int workers = 1);

/// Iterates the recurrence forward over jobs 0..n_jobs-1 from `w0`.
Trajectory forward_run(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs, const WorkloadVector& w0,
                       bool record_workloads = false);

/// Runs `task(i)` for i in [0, count) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class Task>
void parallel_for(std::int64_t count, int workers, Task&& task);

/// Default worker count: MJSRE_WORKERS if set, else hardware concurrency.
int default_workers();

}  // namespace mjsre

#include "mjsre/detail/parallel.hpp"
