#pragma once

#include <cstdint>

#include "mjsre/sampling.hpp"
#include "mjsre/scenario.hpp"

namespace mjsre {

/// Time averages over [0, horizon].
struct TimeAverages {
  double horizon = 0.0;
  double busy_servers = 0.0;
  double idle_servers = 0.0;
  /// Idle servers while the head of the waiting line is blocked.
  double hol_idle_servers = 0.0;
  double jobs_in_system = 0.0;
};

struct DesResult {
  Trajectory trajectory;
  /// Averaged up to the last arrival (saturated runs: up to the last start).
  TimeAverages averages;
  /// Busy-server integral over the whole run, including the final drain.
  double busy_integral = 0.0;
  double end_time = 0.0;
  std::int64_t events = 0;
  bool event_times_monotone = true;
};

/// Event-list simulation of the FCFS multiserver-job queue using the same
/// marks as forward_run. At each departure, waiting jobs are admitted in
/// arrival order until the first one that does not fit.
DesResult des_run(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs);

/// Same, with every inter-arrival time forced to 0: all jobs wait at t = 0.
DesResult des_run_saturated(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs);

/// max_n |wait_DES(n) - wait_SRE(n)| on identical streams from the empty state.
double coupling_check(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs);

}  // namespace mjsre
