#include "mjsre/des.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <vector>

#include "mjsre/errors.hpp"
#include "mjsre/stats.hpp"

namespace mjsre {

namespace {

struct Departure {
  double time;
  int demand;
  bool operator>(const Departure& o) const noexcept { return time > o.time; }
};

struct Waiting {
  std::int64_t id;
  int demand;
  double sigma;
  double arrival;
};

DesResult simulate(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs, bool saturated) {
  scenario.validate();
  if (n_jobs < 1) throw PreconditionError("n_jobs must be >= 1");

  DesResult result;
  Trajectory& traj = result.trajectory;
  const auto n = static_cast<std::size_t>(n_jobs);
  traj.job_index.resize(n);
  traj.alpha.resize(n);
  traj.sigma.resize(n);
  traj.tau.resize(n);
  traj.waiting_time.assign(n, 0.0);

  const int servers = scenario.servers;
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
  std::deque<Waiting> line;
  int free = servers;
  std::int64_t in_service = 0;

  double now = 0.0;
  double next_arrival = 0.0;
  std::int64_t next_job = 0;
  bool averaging = true;

  CompensatedSum busy_total;
  CompensatedSum busy_avg, idle_avg, hol_avg, jobs_avg;
  double horizon = 0.0;

  auto advance = [&](double t) {
    if (t < now) result.event_times_monotone = false;
    const double dt = t - now;
    if (dt > 0.0) {
      const double busy = servers - free;
      busy_total.add(busy * dt);
      const bool counted = saturated ? !line.empty() : averaging;
      if (counted) {
        busy_avg.add(busy * dt);
        idle_avg.add(free * dt);
        hol_avg.add((line.empty() ? 0.0 : static_cast<double>(free)) * dt);
        jobs_avg.add(static_cast<double>(in_service + static_cast<std::int64_t>(line.size())) * dt);
        horizon += dt;
      }
    }
    now = t;
  };

  auto admit = [&] {
    while (!line.empty() && line.front().demand <= free) {
      const Waiting& head = line.front();
      traj.waiting_time[static_cast<std::size_t>(head.id)] = now - head.arrival;
      departures.push({now + head.sigma, head.demand});
      free -= head.demand;
      ++in_service;
      line.pop_front();
    }
  };

  while (next_job < n_jobs || !departures.empty()) {
    ++result.events;
    // Departures first on ties.
    if (!departures.empty() && (next_job == n_jobs || departures.top().time <= next_arrival)) {
      const Departure d = departures.top();
      departures.pop();
      advance(d.time);
      free += d.demand;
      --in_service;
      admit();
      continue;
    }
    advance(next_arrival);
    const auto j = static_cast<std::size_t>(next_job);
    JobMark mark = sample_job(scenario, stream.key(static_cast<std::uint64_t>(next_job)));
    if (saturated) mark.tau = 0.0;
    traj.job_index[j] = next_job;
    traj.alpha[j] = mark.alpha;
    traj.sigma[j] = mark.sigma;
    traj.tau[j] = mark.tau;
    line.push_back({next_job, mark.alpha, mark.sigma, now});
    ++next_job;
    next_arrival = now + mark.tau;
    admit();
    if (next_job == n_jobs) averaging = false;
  }

  result.busy_integral = busy_total.value();
  result.end_time = now;
  TimeAverages& avg = result.averages;
  avg.horizon = horizon;
  if (horizon > 0.0) {
    avg.busy_servers = busy_avg.value() / horizon;
    avg.idle_servers = idle_avg.value() / horizon;
    avg.hol_idle_servers = hol_avg.value() / horizon;
    avg.jobs_in_system = jobs_avg.value() / horizon;
  }
  return result;
}

}  // namespace

DesResult des_run(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs) {
  return simulate(scenario, stream, n_jobs, false);
}

DesResult des_run_saturated(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs) {
  return simulate(scenario, stream, n_jobs, true);
}

double coupling_check(const Scenario& scenario, const Stream& stream, std::int64_t n_jobs) {
  const DesResult des = des_run(scenario, stream, n_jobs);
  const Trajectory sre = forward_run(scenario, stream, n_jobs, WorkloadVector(static_cast<std::size_t>(scenario.servers)));
  double worst = 0.0;
  for (std::size_t i = 0; i < sre.size(); ++i) {
    worst = std::max(worst, std::abs(des.trajectory.waiting_time[i] - sre.waiting_time[i]));
  }
  return worst;
}

}  // namespace mjsre
