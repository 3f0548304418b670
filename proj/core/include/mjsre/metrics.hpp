#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mjsre/recurrence.hpp"
#include "mjsre/sampling.hpp"
#include "mjsre/scenario.hpp"

namespace mjsre {

/// A stationary workload together with an independent tagged job 0.
struct PalmSample {
  WorkloadVector workload;
  int alpha0 = 1;
  double sigma0 = 0.0;
  double tau0 = 0.0;
  int job_class = 0;
};

/// W^{alpha0}.
double waiting_time(const PalmSample& p);
/// W^{alpha0} + sigma0.
double system_time(const PalmSample& p);

struct WasteEstimate {
  double waste = 0.0;      // mean idle servers
  double hol_waste = 0.0;  // mean servers idle behind a blocked head-of-line job
};

/// Palm-inversion estimators of idle and HOL-idle servers at arrival rate
/// `lambda`. Each sample is charged the blocking gaps W^alpha0 - W^i that
/// job 0 creates on servers i < alpha0, plus the idle time in [0, tau0]
/// after each server's last reservation.
WasteEstimate waste_estimators(const std::vector<PalmSample>& samples, double lambda);

/// Pairs each replica's workload with the tagged job drawn from job index 0
/// of the same stream.
std::vector<PalmSample> palm_samples(const Scenario& scenario, std::uint64_t seed,
                                     const std::vector<SpsResult>& results);

struct Percentile {
  double level = 0.0;
  double value = 0.0;
};

struct Summary {
  double mean = 0.0;
  double variance = 0.0;
  double ci_half_width = 0.0;
  std::vector<Percentile> percentiles;
};

struct ClassMetrics {
  std::string label;  // class name, or "all"
  int job_class = -1; // -1 for the overall row
  int demand = 0;
  std::size_t count = 0;
  std::optional<Summary> waiting;  // absent when count == 0
  std::optional<Summary> system;
};

/// Density histogram of waiting times.
struct Histogram {
  double bin_width = 0.0;
  std::vector<double> density;  // bin i covers [i w, (i+1) w)
  std::size_t overflow = 0;     // samples beyond the last bin
  std::size_t zeros = 0;        // samples exactly 0 (the atom)
  double tail_p90 = 0.0;
  double tail_p99 = 0.0;
  double tail_p999 = 0.0;
};

struct MetricReport {
  double confidence = 0.99;
  double lambda = 0.0;
  ClassMetrics overall;
  std::vector<ClassMetrics> per_class;
  double waste = 0.0;
  double hol_waste = 0.0;
  double mean_jobs = 0.0;  // Little's law: lambda E[system time]
  Histogram waiting_histogram;
};

struct SummaryOptions {
  double confidence = 0.99;
  std::vector<double> percentiles{0.5, 0.9, 0.99};
  double histogram_bin_width = 0.0;  // <= 0: 100 bins up to the 99th percentile
  std::size_t histogram_bins = 100;
};

MetricReport summarize(const std::vector<PalmSample>& samples, const Scenario& scenario,
                       const SummaryOptions& options = {});

/// Structured text (JSON) with MetricReport field names.
std::string to_structured(const MetricReport& report);
/// Comma-separated rows: class,demand,metric,value.
std::string to_tabular(const MetricReport& report);

}  // namespace mjsre
