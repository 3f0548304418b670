#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mjsre/random.hpp"
#include "mjsre/recurrence.hpp"

namespace mjsre {

// Service-time laws. All times in seconds.
struct Deterministic {
  double value = 1.0;
};
struct Exponential {
  double mean = 1.0;
};
struct ErlangK {
  int k = 1;
  double mean = 1.0;
};
/// Two-phase hyperexponential: the long phase is chosen with probability p_long.
struct HyperExp2 {
  double mean_long = 1.0;
  double mean_short = 1.0;
  double p_long = 0.5;
};
/// Pareto truncated to [x_min, x_max].
struct BoundedPareto {
  double x_min = 1.0;
  double x_max = 2.0;
  double shape = 1.5;
};

using ServiceDistribution = std::variant<Deterministic, Exponential, ErlangK, HyperExp2, BoundedPareto>;

/// Throws ConfigError naming the offending parameter.
void validate(const ServiceDistribution& d);
double dist_mean(const ServiceDistribution& d);
double dist_variance(const ServiceDistribution& d);
double draw(const ServiceDistribution& d, KeyedStream& rng);
std::string describe(const ServiceDistribution& d);

enum class InterArrivalFamily { exponential, deterministic, erlang };

/// Renewal arrival process with rate `rate` jobs/s. A zero rate means no
/// further arrivals (infinite inter-arrival times).
struct ArrivalProcess {
  double rate = 1.0;
  InterArrivalFamily family = InterArrivalFamily::exponential;
  int erlang_k = 1;

  double draw(KeyedStream& rng) const;
};

struct JobClass {
  std::string name;
  int demand = 1;
  double probability = 1.0;
  ServiceDistribution service = Exponential{};
};

struct Scenario {
  std::string name;
  int servers = 1;
  std::vector<JobClass> classes;
  ArrivalProcess arrival;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  /// Same scenario with a different arrival rate.
  Scenario with_rate(double rate) const;
};

/// A mark together with the class it was drawn from.
struct TaggedJob {
  JobMark mark;
  int job_class = 0;
};

/// Draws job `key.job_index`: class, service and inter-arrival come from three
/// separate substreams. Pure function of (scenario, key).
TaggedJob sample_tagged(const Scenario& scenario, const StreamKey& key);
JobMark sample_job(const Scenario& scenario, const StreamKey& key);

/// Class and service only; never touches the arrival substream.
TaggedJob sample_saturated(const Scenario& scenario, const StreamKey& key);

/// s / sum_c p_c alpha_c E[sigma_c]: the boundary without HOL blocking.
double lambda_ideal(const Scenario& scenario);

/// E[alpha sigma] over the class mix.
double mean_work(const Scenario& scenario);

}  // namespace mjsre
