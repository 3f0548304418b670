#include "mjsre/generalizations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mjsre/errors.hpp"

namespace mjsre {

void SpecificDemand::validate(int servers) const {
  if (alpha < 0) throw DemandError("negative unspecified demand");
  if (alpha == 0 && subset.empty()) throw DemandError("empty demand");
  if (alpha + static_cast<int>(subset.size()) > servers) {
    throw DemandError("demand " + std::to_string(alpha) + " + " + std::to_string(subset.size()) + " exceeds " +
                      std::to_string(servers) + " servers");
  }
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 1 || subset[i] > servers) throw DemandError("specific server index out of range");
    if (i > 0 && subset[i] <= subset[i - 1]) throw DemandError("specific servers must be distinct and ascending");
  }
}

std::vector<int> draw_subset(int servers, int beta, KeyedStream& rng) {
  if (beta < 0 || beta > servers) throw DemandError("subset size out of range");
  // Floyd's algorithm.
  std::vector<char> taken(static_cast<std::size_t>(servers), 0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(beta));
  for (int j = servers - beta; j < servers; ++j) {
    auto t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (taken[static_cast<std::size_t>(t)]) t = j;
    taken[static_cast<std::size_t>(t)] = 1;
    out.push_back(t + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WorkloadVector smjsre_step(const WorkloadVector& w, const SpecificDemand& d, double sigma, double tau) {
  const int s = static_cast<int>(w.size());
  d.validate(s);
  if (!(sigma >= 0.0) || !(tau >= 0.0)) throw PreconditionError("times must be non-negative");

  std::vector<char> in_subset(static_cast<std::size_t>(s), 0);
  for (int i : d.subset) in_subset[static_cast<std::size_t>(i - 1)] = 1;

  // F marks S and the first alpha positions outside S; i* is the alpha-th
  // position outside S.
  std::vector<char> loaded(static_cast<std::size_t>(s), 0);
  double level = -std::numeric_limits<double>::infinity();
  int outside = 0;
  for (int i = 0; i < s; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (in_subset[u]) {
      loaded[u] = 1;
      level = std::max(level, w[u]);
    } else {
      ++outside;
      if (outside <= d.alpha) loaded[u] = 1;
      if (outside == d.alpha) level = std::max(level, w[u]);
    }
  }

  std::vector<double> out(static_cast<std::size_t>(s));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double value = loaded[i] ? level + sigma : w[i];
    out[i] = positive_part(value - tau);
  }
  std::stable_sort(out.begin(), out.end());
  return WorkloadVector(WorkloadVector::Trusted{}, std::move(out));
}

MultiWorkload MultiWorkload::zero(const std::vector<int>& servers) {
  MultiWorkload m;
  for (int s : servers) m.types.emplace_back(static_cast<std::size_t>(s));
  return m;
}

void MultiDemand::validate(const std::vector<int>& servers) const {
  if (alpha.size() != servers.size()) throw DemandError("demand vector length differs from the number of resource types");
  bool any = false;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    if (alpha[t] < 0 || alpha[t] > servers[t]) {
      throw DemandError("demand " + std::to_string(alpha[t]) + " for resource type " + std::to_string(t) +
                        " outside 0.." + std::to_string(servers[t]));
    }
    any = any || alpha[t] > 0;
  }
  if (!any) throw DemandError("multi-resource demand is empty");
}

bool dominated_by(const MultiWorkload& a, const MultiWorkload& b) {
  if (a.types.size() != b.types.size()) throw PreconditionError("resource type counts differ");
  for (std::size_t t = 0; t < a.types.size(); ++t) {
    if (!dominated_by(a.types[t], b.types[t])) return false;
  }
  return true;
}

MultiWorkload mmjsre_step(const MultiWorkload& w, const MultiDemand& d, double sigma, double tau) {
  std::vector<int> servers;
  for (const WorkloadVector& v : w.types) servers.push_back(static_cast<int>(v.size()));
  d.validate(servers);
  if (!(sigma >= 0.0) || !(tau >= 0.0)) throw PreconditionError("times must be non-negative");

  double level = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < w.types.size(); ++t) {
    if (d.alpha[t] > 0) level = std::max(level, w.types[t].at_demand(d.alpha[t]));
  }
  MultiWorkload out;
  out.types.reserve(w.types.size());
  for (std::size_t t = 0; t < w.types.size(); ++t) {
    const WorkloadVector& v = w.types[t];
    std::vector<double> next(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double value = static_cast<int>(i) < d.alpha[t] ? level + sigma : v[i];
      next[i] = positive_part(value - tau);
    }
    std::stable_sort(next.begin(), next.end());
    out.types.emplace_back(WorkloadVector::Trusted{}, std::move(next));
  }
  return out;
}

void SpecificScenario::validate() const {
  base.validate();
  if (specific_servers.size() != base.classes.size()) {
    throw ConfigError("specific_servers needs one entry per class");
  }
  for (std::size_t c = 0; c < base.classes.size(); ++c) {
    if (specific_servers[c] < 0 || base.classes[c].demand + specific_servers[c] > base.servers) {
      throw ConfigError("class " + std::to_string(c) + ": demand plus specific servers exceeds the server count");
    }
  }
}

namespace {

// The base scenario with scalar demands neutralized, for validating and
// sampling a multi-resource scenario.
Scenario neutral_base(const MultiScenario& m) {
  Scenario s = m.base;
  s.servers = 1;
  for (JobClass& c : s.classes) c.demand = 1;
  return s;
}

}  // namespace

void MultiScenario::validate() const {
  neutral_base(*this).validate();
  if (servers.empty()) throw ConfigError("multi-resource scenario needs at least one resource type");
  for (int s : servers) {
    if (s < 1) throw ConfigError("every resource type needs >= 1 unit");
  }
  if (demands.size() != base.classes.size()) throw ConfigError("demands needs one vector per class");
  for (std::size_t c = 0; c < demands.size(); ++c) {
    try {
      MultiDemand{demands[c]}.validate(servers);
    } catch (const DemandError& e) {
      throw ConfigError("class " + std::to_string(c) + ": " + e.what());
    }
  }
}

VariantTrajectory forward_run_specific(const SpecificScenario& scenario, const Stream& stream, std::int64_t n_jobs) {
  scenario.validate();
  if (n_jobs < 1) throw PreconditionError("n_jobs must be >= 1");
  VariantTrajectory out;
  WorkloadVector w(static_cast<std::size_t>(scenario.base.servers));
  for (std::int64_t j = 0; j < n_jobs; ++j) {
    const StreamKey key = stream.key(static_cast<std::uint64_t>(j));
    const TaggedJob job = sample_tagged(scenario.base, key);
    KeyedStream subset_rng(key, Substream::specific_subset);
    SpecificDemand d{job.mark.alpha,
                     draw_subset(scenario.base.servers, scenario.specific_servers[static_cast<std::size_t>(job.job_class)],
                                 subset_rng)};
    // Start time is the synchronization level of the step.
    double level = 0.0;
    int outside = 0;
    std::size_t next_specific = 0;
    for (int i = 1; i <= scenario.base.servers; ++i) {
      if (next_specific < d.subset.size() && d.subset[next_specific] == i) {
        level = std::max(level, w[static_cast<std::size_t>(i - 1)]);
        ++next_specific;
      } else if (++outside == d.alpha) {
        level = std::max(level, w[static_cast<std::size_t>(i - 1)]);
      }
    }
    out.job_class.push_back(job.job_class);
    out.waiting_time.push_back(level);
    w = smjsre_step(w, d, job.mark.sigma, job.mark.tau);
  }
  return out;
}

VariantTrajectory forward_run_multi(const MultiScenario& scenario, const Stream& stream, std::int64_t n_jobs) {
  scenario.validate();
  if (n_jobs < 1) throw PreconditionError("n_jobs must be >= 1");
  const Scenario sampler = neutral_base(scenario);
  VariantTrajectory out;
  MultiWorkload w = MultiWorkload::zero(scenario.servers);
  for (std::int64_t j = 0; j < n_jobs; ++j) {
    const TaggedJob job = sample_tagged(sampler, stream.key(static_cast<std::uint64_t>(j)));
    const MultiDemand d{scenario.demands[static_cast<std::size_t>(job.job_class)]};
    double level = 0.0;
    for (std::size_t t = 0; t < w.types.size(); ++t) {
      if (d.alpha[t] > 0) level = std::max(level, w.types[t].at_demand(d.alpha[t]));
    }
    out.job_class.push_back(job.job_class);
    out.waiting_time.push_back(level);
    w = mmjsre_step(w, d, job.mark.sigma, job.mark.tau);
  }
  return out;
}

double RaPile::sup_norm() const {
  return (values.empty() ? 0.0 : *std::max_element(values.begin(), values.end())) + offset;
}

namespace {

// In-place random-assignment step; `taken` is all zeros on entry and exit.
void ra_apply(std::vector<double>& h, int alpha, double sigma, const StreamKey& key, std::vector<char>& taken,
              std::vector<int>& chosen) {
  const int s = static_cast<int>(h.size());
  KeyedStream rng(key, Substream::ra_subset);
  chosen.clear();
  double top = -std::numeric_limits<double>::infinity();
  for (int j = s - alpha; j < s; ++j) {
    auto t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (taken[static_cast<std::size_t>(t)]) t = j;
    taken[static_cast<std::size_t>(t)] = 1;
    chosen.push_back(t);
    top = std::max(top, h[static_cast<std::size_t>(t)]);
  }
  const double v = top + sigma;
  for (int t : chosen) {
    h[static_cast<std::size_t>(t)] = v;
    taken[static_cast<std::size_t>(t)] = 0;
  }
}

}  // namespace

RaPile ra_pile_step(const RaPile& h, int alpha, double sigma, const StreamKey& key) {
  if (alpha < 1 || static_cast<std::size_t>(alpha) > h.values.size()) {
    throw DemandError("demand " + std::to_string(alpha) + " outside 1.." + std::to_string(h.values.size()));
  }
  if (!(sigma >= 0.0)) throw PreconditionError("service time must be non-negative");
  RaPile out = h;
  std::vector<char> taken(h.values.size(), 0);
  std::vector<int> chosen;
  ra_apply(out.values, alpha, sigma, key, taken, chosen);
  return out;
}

StabilityEstimate ra_gamma(const Scenario& scenario, const Stream& stream, const StabilityOptions& options) {
  scenario.validate();
  options.validate();
  GrowthMonitor monitor(options, options.epsilon > 0.0 ? options.epsilon : default_epsilon(scenario));

  const auto s = static_cast<std::size_t>(scenario.servers);
  RaPile pile = RaPile::zero(s);
  std::vector<char> taken(s, 0);
  std::vector<int> chosen;
  chosen.reserve(s);

  std::int64_t done = 0;
  std::int64_t since_renorm = 0;
  do {
    for (const std::int64_t stop = monitor.next_checkpoint(); done < stop; ++done) {
      const StreamKey key = stream.key(static_cast<std::uint64_t>(done + 1));
      const TaggedJob job = sample_saturated(scenario, key);
      ra_apply(pile.values, job.mark.alpha, job.mark.sigma, key, taken, chosen);
      if (options.renormalize_every > 0 && ++since_renorm == options.renormalize_every) {
        const double shift = *std::min_element(pile.values.begin(), pile.values.end());
        if (shift != 0.0) {
          for (double& v : pile.values) v -= shift;
          pile.offset += shift;
        }
        since_renorm = 0;
      }
    }
  } while (!monitor.record(done, pile.sup_norm()));
  return monitor.result();
}

}  // namespace mjsre
