#include "mjsre/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mjsre/errors.hpp"

namespace mjsre {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// k-th raw moment of the bounded Pareto; k in {1, 2}.
double bounded_pareto_moment(const BoundedPareto& d, int k) {
  const double l = d.x_min;
  const double h = d.x_max;
  const double a = d.shape;
  const double norm = std::pow(l, a) / (1.0 - std::pow(l / h, a));
  if (a == static_cast<double>(k)) return norm * a * std::log(h / l);
  return norm * a / (k - a) * (std::pow(h, k - a) - std::pow(l, k - a));
}

constexpr int kMaxErlangPhases = 100000;

}  // namespace

void validate(const ServiceDistribution& d) {
  std::visit(Overloaded{
                 [](const Deterministic& x) { require(x.value > 0.0 && std::isfinite(x.value), "deterministic value must be positive"); },
                 [](const Exponential& x) { require(x.mean > 0.0 && std::isfinite(x.mean), "exponential mean must be positive"); },
                 [](const ErlangK& x) {
                   require(x.k >= 1 && x.k <= kMaxErlangPhases, "erlang k must be in 1..100000");
                   require(x.mean > 0.0 && std::isfinite(x.mean), "erlang mean must be positive");
                 },
                 [](const HyperExp2& x) {
                   require(x.mean_long > 0.0 && x.mean_short > 0.0, "hyperexponential phase means must be positive");
                   require(x.p_long > 0.0 && x.p_long < 1.0, "hyperexponential p_long must be in (0,1)");
                 },
                 [](const BoundedPareto& x) {
                   require(x.x_min > 0.0 && x.x_max > 0.0 && x.shape > 0.0, "bounded pareto parameters must be positive");
                   require(x.x_min < x.x_max, "bounded pareto needs x_min < x_max");
                 },
             },
             d);
}

double dist_mean(const ServiceDistribution& d) {
  validate(d);
  return std::visit(Overloaded{
                        [](const Deterministic& x) { return x.value; },
                        [](const Exponential& x) { return x.mean; },
                        [](const ErlangK& x) { return x.mean; },
                        [](const HyperExp2& x) { return x.p_long * x.mean_long + (1.0 - x.p_long) * x.mean_short; },
                        [](const BoundedPareto& x) { return bounded_pareto_moment(x, 1); },
                    },
                    d);
}

double dist_variance(const ServiceDistribution& d) {
  validate(d);
  return std::visit(Overloaded{
                        [](const Deterministic&) { return 0.0; },
                        [](const Exponential& x) { return x.mean * x.mean; },
                        [](const ErlangK& x) { return x.mean * x.mean / x.k; },
                        [](const HyperExp2& x) {
                          const double m = x.p_long * x.mean_long + (1.0 - x.p_long) * x.mean_short;
                          const double m2 = 2.0 * (x.p_long * x.mean_long * x.mean_long +
                                                   (1.0 - x.p_long) * x.mean_short * x.mean_short);
                          return m2 - m * m;
                        },
                        [](const BoundedPareto& x) {
                          const double m = bounded_pareto_moment(x, 1);
                          return bounded_pareto_moment(x, 2) - m * m;
                        },
                    },
                    d);
}

double draw(const ServiceDistribution& d, KeyedStream& rng) {
  return std::visit(Overloaded{
                        [](const Deterministic& x) { return x.value; },
                        [&rng](const Exponential& x) { return -x.mean * std::log(rng.uniform()); },
                        [&rng](const ErlangK& x) {
                          double acc = 0.0;
                          for (int i = 0; i < x.k; ++i) acc += std::log(rng.uniform());
                          return -(x.mean / x.k) * acc;
                        },
                        [&rng](const HyperExp2& x) {
                          const double mean = rng.uniform() < x.p_long ? x.mean_long : x.mean_short;
                          return -mean * std::log(rng.uniform());
                        },
                        [&rng](const BoundedPareto& x) {
                          const double tail = 1.0 - std::pow(x.x_min / x.x_max, x.shape);
                          return x.x_min * std::pow(1.0 - rng.uniform() * tail, -1.0 / x.shape);
                        },
                    },
                    d);
}

std::string describe(const ServiceDistribution& d) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Deterministic& x) { os << "deterministic(" << x.value << ")"; },
                 [&](const Exponential& x) { os << "exponential(" << x.mean << ")"; },
                 [&](const ErlangK& x) { os << "erlang(" << x.k << ", " << x.mean << ")"; },
                 [&](const HyperExp2& x) { os << "hyperexp2(" << x.mean_long << ", " << x.mean_short << ", " << x.p_long << ")"; },
                 [&](const BoundedPareto& x) { os << "bounded_pareto(" << x.x_min << ", " << x.x_max << ", " << x.shape << ")"; },
             },
             d);
  return os.str();
}

double ArrivalProcess::draw(KeyedStream& rng) const {
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  const double mean = 1.0 / rate;
  switch (family) {
    case InterArrivalFamily::deterministic:
      return mean;
    case InterArrivalFamily::erlang: {
      double acc = 0.0;
      for (int i = 0; i < erlang_k; ++i) acc += std::log(rng.uniform());
      return -(mean / erlang_k) * acc;
    }
    case InterArrivalFamily::exponential:
      break;
  }
  return -mean * std::log(rng.uniform());
}

void Scenario::validate() const {
  require(servers >= 1, "servers must be >= 1");
  require(!classes.empty(), "scenario needs at least one job class");
  double total = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const JobClass& jc = classes[c];
    const std::string where = "class " + std::to_string(c) + ": ";
    require(jc.demand >= 1 && jc.demand <= servers, where + "demand must be in 1..servers");
    require(jc.probability > 0.0 && jc.probability <= 1.0, where + "probability must be in (0,1]");
    try {
      mjsre::validate(jc.service);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    total += jc.probability;
  }
  require(std::abs(total - 1.0) <= 1e-12, "class probabilities must sum to 1");
  require(arrival.rate >= 0.0 && std::isfinite(arrival.rate), "arrival rate must be finite and >= 0");
  if (arrival.family == InterArrivalFamily::erlang) {
    require(arrival.erlang_k >= 1 && arrival.erlang_k <= kMaxErlangPhases, "arrival erlang_k must be in 1..100000");
  }
}

Scenario Scenario::with_rate(double rate) const {
  Scenario out = *this;
  out.arrival.rate = rate;
  return out;
}

namespace {

int pick_class(const Scenario& scenario, const StreamKey& key) {
  KeyedStream rng(key, Substream::job_class);
  const double u = rng.uniform();
  double cum = 0.0;
  const int last = static_cast<int>(scenario.classes.size()) - 1;
  for (int c = 0; c < last; ++c) {
    cum += scenario.classes[static_cast<std::size_t>(c)].probability;
    if (u < cum) return c;
  }
  return last;
}

}  // namespace

TaggedJob sample_saturated(const Scenario& scenario, const StreamKey& key) {
  const int c = pick_class(scenario, key);
  const JobClass& jc = scenario.classes[static_cast<std::size_t>(c)];
  KeyedStream service_rng(key, Substream::service);
  return {JobMark{jc.demand, draw(jc.service, service_rng), 0.0}, c};
}

TaggedJob sample_tagged(const Scenario& scenario, const StreamKey& key) {
  TaggedJob job = sample_saturated(scenario, key);
  KeyedStream arrival_rng(key, Substream::arrival);
  job.mark.tau = scenario.arrival.draw(arrival_rng);
  return job;
}

JobMark sample_job(const Scenario& scenario, const StreamKey& key) { return sample_tagged(scenario, key).mark; }

double mean_work(const Scenario& scenario) {
  double acc = 0.0;
  for (const JobClass& jc : scenario.classes) acc += jc.probability * jc.demand * dist_mean(jc.service);
  return acc;
}

double lambda_ideal(const Scenario& scenario) { return scenario.servers / mean_work(scenario); }

}  // namespace mjsre
