#include <cmath>
#include <vector>

#include "doctest.h"
#include "mjsre/errors.hpp"
#include "mjsre/scenario.hpp"

using namespace mjsre;

namespace {

// k-th moment of the bounded Pareto by composite Simpson integration in
// log-space, independent of the closed form used by the library.
double pareto_moment_numeric(double l, double h, double a, int k) {
  const double norm = a * std::pow(l, a) / (1.0 - std::pow(l / h, a));
  const int n = 200000;  // even
  const double lo = std::log(l);
  const double step = (std::log(h) - lo) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = std::exp(lo + i * step);
    const double f = norm * std::pow(x, k - a - 1.0) * x;  // dx = x du
    acc += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * step / 3.0;
}

Scenario table1(std::vector<ServiceDistribution> services) {
  const std::vector<int> cores{1, 2, 5, 10, 15};
  const std::vector<double> probs{0.5, 0.1, 0.2, 0.19, 0.01};
  Scenario sc;
  sc.servers = 20;
  for (std::size_t i = 0; i < cores.size(); ++i) sc.classes.push_back({"", cores[i], probs[i], services[i]});
  return sc;
}

}  // namespace

TEST_CASE("distribution means and variances") {
  CHECK(dist_mean(HyperExp2{25.0, 0.25, 0.01}) == doctest::Approx(0.4975).epsilon(1e-12));
  CHECK(dist_mean(Exponential{0.83}) == 0.83);
  CHECK(dist_variance(Deterministic{3.0}) == 0.0);
  CHECK(dist_variance(ErlangK{3, 1.5}) == doctest::Approx(0.75));
  CHECK(dist_mean(BoundedPareto{0.15, 400.0, 1.4}) == doctest::Approx(0.50).epsilon(0.02));

  for (const BoundedPareto& bp : {BoundedPareto{0.15, 400, 1.4}, BoundedPareto{0.25, 400, 1.4},
                                  BoundedPareto{1.05, 400, 1.4}, BoundedPareto{1.0, 50, 2.0}}) {
    const double m1 = pareto_moment_numeric(bp.x_min, bp.x_max, bp.shape, 1);
    const double m2 = pareto_moment_numeric(bp.x_min, bp.x_max, bp.shape, 2);
    CHECK(dist_mean(bp) == doctest::Approx(m1).epsilon(1e-8));
    CHECK(dist_variance(bp) == doctest::Approx(m2 - m1 * m1).epsilon(1e-8));
  }
}

TEST_CASE("service-time table variances") {
  const std::vector<std::pair<double, double>> hyper{{25, 0.25}, {41.5, 0.42}, {62.5, 0.63}, {166.5, 1.68}, {500, 5.05}};
  const std::vector<double> hyper_var{12.38, 34.10, 77.35, 548.96, 4950.51};
  for (std::size_t i = 0; i < hyper.size(); ++i) {
    CHECK(dist_variance(HyperExp2{hyper[i].first, hyper[i].second, 0.01}) ==
          doctest::Approx(hyper_var[i]).epsilon(0.01));
  }
  const std::vector<double> bp_min{0.15, 0.25, 0.38, 1.05, 3.35};
  const std::vector<double> bp_mean{0.5, 0.83, 1.25, 3.33, 10.0};
  const std::vector<double> bp_var{5.62, 11.38, 20.078, 77.15, 335.56};
  for (std::size_t i = 0; i < bp_min.size(); ++i) {
    const BoundedPareto d{bp_min[i], 400.0, 1.4};
    CHECK(dist_mean(d) == doctest::Approx(bp_mean[i]).epsilon(0.02));
    CHECK(dist_variance(d) == doctest::Approx(bp_var[i]).epsilon(0.02));
  }
}

TEST_CASE("invalid distributions are rejected") {
  CHECK_THROWS_AS(validate(Exponential{0.0}), ConfigError);
  CHECK_THROWS_AS(validate(ErlangK{0, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate(HyperExp2{1, 1, 1.5}), ConfigError);
  CHECK_THROWS_AS(validate(BoundedPareto{2, 1, 1.4}), ConfigError);
}

TEST_CASE("sampled moments match every service law") {
  const std::vector<ServiceDistribution> laws{Deterministic{2.0}, Exponential{0.83}, ErlangK{3, 1.25},
                                              HyperExp2{41.5, 0.42, 0.01}, BoundedPareto{0.25, 400, 1.4}};
  for (std::size_t k = 0; k < laws.size(); ++k) {
    KeyedStream rng(StreamKey{5, k, 0}, Substream::service);
    const int n = 400000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = draw(laws[k], rng);
      REQUIRE(x >= 0.0);
      sum += x;
    }
    const double se = std::sqrt(dist_variance(laws[k]) / n);
    CHECK(std::abs(sum / n - dist_mean(laws[k])) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("job sampling") {
  Scenario det;
  det.servers = 1;
  det.classes = {{"", 1, 1.0, Deterministic{2.0}}};
  det.arrival = {1.0, InterArrivalFamily::deterministic, 1};
  for (std::uint64_t j = 0; j < 50; ++j) CHECK(sample_job(det, {3, 0, j}) == JobMark{1, 2.0, 1.0});

  const Scenario sc = table1({Exponential{0.5}, Exponential{0.83}, Exponential{1.25}, Exponential{3.33}, Exponential{10}});
  CHECK(sample_job(sc, {1, 2, 3}) == sample_job(sc, {1, 2, 3}));
  CHECK(sample_saturated(sc, {1, 2, 3}).mark.tau == 0.0);
  CHECK(sample_saturated(sc, {1, 2, 3}).mark.sigma == sample_job(sc, {1, 2, 3}).sigma);

  const int n = 1000000;
  std::vector<int> counts(5, 0);
  for (int j = 0; j < n; ++j) ++counts[static_cast<std::size_t>(sample_tagged(sc, {11, 0, static_cast<std::uint64_t>(j)}).job_class)];
  for (std::size_t c = 0; c < 5; ++c) {
    const double p = sc.classes[c].probability;
    CHECK(std::abs(counts[c] - n * p) <= 3.0 * std::sqrt(n * p * (1 - p)));
  }
}

TEST_CASE("ideal boundary") {
  const Scenario sc = table1({Exponential{0.5}, Exponential{0.83}, Exponential{1.25}, Exponential{3.33}, Exponential{10}});
  CHECK(lambda_ideal(sc) == doctest::Approx(2.11).epsilon(0.005));

  Scenario one;
  one.servers = 8;
  one.classes = {{"", 8, 1.0, Exponential{2.5}}};
  CHECK(lambda_ideal(one) == doctest::Approx(0.4));

  Scenario two;
  two.servers = 256;
  two.classes = {{"big", 256, 0.001, Exponential{40}}, {"small", 1, 0.999, Exponential{1}}};
  CHECK(lambda_ideal(two) == doctest::Approx(256.0 / (0.001 * 256 * 40 + 0.999)));
}

TEST_CASE("scenario validation") {
  Scenario sc;
  sc.servers = 4;
  sc.classes = {{"", 2, 0.5, Exponential{1}}, {"", 5, 0.5, Exponential{1}}};
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc.classes[1].demand = 4;
  sc.classes[1].probability = 0.4;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc.classes[1].probability = 0.5;
  CHECK_NOTHROW(sc.validate());
  CHECK(sc.with_rate(3.0).arrival.rate == 3.0);
}

TEST_CASE("inter-arrival laws") {
  for (InterArrivalFamily f : {InterArrivalFamily::exponential, InterArrivalFamily::deterministic, InterArrivalFamily::erlang}) {
    const ArrivalProcess a{2.0, f, 3};
    KeyedStream rng(StreamKey{1, 1, 1}, Substream::arrival);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += a.draw(rng);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  }
  KeyedStream rng(StreamKey{1, 1, 1}, Substream::arrival);
  CHECK(std::isinf(ArrivalProcess{0.0}.draw(rng)));
}
