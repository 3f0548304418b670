#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "mjsre/errors.hpp"
#include "mjsre/recurrence.hpp"

using namespace mjsre;

namespace {

WorkloadVector wv(std::vector<double> v) { return WorkloadVector(std::move(v)); }

// Straightforward transcription of the recurrence used as an oracle: raise the
// alpha least loaded servers to W^alpha, add sigma to them, age every server
// by tau, clamp at zero and sort.
std::vector<double> oracle_step(std::vector<double> w, int alpha, double sigma, double tau) {
  const double level = w[static_cast<std::size_t>(alpha - 1)];
  for (int i = 0; i < alpha; ++i) w[static_cast<std::size_t>(i)] = level + sigma;
  for (double& x : w) x = std::max(x - tau, 0.0);
  std::sort(w.begin(), w.end());
  return w;
}

// Random ordered vector with a good share of exact zeros and ties.
std::vector<double> random_workload(std::mt19937_64& g, std::size_t s) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::bernoulli_distribution zero(0.3);
  std::bernoulli_distribution round(0.2);
  std::vector<double> w(s);
  for (double& x : w) {
    x = zero(g) ? 0.0 : u(g);
    if (round(g)) x = std::floor(x);
  }
  std::sort(w.begin(), w.end());
  return w;
}

JobMark random_mark(std::mt19937_64& g, int s) {
  std::uniform_int_distribution<int> a(1, s);
  std::exponential_distribution<double> e(0.7);
  std::bernoulli_distribution zero_tau(0.2);
  return {a(g), e(g), zero_tau(g) ? 0.0 : e(g)};
}

}  // namespace

TEST_CASE("workload vector invariants") {
  CHECK_THROWS_AS(wv({2.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(wv({-1.0, 1.0}), PreconditionError);
  const WorkloadVector w = wv({1, 2, 4});
  CHECK(w.at_demand(1) == 1);
  CHECK(w.at_demand(3) == 4);
  CHECK_THROWS_AS(w.at_demand(0), DemandError);
  CHECK_THROWS_AS(w.at_demand(4), DemandError);
  CHECK(WorkloadVector(3).is_zero());
  CHECK(dominated_by(wv({0, 1, 2}), wv({0, 1, 3})));
  CHECK_FALSE(dominated_by(wv({0, 2, 2}), wv({1, 1, 3})));
}

TEST_CASE("indicator and synchronization map") {
  CHECK(l_vector(1, 3) == std::vector<double>{1, 0, 0});
  CHECK(l_vector(3, 3) == std::vector<double>{1, 1, 1});
  CHECK(l_vector(2, 4) == std::vector<double>{1, 1, 0, 0});
  CHECK_THROWS_AS(l_vector(0, 3), DemandError);
  CHECK_THROWS_AS(l_vector(4, 3), DemandError);

  CHECK(sync_map(2, wv({1, 2, 4})) == std::vector<double>{2, 2, 4});
  CHECK(sync_map(1, wv({1, 2, 4})) == std::vector<double>{1, 2, 4});
  CHECK(sync_map(3, wv({1, 2, 4})) == std::vector<double>{4, 4, 4});
}

TEST_CASE("recurrence step hand traces") {
  CHECK(mjsre_step(WorkloadVector(2), {2, 1.0, 0.0}) == wv({1, 1}));
  CHECK(mjsre_step(wv({1, 2, 4}), {2, 3.0, 1.0}) == wv({3, 4, 4}));
  CHECK(mjsre_step(wv({3}), {1, 2.0, 4.0}) == wv({1}));
  CHECK(kw_step(wv({0, 5}), 2.0, 1.0) == wv({1, 4}));
  CHECK(kw_step(WorkloadVector(4), 0.0, 0.0) == WorkloadVector(4));
  CHECK_THROWS_AS(mjsre_step(wv({0, 0}), {3, 1.0, 0.0}), DemandError);
  CHECK_THROWS_AS(mjsre_step(wv({0, 0}), {1, -1.0, 0.0}), PreconditionError);
}

TEST_CASE("three-job trace matching the event simulation") {
  // s=2: job1 (2 servers, 5 s) at t=0, job2 (1, 1 s) at t=1, job3 (1, 1 s) at t=2.
  WorkloadVector w(2);
  std::vector<double> waits;
  const std::vector<JobMark> marks{{2, 5.0, 1.0}, {1, 1.0, 1.0}, {1, 1.0, 0.0}};
  for (const JobMark& m : marks) {
    waits.push_back(w.at_demand(m.alpha));
    w = mjsre_step(w, m);
  }
  CHECK(waits == std::vector<double>{0, 4, 3});
}

TEST_CASE("pile step and renormalization") {
  CHECK(pile_step(PileVector::zero(3), 3, 2.0).values == std::vector<double>{2, 2, 2});
  CHECK(pile_step({{1, 3}, 0.0}, 1, 5.0).values == std::vector<double>{3, 6});
  const PileVector single = pile_step({{7}, 2.0}, 1, 1.5);
  CHECK(single.values == std::vector<double>{8.5});
  CHECK(single.sup_norm() == 10.5);

  const PileVector r = renormalize({{5, 9}, 0.0});
  CHECK(r.values == std::vector<double>{0, 4});
  CHECK(r.offset == 5.0);
  const PileVector again = renormalize(r);
  CHECK(again.values == r.values);
  CHECK(again.offset == r.offset);
}

TEST_CASE("kernels are bit-identical to the reference step") {
  std::mt19937_64 g(12345);
  for (int trial = 0; trial < 20000; ++trial) {
    const int s = 1 + static_cast<int>(g() % 12);
    const std::vector<double> w0 = random_workload(g, static_cast<std::size_t>(s));
    WorkloadBuffer buffer{WorkloadVector(w0)};
    WorkloadVector ref(w0);
    std::vector<double> oracle = w0;
    for (int k = 0; k < 5; ++k) {
      const JobMark m = random_mark(g, s);
      buffer.apply(m);
      ref = mjsre_step(ref, m);
      oracle = oracle_step(oracle, m.alpha, m.sigma, m.tau);
      REQUIRE(buffer.snapshot() == ref);
      REQUIRE(ref.values().size() == oracle.size());
      REQUIRE(std::equal(oracle.begin(), oracle.end(), ref.values().begin()));
    }
  }
}

TEST_CASE("pile kernel matches the reference pile step") {
  std::mt19937_64 g(777);
  for (int trial = 0; trial < 5000; ++trial) {
    const int s = 1 + static_cast<int>(g() % 10);
    PileBuffer buffer(static_cast<std::size_t>(s));
    PileVector ref = PileVector::zero(static_cast<std::size_t>(s));
    for (int k = 0; k < 8; ++k) {
      const JobMark m = random_mark(g, s);
      buffer.apply(m.alpha, m.sigma);
      ref = pile_step(ref, m.alpha, m.sigma);
      REQUIRE(buffer.snapshot().values == ref.values);
    }
    buffer.renormalize();
    ref = renormalize(ref);
    REQUIRE(buffer.snapshot().values == ref.values);
    REQUIRE(buffer.offset() == ref.offset);
  }
}

TEST_CASE("step output is ordered, non-negative, and alpha=1 equals the two-parameter step") {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 10000; ++trial) {
    const int s = 1 + static_cast<int>(g() % 16);
    const WorkloadVector w(random_workload(g, static_cast<std::size_t>(s)));
    const JobMark m = random_mark(g, s);
    const WorkloadVector out = mjsre_step(w, m);
    REQUIRE(std::is_sorted(out.values().begin(), out.values().end()));
    REQUIRE(std::all_of(out.values().begin(), out.values().end(), [](double x) { return x >= 0.0; }));
    REQUIRE(kw_step(w, m.sigma, m.tau) == mjsre_step(w, {1, m.sigma, m.tau}));
  }
}

TEST_CASE("step is monotone in the workload") {
  std::mt19937_64 g(2024);
  std::exponential_distribution<double> bump(1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int s = 1 + static_cast<int>(g() % 16);
    std::vector<double> lo = random_workload(g, static_cast<std::size_t>(s));
    std::vector<double> hi = lo;
    for (double& x : hi) x += (g() % 2) ? bump(g) : 0.0;
    std::sort(hi.begin(), hi.end());
    // Sorting a componentwise-larger vector keeps it componentwise larger.
    const JobMark m = random_mark(g, s);
    REQUIRE(dominated_by(mjsre_step(WorkloadVector(lo), m), mjsre_step(WorkloadVector(hi), m)));
  }
}
