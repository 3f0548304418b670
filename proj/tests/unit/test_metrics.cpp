#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mjsre/des.hpp"
#include "mjsre/errors.hpp"
#include "mjsre/metrics.hpp"

using namespace mjsre;

TEST_CASE("waiting and system time read the workload at the demand") {
  CHECK(waiting_time({WorkloadVector(3), 2, 1.0, 0.0, 0}) == 0.0);
  CHECK(waiting_time({WorkloadVector({1, 2, 4}), 2, 1.0, 0.0, 0}) == 2.0);
  CHECK(system_time({WorkloadVector(3), 3, 1.5, 0.0, 0}) == 1.5);
  CHECK(system_time({WorkloadVector({1, 2, 4}), 3, 1.0, 0.0, 0}) == 5.0);
}

TEST_CASE("idle and blocked server-time over one inter-arrival") {
  // s=2, W=(0,3), the job needs both servers for 1 s and the next job comes
  // after 5 s. Server 1 idles 3 s behind the blocked job and 1 s after it;
  // server 2 idles the last second.
  const std::vector<PalmSample> one{{WorkloadVector({0, 3}), 2, 1.0, 5.0, 0}};
  const WasteEstimate w = waste_estimators(one, 1.0);
  CHECK(w.waste == doctest::Approx(5.0));
  CHECK(w.hol_waste == doctest::Approx(3.0));
  CHECK(waste_estimators(one, 0.5).waste == doctest::Approx(2.5));

  // The blocking gap is charged in full even when the next job arrives
  // before it closes.
  const std::vector<PalmSample> early{{WorkloadVector({0, 3}), 2, 1.0, 1.0, 0}};
  CHECK(waste_estimators(early, 1.0).hol_waste == doctest::Approx(3.0));
  CHECK(waste_estimators(early, 1.0).waste == doctest::Approx(3.0));

  const std::vector<PalmSample> unit{{WorkloadVector({0, 3}), 1, 1.0, 5.0, 0}, {WorkloadVector({2, 3}), 1, 2.0, 1.0, 0}};
  CHECK(waste_estimators(unit, 1.0).hol_waste == 0.0);
  CHECK_THROWS_AS(waste_estimators({}, 1.0), PreconditionError);
}

TEST_CASE("summaries") {
  Scenario sc;
  sc.servers = 2;
  sc.classes = {{"small", 1, 0.5, Exponential{1.0}}, {"big", 2, 0.5, Exponential{1.0}}};
  sc.arrival.rate = 0.25;
  std::vector<PalmSample> samples(10, PalmSample{WorkloadVector({1, 1}), 1, 2.0, 1.0, 0});
  const MetricReport r = summarize(samples, sc);
  CHECK(r.overall.count == 10);
  CHECK(r.overall.waiting->mean == 1.0);
  CHECK(r.overall.waiting->variance == 0.0);
  CHECK(r.overall.waiting->ci_half_width == 0.0);
  CHECK(r.overall.system->mean == 3.0);
  CHECK(r.mean_jobs == doctest::Approx(0.75));
  REQUIRE(r.per_class.size() == 2);
  CHECK(r.per_class[1].count == 0);
  CHECK_FALSE(r.per_class[1].waiting.has_value());
  CHECK(r.per_class[0].label == "small");

  const std::string csv = to_tabular(r);
  CHECK(csv.rfind("class,demand,metric,value\n", 0) == 0);
  CHECK(csv.find("big,2,waiting_count,0\n") != std::string::npos);
  CHECK(csv.find("all,0,waiting_p0.99,1\n") != std::string::npos);

  const auto j = nlohmann::json::parse(to_structured(r));
  CHECK(j["per_class"][1]["waiting"].is_null());
  CHECK(j["overall"]["system"]["mean"] == 3.0);

  SummaryOptions bad;
  bad.percentiles = {1.5};
  CHECK_THROWS_AS(summarize(samples, sc, bad), ConfigError);
}

TEST_CASE("sampled metrics agree with event-simulation time averages") {
  Scenario sc;
  sc.servers = 4;
  sc.classes = {{"one", 1, 0.7, Exponential{1.0}}, {"four", 4, 0.3, Exponential{1.0}}};
  sc.arrival.rate = 0.9;
  const auto results = batch_sps(sc, 5, 40000, {32, 1 << 20, 1 << 20}, 1);
  const MetricReport r = summarize(palm_samples(sc, 5, results), sc);

  double idle = 0.0, hol = 0.0, jobs = 0.0, wait = 0.0;
  const int runs = 8;
  for (int k = 0; k < runs; ++k) {
    const DesResult d = des_run(sc, {77, static_cast<std::uint64_t>(k)}, 200000);
    idle += d.averages.idle_servers / runs;
    hol += d.averages.hol_idle_servers / runs;
    jobs += d.averages.jobs_in_system / runs;
    double s = 0.0;
    for (double w : d.trajectory.waiting_time) s += w;
    wait += s / static_cast<double>(d.trajectory.size()) / runs;
  }
  CHECK(r.overall.waiting->mean == doctest::Approx(wait).epsilon(0.05));
  CHECK(r.waste == doctest::Approx(idle).epsilon(0.03));
  CHECK(r.hol_waste == doctest::Approx(hol).epsilon(0.06));
  CHECK(r.mean_jobs == doctest::Approx(jobs).epsilon(0.05));
  // Work conservation: busy servers = lambda E[alpha sigma].
  CHECK(sc.servers - r.waste == doctest::Approx(0.9 * mean_work(sc)).epsilon(0.03));
}
