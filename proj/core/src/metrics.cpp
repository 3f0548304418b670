#include "mjsre/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "mjsre/errors.hpp"
#include "mjsre/stats.hpp"

namespace mjsre {

double waiting_time(const PalmSample& p) { return p.workload.at_demand(p.alpha0); }

double system_time(const PalmSample& p) { return waiting_time(p) + p.sigma0; }

WasteEstimate waste_estimators(const std::vector<PalmSample>& samples, double lambda) {
  if (samples.empty()) throw PreconditionError("waste estimators need at least one sample");
  CompensatedSum idle;
  CompensatedSum hol;
  for (const PalmSample& p : samples) {
    // Every idle server-second is charged to exactly one arrival: the gap
    // [W^i, W^alpha0] that job 0 reserves on servers i < alpha0 (charged in
    // full, even past tau0), and the time in [0, tau0] after a server's last
    // reservation ends.
    const double tau = p.tau0;
    const auto a = static_cast<std::size_t>(p.alpha0);
    const double start = p.workload.at_demand(p.alpha0);
    const double finish = start + p.sigma0;
    double sample_hol = 0.0;
    double sample_tail = 0.0;
    for (std::size_t i = 0; i < a; ++i) {
      sample_hol += start - p.workload[i];
      sample_tail += positive_part(tau - finish);
    }
    for (std::size_t i = a; i < p.workload.size(); ++i) sample_tail += positive_part(tau - p.workload[i]);
    idle.add(sample_hol + sample_tail);
    hol.add(sample_hol);
  }
  const double n = static_cast<double>(samples.size());
  return {lambda * idle.value() / n, lambda * hol.value() / n};
}

std::vector<PalmSample> palm_samples(const Scenario& scenario, std::uint64_t seed,
                                     const std::vector<SpsResult>& results) {
  std::vector<PalmSample> out;
  out.reserve(results.size());
  for (const SpsResult& r : results) {
    const TaggedJob tagged = sample_tagged(scenario, StreamKey{seed, r.replica, 0});
    out.push_back({r.workload, tagged.mark.alpha, tagged.mark.sigma, tagged.mark.tau, tagged.job_class});
  }
  return out;
}

namespace {

Summary summarize_values(std::vector<double> values, const SummaryOptions& options, double z) {
  const SampleMoments m = moments(values);
  Summary s;
  s.mean = m.mean;
  s.variance = m.variance;
  s.ci_half_width = z * std::sqrt(m.variance / static_cast<double>(m.count));
  std::sort(values.begin(), values.end());
  for (double level : options.percentiles) s.percentiles.push_back({level, nearest_rank(values, level)});
  return s;
}

ClassMetrics class_metrics(const std::vector<const PalmSample*>& members, const SummaryOptions& options, double z) {
  ClassMetrics c;
  c.count = members.size();
  if (members.empty()) return c;
  std::vector<double> waits;
  std::vector<double> systems;
  waits.reserve(members.size());
  systems.reserve(members.size());
  for (const PalmSample* p : members) {
    waits.push_back(waiting_time(*p));
    systems.push_back(system_time(*p));
  }
  c.waiting = summarize_values(std::move(waits), options, z);
  c.system = summarize_values(std::move(systems), options, z);
  return c;
}

Histogram waiting_histogram(const std::vector<PalmSample>& samples, const SummaryOptions& options) {
  std::vector<double> waits;
  waits.reserve(samples.size());
  for (const PalmSample& p : samples) waits.push_back(waiting_time(p));
  std::sort(waits.begin(), waits.end());
  Histogram h;
  h.tail_p90 = nearest_rank(waits, 0.9);
  h.tail_p99 = nearest_rank(waits, 0.99);
  h.tail_p999 = nearest_rank(waits, 0.999);
  const std::size_t bins = std::max<std::size_t>(options.histogram_bins, 1);
  h.bin_width = options.histogram_bin_width > 0.0 ? options.histogram_bin_width : h.tail_p99 / static_cast<double>(bins);
  if (!(h.bin_width > 0.0)) h.bin_width = 1.0;
  h.density.assign(bins, 0.0);
  const double n = static_cast<double>(waits.size());
  for (double w : waits) {
    if (w == 0.0) ++h.zeros;
    const auto bin = static_cast<std::size_t>(w / h.bin_width);
    if (bin < bins) {
      h.density[bin] += 1.0;
    } else {
      ++h.overflow;
    }
  }
  for (double& d : h.density) d /= n * h.bin_width;
  return h;
}

}  // namespace

MetricReport summarize(const std::vector<PalmSample>& samples, const Scenario& scenario,
                       const SummaryOptions& options) {
  const double z = normal_quantile_two_sided(options.confidence);
  for (double level : options.percentiles) {
    if (!(level > 0.0 && level <= 1.0)) throw ConfigError("percentiles must be in (0,1]");
  }
  if (samples.empty()) throw PreconditionError("cannot summarize an empty sample set");

  MetricReport report;
  report.confidence = options.confidence;
  report.lambda = scenario.arrival.rate;

  std::vector<const PalmSample*> all;
  std::vector<std::vector<const PalmSample*>> by_class(scenario.classes.size());
  for (const PalmSample& p : samples) {
    all.push_back(&p);
    if (p.job_class < 0 || static_cast<std::size_t>(p.job_class) >= by_class.size()) {
      throw PreconditionError("sample class outside the scenario's classes");
    }
    by_class[static_cast<std::size_t>(p.job_class)].push_back(&p);
  }
  report.overall = class_metrics(all, options, z);
  report.overall.label = "all";
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    ClassMetrics m = class_metrics(by_class[c], options, z);
    m.job_class = static_cast<int>(c);
    m.demand = scenario.classes[c].demand;
    m.label = scenario.classes[c].name.empty() ? "class" + std::to_string(c) : scenario.classes[c].name;
    report.per_class.push_back(std::move(m));
  }
  const WasteEstimate waste = waste_estimators(samples, report.lambda);
  report.waste = waste.waste;
  report.hol_waste = waste.hol_waste;
  report.mean_jobs = report.lambda * report.overall.system->mean;
  report.waiting_histogram = waiting_histogram(samples, options);
  return report;
}

namespace {

nlohmann::json summary_json(const std::optional<Summary>& s) {
  if (!s) return nullptr;
  nlohmann::json j{{"mean", s->mean}, {"variance", s->variance}, {"ci_half_width", s->ci_half_width}};
  nlohmann::json pct = nlohmann::json::array();
  for (const Percentile& p : s->percentiles) pct.push_back({{"level", p.level}, {"value", p.value}});
  j["percentiles"] = pct;
  return j;
}

nlohmann::json class_json(const ClassMetrics& c) {
  return {{"label", c.label},           {"job_class", c.job_class},        {"demand", c.demand},
          {"count", c.count},           {"waiting", summary_json(c.waiting)}, {"system", summary_json(c.system)}};
}

void emit_rows(std::ostringstream& os, const ClassMetrics& c, const std::string& quantity,
               const std::optional<Summary>& s) {
  const std::string prefix = c.label + "," + std::to_string(c.demand) + ",";
  if (!s) {
    os << prefix << quantity << "_count," << c.count << "\n";
    return;
  }
  os << prefix << quantity << "_count," << c.count << "\n";
  os << prefix << quantity << "_mean," << s->mean << "\n";
  os << prefix << quantity << "_variance," << s->variance << "\n";
  os << prefix << quantity << "_ci_half_width," << s->ci_half_width << "\n";
  for (const Percentile& p : s->percentiles) {
    std::ostringstream level;
    level << p.level;  // default precision: p0.5, p0.99
    os << prefix << quantity << "_p" << level.str() << "," << p.value << "\n";
  }
}

}  // namespace

std::string to_structured(const MetricReport& report) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const ClassMetrics& c : report.per_class) per_class.push_back(class_json(c));
  const Histogram& h = report.waiting_histogram;
  nlohmann::json j{
      {"confidence", report.confidence},
      {"lambda", report.lambda},
      {"overall", class_json(report.overall)},
      {"per_class", per_class},
      {"waste", report.waste},
      {"hol_waste", report.hol_waste},
      {"mean_jobs", report.mean_jobs},
      {"waiting_histogram",
       {{"bin_width", h.bin_width},
        {"density", h.density},
        {"overflow", h.overflow},
        {"zeros", h.zeros},
        {"tail_p90", h.tail_p90},
        {"tail_p99", h.tail_p99},
        {"tail_p999", h.tail_p999}}},
  };
  return j.dump(2) + "\n";
}

std::string to_tabular(const MetricReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "class,demand,metric,value\n";
  for (const ClassMetrics* c : {&report.overall}) {
    emit_rows(os, *c, "waiting", c->waiting);
    emit_rows(os, *c, "system", c->system);
  }
  for (const ClassMetrics& c : report.per_class) {
    emit_rows(os, c, "waiting", c.waiting);
    emit_rows(os, c, "system", c.system);
  }
  os << "all,0,waste," << report.waste << "\n";
  os << "all,0,hol_waste," << report.hol_waste << "\n";
  os << "all,0,mean_jobs," << report.mean_jobs << "\n";
  return os.str();
}

}  // namespace mjsre
