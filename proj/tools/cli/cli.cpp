#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mjsre/errors.hpp"
#include "mjsre/generalizations.hpp"
#include "mjsre/des.hpp"
#include "mjsre/metrics.hpp"
#include "mjsre/sampling.hpp"
#include "mjsre/stability.hpp"
#include "scenario_io.hpp"

#ifndef MJSRE_VERSION
#define MJSRE_VERSION "unknown"
#endif

namespace mjsre::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands{"sps", "stability", "forward", "des", "metrics", "compare-ra"};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Result of one command: the table to emit plus manifest extras.
struct Outcome {
  std::string body;
  bool converged = true;
  json results = json::object();
};

Scenario scenario_for(const RunConfig& c, const std::string& path) {
  Scenario sc = load_scenario(path);
  if (c.lambda) sc = sc.with_rate(*c.lambda);
  return sc;
}

SpsOptions sps_options(const RunConfig& c) {
  SpsOptions o;
  if (c.ell0) o.ell0 = *c.ell0;
  if (c.ell_max) o.ell_max = *c.ell_max;
  if (c.ell0 && !c.ell_max && o.ell_max < o.ell0) o.ell_max = o.ell0;
  o.validate();
  return o;
}

StabilityOptions stability_options(const RunConfig& c) {
  StabilityOptions o;
  if (c.ell0) o.ell0 = *c.ell0;
  if (c.ell_max) o.ell_max = *c.ell_max;
  if (c.ell0 && !c.ell_max && o.ell_max < o.ell0) o.ell_max = o.ell0;
  if (c.epsilon) o.epsilon = *c.epsilon;
  o.confidence = c.confidence;
  o.precision_guard = c.precision_guard;
  o.validate();
  return o;
}

json estimate_json(const StabilityEstimate& e) {
  json history = json::array();
  for (const auto& [jobs, gamma] : e.history) history.push_back({{"jobs", jobs}, {"gamma", gamma}});
  return {{"gamma", e.gamma},     {"lambda_c", e.lambda_c},   {"ell_used", e.ell_used},
          {"epsilon", e.epsilon}, {"half_width", e.half_width}, {"converged", e.converged},
          {"history", history}};
}

Outcome run_sps(const RunConfig& c, bool report) {
  const Scenario sc = scenario_for(c, c.scenario_paths.front());
  const std::vector<SpsResult> results = batch_sps(sc, c.seed, c.replicas, sps_options(c), c.workers);
  const std::vector<PalmSample> palm = palm_samples(sc, c.seed, results);
  Outcome o;
  std::int64_t unconverged = 0;
  for (const SpsResult& r : results) unconverged += r.converged ? 0 : 1;
  o.converged = unconverged == 0;
  o.results["replicas"] = results.size();
  o.results["unconverged_replicas"] = unconverged;

  if (report) {
    SummaryOptions so;
    so.confidence = c.confidence;
    so.percentiles = c.percentiles;
    const MetricReport m = summarize(palm, sc, so);
    if (c.format == Format::structured) {
      o.body = to_structured(m);
    } else {
      // Reprint with full precision numbers.
      std::ostringstream os;
      os << to_tabular(m);
      o.body = os.str();
    }
    return o;
  }

  if (c.format == Format::structured) {
    json rows = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const SpsResult& r = results[i];
      rows.push_back({{"replica", r.replica},
                      {"alpha0", palm[i].alpha0},
                      {"job_class", palm[i].job_class},
                      {"waiting_time", waiting_time(palm[i])},
                      {"system_time", system_time(palm[i])},
                      {"ell_final", r.ell_final},
                      {"doublings", r.doublings},
                      {"converged", r.converged},
                      {"rare_class_count", r.rare_class_count},
                      {"workload", r.workload.values()}});
    }
    o.body = rows.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "replica,alpha0,job_class,waiting_time,system_time,ell_final,doublings,converged,rare_class_count\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const SpsResult& r = results[i];
      os << r.replica << ',' << palm[i].alpha0 << ',' << palm[i].job_class << ',' << num(waiting_time(palm[i])) << ','
         << num(system_time(palm[i])) << ',' << r.ell_final << ',' << r.doublings << ',' << (r.converged ? 1 : 0)
         << ',' << r.rare_class_count << '\n';
    }
    o.body = os.str();
  }
  return o;
}

Outcome run_stability(const RunConfig& c) {
  const Scenario sc = scenario_for(c, c.scenario_paths.front());
  const StabilityOptions opts = stability_options(c);
  const Stream stream{c.seed, 0};
  const StabilityEstimate e = c.random_assignment ? ra_gamma(sc, stream, opts) : estimate_gamma(sc, stream, opts);
  Outcome o;
  o.converged = e.converged;
  o.results = estimate_json(e);
  if (c.format == Format::structured) {
    o.body = estimate_json(e).dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "row,jobs,gamma,lambda_c,epsilon,half_width,converged\n";
    for (const auto& [jobs, gamma] : e.history) {
      os << "iterate," << jobs << ',' << num(gamma) << ',' << num(1.0 / gamma) << ',' << num(e.epsilon) << ",,\n";
    }
    os << "final," << e.ell_used << ',' << num(e.gamma) << ',' << num(e.lambda_c) << ',' << num(e.epsilon) << ','
       << num(e.half_width) << ',' << (e.converged ? 1 : 0) << '\n';
    o.body = os.str();
  }
  return o;
}

std::string trajectory_body(const Trajectory& t, Format format) {
  if (format == Format::structured) {
    return json{{"job_index", t.job_index},
                {"alpha", t.alpha},
                {"sigma", t.sigma},
                {"tau", t.tau},
                {"waiting_time", t.waiting_time}}
               .dump(2) +
           "\n";
  }
  std::ostringstream os;
  os << "job_index,alpha,sigma,tau,waiting_time\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << t.job_index[i] << ',' << t.alpha[i] << ',' << num(t.sigma[i]) << ',' << num(t.tau[i]) << ','
       << num(t.waiting_time[i]) << '\n';
  }
  return os.str();
}

Outcome run_forward(const RunConfig& c) {
  const Scenario sc = scenario_for(c, c.scenario_paths.front());
  const Trajectory t =
      forward_run(sc, Stream{c.seed, 0}, c.n_jobs, WorkloadVector(static_cast<std::size_t>(sc.servers)));
  Outcome o;
  o.body = trajectory_body(t, c.format);
  return o;
}

Outcome run_des(const RunConfig& c) {
  const Scenario sc = scenario_for(c, c.scenario_paths.front());
  const DesResult r = des_run(sc, Stream{c.seed, 0}, c.n_jobs);
  Outcome o;
  o.body = trajectory_body(r.trajectory, c.format);
  const TimeAverages& a = r.averages;
  o.results = {{"horizon", a.horizon},
               {"busy_servers", a.busy_servers},
               {"idle_servers", a.idle_servers},
               {"hol_idle_servers", a.hol_idle_servers},
               {"jobs_in_system", a.jobs_in_system},
               {"end_time", r.end_time},
               {"events", r.events}};
  return o;
}

Outcome run_compare_ra(const RunConfig& c) {
  const StabilityOptions opts = stability_options(c);
  Outcome o;
  json rows = json::array();
  std::ostringstream os;
  os << "scenario,policy,gamma,lambda_c,ell_used,converged\n";
  for (const std::string& path : c.scenario_paths) {
    const Scenario sc = scenario_for(c, path);
    const Stream stream{c.seed, 0};
    const StabilityEstimate fcfs = estimate_gamma(sc, stream, opts);
    const StabilityEstimate ra = ra_gamma(sc, stream, opts);
    const std::string label = sc.name.empty() ? path : sc.name;
    for (const auto& [policy, e] : {std::pair<const char*, const StabilityEstimate&>{"fcfs", fcfs}, {"ra", ra}}) {
      os << label << ',' << policy << ',' << num(e.gamma) << ',' << num(e.lambda_c) << ',' << e.ell_used << ','
         << (e.converged ? 1 : 0) << '\n';
      json row = estimate_json(e);
      row["scenario"] = label;
      row["policy"] = policy;
      rows.push_back(row);
      o.converged = o.converged && e.converged;
    }
  }
  o.body = c.format == Format::structured ? rows.dump(2) + "\n" : os.str();
  return o;
}

json config_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"scenarios", c.scenario_paths},
         {"seed", c.seed},
         {"replicas", c.replicas},
         {"n_jobs", c.n_jobs},
         {"workers", c.workers},
         {"confidence", c.confidence},
         {"percentiles", c.percentiles},
         {"random_assignment", c.random_assignment},
         {"allow_nonconverged", c.allow_nonconverged},
         {"precision_guard", c.precision_guard},
         {"format", c.format == Format::structured ? "structured" : "tabular"},
         {"output", c.output}};
  j["ell0"] = c.ell0 ? json(*c.ell0) : json(nullptr);
  j["ell_max"] = c.ell_max ? json(*c.ell_max) : json(nullptr);
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  return j;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (scenario_paths.empty()) throw ConfigError("--scenario is required");
  if (command != "compare-ra" && scenario_paths.size() > 1) {
    throw ConfigError("only compare-ra accepts several scenarios");
  }
  if (replicas < 1) throw ConfigError("--replicas must be positive");
  if (ell0 && *ell0 < 1) throw ConfigError("--ell0 must be positive");
  if (ell_max && *ell_max < 1) throw ConfigError("--ell-max must be positive");
  if (ell0 && ell_max && *ell_max < *ell0) throw ConfigError("--ell-max must be >= --ell0");
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) throw ConfigError("--epsilon must be positive");
  if (n_jobs < 1) throw ConfigError("--n-jobs must be positive");
  if (workers < 1) throw ConfigError("--workers must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("--confidence must be in (0,1)");
  for (double p : percentiles) {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("--percentiles entries must be in (0,1]");
  }
  if (lambda && !(*lambda >= 0.0 && std::isfinite(*lambda))) throw ConfigError("--lambda must be non-negative");
  if (random_assignment && command != "stability") throw ConfigError("--ra applies to the stability command only");
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  c.workers = default_workers();
  CLI::App app{"Multiserver-job queue simulator based on the workload-vector recurrence", "mjsre"};
  app.set_version_flag("--version", std::string(MJSRE_VERSION));
  app.add_option("command", c.command, "sps | stability | forward | des | metrics | compare-ra")->required();
  app.add_option("-s,--scenario", c.scenario_paths, "Scenario file (repeatable for compare-ra)")->required();
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--replicas", c.replicas, "Independent SPS replicas");
  std::int64_t ell0 = 0;
  std::int64_t ell_max = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  auto* o_ell0 = app.add_option("--ell0", ell0, "Initial backward window / first stability milestone");
  auto* o_ell_max = app.add_option("--ell-max", ell_max, "Largest window before giving up");
  auto* o_eps = app.add_option("--epsilon", epsilon, "Stability tolerance on gamma (default 0.01/lambda_ideal)");
  auto* o_lambda = app.add_option("--lambda", lambda, "Override the scenario's arrival rate");
  app.add_option("--n-jobs", c.n_jobs, "Jobs for forward and des runs");
  app.add_option("--workers", c.workers, "Worker threads (default: MJSRE_WORKERS or hardware concurrency)");
  app.add_option("--confidence", c.confidence, "Confidence level of intervals");
  app.add_option("--percentiles", c.percentiles, "Percentile levels in (0,1]")->delimiter(',');
  app.add_option("-o,--output", c.output, "Output file (default stdout)");
  app.add_option("--manifest", c.manifest, "Manifest file (default <output>.manifest.json)");
  std::string format = "tabular";
  app.add_option("--format", format, "tabular | structured")->check(CLI::IsMember({"tabular", "structured"}));
  app.add_flag("--ra", c.random_assignment, "Random server assignment (stability only)");
  app.add_flag("!--no-precision-guard", c.precision_guard,
               "Stability: stop on the milestone difference alone, without the batch-means half-width check");
  app.add_flag("--allow-nonconverged", c.allow_nonconverged, "Exit 0 even if a run did not converge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << MJSRE_VERSION << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  if (o_ell0->count() > 0) c.ell0 = ell0;
  if (o_ell_max->count() > 0) c.ell_max = ell_max;
  if (o_eps->count() > 0) c.epsilon = epsilon;
  if (o_lambda->count() > 0) c.lambda = lambda;
  c.format = format == "structured" ? Format::structured : Format::tabular;
  c.validate();
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  json manifest{{"tool", "mjsre"}, {"version", MJSRE_VERSION}, {"started_utc", utc_now()}};
  int code = kSuccess;
  Outcome outcome;
  bool produced = false;
  try {
    config.validate();
    json scenarios = json::array();
    for (const std::string& path : config.scenario_paths) scenarios.push_back(scenario_to_json(scenario_for(config, path)));
    manifest["config"] = config_json(config);
    manifest["scenarios"] = scenarios;

    if (config.command == "sps") {
      outcome = run_sps(config, false);
    } else if (config.command == "metrics") {
      outcome = run_sps(config, true);
    } else if (config.command == "stability") {
      outcome = run_stability(config);
    } else if (config.command == "forward") {
      outcome = run_forward(config);
    } else if (config.command == "des") {
      outcome = run_des(config);
    } else {
      outcome = run_compare_ra(config);
    }
    produced = true;
    if (!outcome.converged) {
      err << "mjsre: " << config.command << " did not converge"
          << (config.allow_nonconverged ? " (allowed)" : "; rerun with a larger --ell-max or --allow-nonconverged")
          << "\n";
      if (!config.allow_nonconverged) code = kNotConverged;
    }
  } catch (const ConfigError& e) {
    err << "mjsre: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DemandError& e) {
    err << "mjsre: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "mjsre: " << config.command << " failed: " << e.what() << "\n";
    code = kRuntimeError;
  }

  try {
    if (produced) {
      if (config.output.empty()) {
        out << outcome.body;
      } else {
        write_file(config.output, outcome.body);
      }
    }
    const std::string manifest_path =
        !config.manifest.empty() ? config.manifest : (config.output.empty() ? "" : config.output + ".manifest.json");
    if (!manifest_path.empty()) {
      manifest["converged"] = outcome.converged;
      manifest["partial"] = !produced || !outcome.converged;
      manifest["exit_code"] = code;
      manifest["results"] = outcome.results;
      manifest["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_file(manifest_path, manifest.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << "mjsre: " << e.what() << "\n";
    return kRuntimeError;
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const ConfigError& e) {
    err << "mjsre: usage error: " << e.what() << "\n";
    return kConfigError;
  }
  if (!config) return kSuccess;
  return run(*config, out, err);
}

}  // namespace mjsre::cli
