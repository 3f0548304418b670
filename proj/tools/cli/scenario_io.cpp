#include "scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mjsre/errors.hpp"

namespace mjsre::cli {

namespace {

using nlohmann::json;

constexpr double kProbabilityTolerance = 1e-9;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) field_error(where + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) field_error(where + key, "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) field_error(where + key, "expected an integer");
  return v.get<int>();
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) field_error(where + key, "expected a string");
  return v.get<std::string>();
}

ServiceDistribution parse_service(const json& j, const std::string& where) {
  const std::string type = text(j, "type", where);
  ServiceDistribution d;
  if (type == "deterministic") {
    d = Deterministic{number(j, "value", where)};
  } else if (type == "exponential") {
    d = Exponential{number(j, "mean", where)};
  } else if (type == "erlang") {
    d = ErlangK{integer(j, "k", where), number(j, "mean", where)};
  } else if (type == "hyperexponential") {
    d = HyperExp2{number(j, "mean_long", where), number(j, "mean_short", where), number(j, "p_long", where)};
  } else if (type == "bounded_pareto") {
    d = BoundedPareto{number(j, "x_min", where), number(j, "x_max", where), number(j, "shape", where)};
  } else {
    field_error(where + "type", "unknown service distribution '" + type + "'");
  }
  try {
    validate(d);
  } catch (const ConfigError& e) {
    field_error(where.substr(0, where.size() - 1), e.what());
  }
  return d;
}

ArrivalProcess parse_arrival(const json& j) {
  ArrivalProcess a;
  a.rate = number(j, "rate", "arrival.");
  if (j.contains("family")) {
    const std::string family = text(j, "family", "arrival.");
    if (family == "exponential") {
      a.family = InterArrivalFamily::exponential;
    } else if (family == "deterministic") {
      a.family = InterArrivalFamily::deterministic;
    } else if (family == "erlang") {
      a.family = InterArrivalFamily::erlang;
      a.erlang_k = integer(j, "erlang_k", "arrival.");
    } else {
      field_error("arrival.family", "unknown inter-arrival family '" + family + "'");
    }
  }
  return a;
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Scenario parse_scenario(const std::string& content, const std::string& origin) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(content, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << origin << ":" << line << ":" << column << ": parse error: " << e.what();
    throw ConfigError(os.str());
  }
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");

  Scenario sc;
  try {
    sc.name = j.contains("name") ? text(j, "name", "") : std::string{};
    sc.servers = integer(j, "servers", "");
    sc.arrival = parse_arrival(require(j, "arrival", ""));
    const json& classes = require(j, "classes", "");
    if (!classes.is_array() || classes.empty()) field_error("classes", "expected a non-empty array");
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const std::string where = "classes[" + std::to_string(c) + "].";
      const json& jc = classes[c];
      JobClass cls;
      cls.name = jc.contains("name") ? text(jc, "name", where) : "class" + std::to_string(c);
      cls.demand = integer(jc, "demand", where);
      cls.probability = number(jc, "probability", where);
      if (!(cls.probability > 0.0)) field_error(where + "probability", "must be positive");
      if (cls.demand < 1 || cls.demand > sc.servers) {
        field_error(where + "demand", "must be in 1.." + std::to_string(sc.servers));
      }
      cls.service = parse_service(require(jc, "service", where), where + "service.");
      sc.classes.push_back(std::move(cls));
    }
    double total = 0.0;
    for (const JobClass& c : sc.classes) total += c.probability;
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "probabilities sum to " << total << ", not 1";
      field_error("classes[].probability", os.str());
    }
    for (JobClass& c : sc.classes) c.probability /= total;
    sc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

json scenario_to_json(const Scenario& sc) {
  json classes = json::array();
  for (const JobClass& c : sc.classes) {
    json service = std::visit(
        [](const auto& d) -> json {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, Deterministic>) {
            return {{"type", "deterministic"}, {"value", d.value}};
          } else if constexpr (std::is_same_v<D, Exponential>) {
            return {{"type", "exponential"}, {"mean", d.mean}};
          } else if constexpr (std::is_same_v<D, ErlangK>) {
            return {{"type", "erlang"}, {"k", d.k}, {"mean", d.mean}};
          } else if constexpr (std::is_same_v<D, HyperExp2>) {
            return {{"type", "hyperexponential"}, {"mean_long", d.mean_long}, {"mean_short", d.mean_short},
                    {"p_long", d.p_long}};
          } else {
            return {{"type", "bounded_pareto"}, {"x_min", d.x_min}, {"x_max", d.x_max}, {"shape", d.shape}};
          }
        },
        c.service);
    classes.push_back({{"name", c.name}, {"demand", c.demand}, {"probability", c.probability}, {"service", service}});
  }
  json arrival{{"rate", sc.arrival.rate}};
  switch (sc.arrival.family) {
    case InterArrivalFamily::exponential: arrival["family"] = "exponential"; break;
    case InterArrivalFamily::deterministic: arrival["family"] = "deterministic"; break;
    case InterArrivalFamily::erlang:
      arrival["family"] = "erlang";
      arrival["erlang_k"] = sc.arrival.erlang_k;
      break;
  }
  return {{"name", sc.name}, {"servers", sc.servers}, {"arrival", arrival}, {"classes", classes}};
}

}  // namespace mjsre::cli
