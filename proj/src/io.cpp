#include "deltacut/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "deltacut/errors.hpp"
#include "deltacut/format.hpp"

namespace deltacut::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// Runs `fn` translating nlohmann type/lookup errors into ParseError.
template <typename Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

// Non-negative integer field, or `fallback` when absent.
template <typename T>
T count_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw ParseError(std::string("key '") + key + "' must be a non-negative integer");
  }
  return v.get<T>();
}

Point2 point2(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ParamRange range(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("bounds: missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(std::string("bounds: '") + key + "' must be [lower, upper]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ordered_json genome_json(const Genome& g) {
  ordered_json j;
  j["f"] = g[0];
  j["e"] = g[1];
  j["rf"] = g[2];
  j["re"] = g[3];
  return j;
}

template <typename T>
T file_or_throw(const std::filesystem::path& path, T (*parse)(std::string_view)) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double parse_field(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("stream csv line " + std::to_string(line) + ": bad number '" +
                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RobotGeometry parse_geometry(std::string_view text) {
  const json j = parse_json(text, "geometry");
  if (!j.is_object()) throw ParseError("geometry: expected an object with f, e, rf, re");
  return RobotGeometry(number(j, "f"), number(j, "e"), number(j, "rf"), number(j, "re"));
}

RobotGeometry load_geometry(const std::filesystem::path& path) {
  return file_or_throw<RobotGeometry>(path, parse_geometry);
}

std::string geometry_json(const RobotGeometry& geometry) {
  return genome_json({geometry.f(), geometry.e(), geometry.rf(), geometry.re()}).dump(2) + "\n";
}

PrescribedWorkspace parse_prescribed(std::string_view text) {
  const json j = parse_json(text, "prescribed workspace");
  if (!j.is_array()) throw ParseError("prescribed workspace: expected a list of [x, y, z]");
  std::vector<Pose> points;
  points.reserve(j.size());
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
        !p[2].is_number()) {
      throw ParseError("prescribed workspace: entry " + std::to_string(points.size()) +
                       " is not [x, y, z]");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  return PrescribedWorkspace(std::move(points));
}

PrescribedWorkspace load_prescribed(const std::filesystem::path& path) {
  return file_or_throw<PrescribedWorkspace>(path, parse_prescribed);
}

std::string prescribed_json(const PrescribedWorkspace& prescribed) {
  json j = json::array();
  for (const Pose& p : prescribed.points()) j.push_back({p.x, p.y, p.z});
  return j.dump() + "\n";
}

DesignBounds parse_bounds(std::string_view text) {
  const json j = parse_json(text, "bounds");
  if (!j.is_object()) throw ParseError("bounds: expected an object");
  DesignBounds b{range(j, "f"), range(j, "e"), range(j, "rf"), range(j, "re")};
  b.validate();
  return b;
}

DesignBounds load_bounds(const std::filesystem::path& path) {
  return file_or_throw<DesignBounds>(path, parse_bounds);
}

GaConfig parse_ga_config(std::string_view text) {
  const json j = parse_json(text, "ga config");
  if (!j.is_object()) throw ParseError("ga config: expected an object");
  return guarded("ga config", [&] {
    GaConfig c;
    c.population_size = count_or(j, "population_size", c.population_size);
    c.generations = count_or(j, "generations", c.generations);
    c.tournament_size = count_or(j, "tournament_size", c.tournament_size);
    c.crossover_rate = j.value("crossover_rate", c.crossover_rate);
    c.mutation_sigma_fraction = j.value("mutation_sigma_fraction", c.mutation_sigma_fraction);
    c.elitism_count = count_or(j, "elitism_count", c.elitism_count);
    c.seed = count_or(j, "seed", c.seed);
    c.size_penalty_weight = j.value("size_penalty_weight", c.size_penalty_weight);
    c.validate();
    return c;
  });
}

GaConfig load_ga_config(const std::filesystem::path& path) {
  return file_or_throw<GaConfig>(path, parse_ga_config);
}

std::string ga_report_json(const GaResult& result, const DesignBounds& bounds,
                           const GaConfig& config, std::size_t prescribed_points) {
  ordered_json j;
  j["best"] = genome_json(result.best);
  j["best_fitness"] = result.best_fitness;
  j["best_coverage"] = result.best_coverage;
  j["evaluations"] = result.evaluations;
  ordered_json history = ordered_json::array();
  for (const GenerationStats& g : result.history) {
    history.push_back({{"best", g.best_fitness}, {"mean", g.mean_fitness}});
  }
  j["history"] = std::move(history);

  ordered_json c;
  c["population_size"] = config.population_size;
  c["generations"] = config.generations;
  c["tournament_size"] = config.tournament_size;
  c["crossover_rate"] = config.crossover_rate;
  c["mutation_sigma_fraction"] = config.mutation_sigma_fraction;
  c["elitism_count"] = config.elitism_count;
  c["seed"] = config.seed;
  c["size_penalty_weight"] = config.size_penalty_weight;
  j["config"] = std::move(c);

  ordered_json b;
  for (const auto& [name, r] : {std::pair{"f", bounds.f}, std::pair{"e", bounds.e},
                                std::pair{"rf", bounds.rf}, std::pair{"re", bounds.re}}) {
    b[name] = {r.lower, r.upper};
  }
  j["bounds"] = std::move(b);
  j["prescribed_points"] = prescribed_points;
  return j.dump(2) + "\n";
}

CutProgram parse_cut_program(std::string_view text) {
  const json j = parse_json(text, "cut program");
  return guarded("cut program", [&] {
    if (!j.is_object() || !j.contains("contours") || !j.at("contours").is_array()) {
      throw ParseError("cut program: expected {\"contours\": [...]}");
    }
    CutProgram program;
    for (const json& c : j.at("contours")) {
      Contour contour;
      contour.z_plane = number(c, "z_plane");
      contour.laser_on = c.value("laser_on", true);
      if (!c.contains("start")) throw ParseError("contour: missing key 'start'");
      contour.start = point2(c.at("start"));
      if (c.contains("feed_override") && !c.at("feed_override").is_null()) {
        contour.feed_override = number(c, "feed_override");
      }
      if (!c.contains("segments") || !c.at("segments").is_array()) {
        throw ParseError("contour: missing 'segments' list");
      }
      for (const json& s : c.at("segments")) {
        const std::string type = s.at("type").get<std::string>();
        if (type == "line") {
          contour.segments.emplace_back(LineSegment{point2(s.at("end"))});
        } else if (type == "arc") {
          ArcSegment arc;
          arc.end = point2(s.at("end"));
          arc.center = point2(s.at("center"));
          const std::string dir = s.value("direction", std::string("ccw"));
          if (dir == "ccw") {
            arc.direction = ArcDirection::kCounterClockwise;
          } else if (dir == "cw") {
            arc.direction = ArcDirection::kClockwise;
          } else {
            throw ParseError("arc direction must be \"cw\" or \"ccw\"");
          }
          contour.segments.emplace_back(arc);
        } else {
          throw ParseError("segment type must be \"line\" or \"arc\"");
        }
      }
      program.contours.push_back(std::move(contour));
    }
    program.validate();
    return program;
  });
}

CutProgram load_cut_program(const std::filesystem::path& path) {
  return file_or_throw<CutProgram>(path, parse_cut_program);
}

WatchdogConfig parse_watchdog_config(std::string_view text) {
  const json j = parse_json(text, "watchdog config");
  if (!j.is_object()) throw ParseError("watchdog config: expected an object");
  return guarded("watchdog config", [&] {
    WatchdogConfig c;
    c.pulse_period = j.value("pulse_period", c.pulse_period);
    c.timeout = j.value("timeout", c.timeout);
    if (j.contains("processes")) {
      c.processes.clear();
      for (const json& p : j.at("processes")) {
        c.processes.push_back({p.at("name").get<std::string>(),
                               severity_from_string(p.at("severity").get<std::string>())});
      }
    }
    c.validate();
    return c;
  });
}

WatchdogConfig load_watchdog_config(const std::filesystem::path& path) {
  return file_or_throw<WatchdogConfig>(path, parse_watchdog_config);
}

FaultScript parse_fault_script(std::string_view text) {
  const json j = parse_json(text, "fault script");
  return guarded("fault script", [&] {
    if (!j.is_object() || !j.contains("intervals") || !j.at("intervals").is_array()) {
      throw ParseError("fault script: expected {\"intervals\": [...]}");
    }
    FaultScript script;
    for (const json& f : j.at("intervals")) {
      script.intervals.push_back({f.at("process_name").get<std::string>(),
                                  f.at("start_tick").get<long>(), f.at("end_tick").get<long>()});
    }
    return script;
  });
}

FaultScript load_fault_script(const std::filesystem::path& path) {
  return file_or_throw<FaultScript>(path, parse_fault_script);
}

void write_stream_csv(std::ostream& out, const SetpointStream& stream) {
  std::string text(kStreamHeader);
  text += '\n';
  for (const Setpoint& s : stream.samples) {
    text += format_real(s.t) + ',' + format_real(s.pose.x) + ',' + format_real(s.pose.y) + ',' +
            format_real(s.pose.z) + ',' + format_real(s.joints.theta1) + ',' +
            format_real(s.joints.theta2) + ',' + format_real(s.joints.theta3) + ',' +
            (s.laser_on ? '1' : '0') + '\n';
  }
  out << text;
}

SetpointStream read_stream_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kStreamHeader) {
    throw ParseError("stream csv: header must be '" + std::string(kStreamHeader) + "'");
  }
  SetpointStream stream;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 8) {
      throw ParseError("stream csv line " + std::to_string(line_no) + ": expected 8 fields");
    }
    Setpoint s;
    s.t = parse_field(fields[0], line_no);
    s.pose = {parse_field(fields[1], line_no), parse_field(fields[2], line_no),
              parse_field(fields[3], line_no)};
    s.joints = {parse_field(fields[4], line_no), parse_field(fields[5], line_no),
                parse_field(fields[6], line_no)};
    if (fields[7] == "1") {
      s.laser_on = true;
    } else if (fields[7] == "0") {
      s.laser_on = false;
    } else {
      throw ParseError("stream csv line " + std::to_string(line_no) + ": laser must be 0 or 1");
    }
    stream.samples.push_back(s);
  }
  return stream;
}

SetpointStream load_stream_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return read_stream_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace deltacut::io
