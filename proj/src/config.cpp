#include "ddw/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <fstream>
#include <sstream>

namespace ddw::config {

ParseError::ParseError(const std::string& what, int line)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::dynamics: return "dynamics";
    case Experiment::decoherence: return "decoherence";
    case Experiment::asymptotic: return "asymptotic";
  }
  return "spectrum";
}

std::string to_string(floquet::SweepAxis a) {
  return a == floquet::SweepAxis::frequency ? "frequency" : "drive";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE) {
    throw ArgumentError("'" + key + "' expects a number, got '" + v + "'");
  }
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long i = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE || i < -2147483647L || i > 2147483647L) {
    throw ArgumentError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return static_cast<int>(i);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ArgumentError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ArgumentError("'" + key + "' expects a comma-separated list");
  return out;
}

}  // namespace

void assign(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "experiment") {
    if (v == "spectrum") c.experiment = Experiment::spectrum;
    else if (v == "dynamics") c.experiment = Experiment::dynamics;
    else if (v == "decoherence") c.experiment = Experiment::decoherence;
    else if (v == "asymptotic") c.experiment = Experiment::asymptotic;
    else throw ArgumentError("unknown experiment '" + v + "'");
  } else if (key == "barrier") c.model.barrier = to_double(key, v);
  else if (key == "drive") c.model.drive = to_double(key, v);
  else if (key == "frequency") c.model.frequency = to_double(key, v);
  else if (key == "basis_size") c.model.basis_size = to_int(key, v);
  else if (key == "basis_scale") c.model.basis_scale = to_double(key, v);
  else if (key == "gamma") c.bath.gamma = to_double(key, v);
  else if (key == "temperature") {
    c.bath.temperature = to_double(key, v);
    c.temperatures = {c.bath.temperature};
  } else if (key == "temperatures") {
    c.temperatures = to_list(key, v);
    c.bath.temperature = c.temperatures.front();
  } else if (key == "n_states") c.bath.n_states = to_int(key, v);
  else if (key == "harmonics") {
    c.bath.harmonics = to_int(key, v);
    c.floquet.harmonics = c.bath.harmonics;
  } else if (key == "steps_per_period") c.floquet.steps_per_period = to_int(key, v);
  else if (key == "time_samples") c.floquet.time_samples = to_int(key, v);
  else if (key == "sweep_axis") {
    if (v == "frequency") c.sweep_axis = floquet::SweepAxis::frequency;
    else if (v == "drive") c.sweep_axis = floquet::SweepAxis::drive;
    else throw ArgumentError("unknown sweep axis '" + v + "'");
  } else if (key == "sweep_from") c.sweep_from = to_double(key, v);
  else if (key == "sweep_to") c.sweep_to = to_double(key, v);
  else if (key == "sweep_points") c.sweep_points = to_int(key, v);
  else if (key == "at_crossing") c.at_crossing = to_bool(key, v);
  else if (key == "dt") c.dt = to_double(key, v);
  else if (key == "t_end") c.t_end = to_double(key, v);
  else if (key == "tunnel_cycles") c.tunnel_cycles = to_double(key, v);
  else if (key == "output_stride") c.output_stride = to_int(key, v);
  else if (key == "threads") c.threads = to_int(key, v);
  else if (key == "output") {
    if (v.empty()) throw ArgumentError("'output' must not be empty");
    c.output = v;
  } else throw ArgumentError("unknown key '" + key + "'");
}

void RunConfig::validate() const {
  model.validate();
  floquet.validate();
  bath.validate(model.basis_size);
  if (bath.harmonics != floquet.harmonics) throw ArgumentError("harmonics differ between bath and Floquet options");
  if (sweep_points < 1) throw ArgumentError("sweep_points must be positive");
  if (sweep_points > 1 && !(sweep_to != sweep_from)) throw ArgumentError("sweep range is empty");
  const double lo = std::min(sweep_from, sweep_to);
  if (sweep_axis == floquet::SweepAxis::frequency && !(lo > 0.0)) {
    throw ArgumentError("frequency sweep must stay positive");
  }
  if (sweep_axis == floquet::SweepAxis::drive && !(lo >= 0.0)) {
    throw ArgumentError("drive sweep must stay non-negative");
  }
  if (temperatures.empty()) throw ArgumentError("temperatures must not be empty");
  if (bath.temperature != temperatures.front()) {
    throw ArgumentError("bath temperature must equal the first of temperatures");
  }
  for (double t : temperatures) {
    if (!(t >= 0.0)) throw ArgumentError("temperatures must be non-negative");
  }
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(t_end >= 0.0)) throw ArgumentError("t_end must be non-negative");
  if (!(tunnel_cycles > 0.0)) throw ArgumentError("tunnel_cycles must be positive");
  if (output_stride < 1) throw ArgumentError("output_stride must be positive");
  if (threads < 0) throw ArgumentError("threads must be non-negative");
}

std::vector<double> RunConfig::sweep_grid() const {
  std::vector<double> grid(sweep_points);
  for (int i = 0; i < sweep_points; ++i) {
    grid[i] = sweep_points == 1
                  ? sweep_from
                  : sweep_from + (sweep_to - sweep_from) * i / (sweep_points - 1);
  }
  return grid;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  int assignments = 0;
  int invalid_since = 0;  // first line of the current invalid stretch
  bool has_experiment = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line);
    try {
      assign(c, key, value);
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
    // Intermediate states may be inconsistent (e.g. harmonics before
    // time_samples); only the final one has to validate.
    try {
      c.validate();
      invalid_since = 0;
    } catch (const Error&) {
      if (invalid_since == 0) invalid_since = line;
    }
    ++assignments;
    if (key == "experiment") has_experiment = true;
  }
  if (assignments > 0 && !has_experiment) throw ParseError("missing 'experiment'", line);
  if (invalid_since != 0) {
    try {
      c.validate();
    } catch (const Error& e) {
      throw ParseError(e.what(), invalid_since);
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& v) { out << key << " = " << v << '\n'; };
  put("experiment", to_string(c.experiment));
  put("barrier", format_double(c.model.barrier));
  put("drive", format_double(c.model.drive));
  put("frequency", format_double(c.model.frequency));
  put("basis_size", std::to_string(c.model.basis_size));
  put("basis_scale", format_double(c.model.basis_scale));
  put("gamma", format_double(c.bath.gamma));
  std::string temps;
  for (std::size_t i = 0; i < c.temperatures.size(); ++i) {
    if (i) temps += ", ";
    temps += format_double(c.temperatures[i]);
  }
  put("temperatures", temps);
  put("n_states", std::to_string(c.bath.n_states));
  put("harmonics", std::to_string(c.bath.harmonics));
  put("steps_per_period", std::to_string(c.floquet.steps_per_period));
  put("time_samples", std::to_string(c.floquet.time_samples));
  put("sweep_axis", to_string(c.sweep_axis));
  put("sweep_from", format_double(c.sweep_from));
  put("sweep_to", format_double(c.sweep_to));
  put("sweep_points", std::to_string(c.sweep_points));
  put("at_crossing", c.at_crossing ? "true" : "false");
  put("dt", format_double(c.dt));
  put("t_end", format_double(c.t_end));
  put("tunnel_cycles", format_double(c.tunnel_cycles));
  put("output_stride", std::to_string(c.output_stride));
  put("threads", std::to_string(c.threads));
  put("output", c.output);
  return out.str();
}

}  // namespace ddw::config
