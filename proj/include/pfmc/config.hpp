#pragma once

// Flat "key = value" run configuration: dotted sections, '#' comments,
// UTF-8 text.  parse_run_config and render_run_config round-trip exactly
// (floats are printed with 17 significant digits), and parsing rejects
// unknown keys by full key path.

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pfmc {

// ------------------------------------------------------------ key-value layer

struct KVConfig {
  std::vector<std::pair<std::string, std::string>> entries;  // in file order

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
};

namespace detail_config {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail_config

inline KVConfig kv_parse(const std::string& text) {
  KVConfig kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail_config::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
    const std::string key = detail_config::trim(line.substr(0, eq));
    const std::string val = detail_config::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: line " + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : kv.entries)
      if (k == key)
        throw std::runtime_error("config: line " + std::to_string(lineno) + ": duplicate key '" +
                                 key + "'");
    kv.entries.emplace_back(key, val);
  }
  return kv;
}

inline std::string kv_render(const KVConfig& kv) {
  std::string out;
  for (const auto& [k, v] : kv.entries) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

// ------------------------------------------------------------- run config

// One monotonicity probe: kernel center y (d entries) and singular time s.
struct MonoProbe {
  std::vector<double> y;
  double s = 0.0;

  bool operator==(const MonoProbe&) const = default;
};

struct RunConfig {
  // run
  int d = 2;
  int n = 128;
  bool eps_auto = false;
  double eps = 0.05;
  double gamma = 0.25;                  // used when eps is auto
  std::vector<double> eps_candidates;   // strictly descending, used when auto
  bool dt_auto = true;
  double dt = 0.0;
  std::string scheme = "semi_implicit";  // or "explicit"
  double t_end = 0.01;
  int cadence = 25;
  int workers = 1;
  std::string out = "out";
  double margin_floor = 0.0;  // stop the window early when 1 - max|phi| < floor; 0 disables

  // init
  std::string shape = "sphere";  // sphere | strip | annulus | two_spheres
  std::vector<double> center = {0.5, 0.5};
  double radius = 0.25;
  int axis = 0;
  double a = 0.0, b = 0.0;
  std::vector<double> center2;
  double radius2 = 0.0;
  bool allow_thin_clearance = false;
  double ramp_factor = 1.0;

  // forcing
  std::string forcing = "none";  // none | constant_g | constant_u | shear_u | files
  double amplitude = 0.0;        // g level (constant_g) or shear amplitude (shear_u)
  std::vector<double> u_dir;     // the constant velocity vector for constant_u (d entries)
  bool mollify = false;
  double mollify_delta = 0.0;
  std::string g_file;            // files preset: snapshot paths
  std::vector<std::string> u_files;

  // output
  std::vector<double> snapshot_times;
  bool pgm = false;

  // probes
  std::vector<MonoProbe> mono_probes;
  std::string interface_probe = "auto";  // auto | sphere | strip | none

  // verify
  double tol_scale = 1.0;

  // sweep
  std::vector<double> sweep_eps;
  double sweep_t_sample = 0.01;

  bool operator==(const RunConfig&) const = default;
};

namespace detail_config {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "': expected an integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::runtime_error("config: key '" + key + "': expected true or false, got '" + v + "'");
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(to_double(key, tok));
  return out;
}

inline std::vector<std::string> to_words(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string list_str(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    out += fmt(xs[i]);
  }
  return out;
}

inline std::string words_str(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    out += xs[i];
  }
  return out;
}

// probes.mono value: "y0 y1 [y2] s" groups separated by ';'
inline std::vector<MonoProbe> to_probes(const std::string& key, const std::string& v, int d) {
  std::vector<MonoProbe> out;
  std::istringstream groups(v);
  std::string group;
  while (std::getline(groups, group, ';')) {
    group = trim(group);
    if (group.empty()) continue;
    const std::vector<double> xs = to_list(key, group);
    if (static_cast<int>(xs.size()) != d + 1)
      throw std::runtime_error("config: key '" + key + "': each probe needs " +
                               std::to_string(d + 1) + " numbers (y..., s), got '" + group + "'");
    MonoProbe p;
    p.y.assign(xs.begin(), xs.end() - 1);
    p.s = xs.back();
    out.push_back(std::move(p));
  }
  return out;
}

inline std::string probes_str(const std::vector<MonoProbe>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += " ; ";
    for (double y : ps[i].y) {
      out += fmt(y);
      out += " ";
    }
    out += fmt(ps[i].s);
  }
  return out;
}

}  // namespace detail_config

inline RunConfig parse_run_config(const std::string& text) {
  using namespace detail_config;
  const KVConfig kv = kv_parse(text);
  RunConfig c;
  // d first: probe parsing depends on it
  if (const std::string* v = kv.find("run.d")) c.d = to_int("run.d", *v);
  if (c.d != 2 && c.d != 3) throw std::runtime_error("config: key 'run.d': must be 2 or 3");

  for (const auto& [key, val] : kv.entries) {
    if (key == "run.d") {
    } else if (key == "run.n") {
      c.n = to_int(key, val);
    } else if (key == "run.eps") {
      if (val == "auto") {
        c.eps_auto = true;
        c.eps = 0.0;
      } else {
        c.eps_auto = false;
        c.eps = to_double(key, val);
      }
    } else if (key == "run.gamma") {
      c.gamma = to_double(key, val);
    } else if (key == "run.eps_candidates") {
      c.eps_candidates = to_list(key, val);
    } else if (key == "run.dt") {
      if (val == "auto") {
        c.dt_auto = true;
        c.dt = 0.0;
      } else {
        c.dt_auto = false;
        c.dt = to_double(key, val);
      }
    } else if (key == "run.scheme") {
      if (val != "semi_implicit" && val != "explicit")
        throw std::runtime_error("config: key 'run.scheme': unknown scheme '" + val + "'");
      c.scheme = val;
    } else if (key == "run.t_end") {
      c.t_end = to_double(key, val);
    } else if (key == "run.cadence") {
      c.cadence = to_int(key, val);
    } else if (key == "run.workers") {
      c.workers = to_int(key, val);
    } else if (key == "run.out") {
      c.out = val;
    } else if (key == "run.margin_floor") {
      c.margin_floor = to_double(key, val);
    } else if (key == "init.shape") {
      if (val != "sphere" && val != "strip" && val != "annulus" && val != "two_spheres")
        throw std::runtime_error("config: key 'init.shape': unknown shape '" + val + "'");
      c.shape = val;
    } else if (key == "init.center") {
      c.center = to_list(key, val);
    } else if (key == "init.radius") {
      c.radius = to_double(key, val);
    } else if (key == "init.axis") {
      c.axis = to_int(key, val);
    } else if (key == "init.a") {
      c.a = to_double(key, val);
    } else if (key == "init.b") {
      c.b = to_double(key, val);
    } else if (key == "init.center2") {
      c.center2 = to_list(key, val);
    } else if (key == "init.radius2") {
      c.radius2 = to_double(key, val);
    } else if (key == "init.allow_thin_clearance") {
      c.allow_thin_clearance = to_bool(key, val);
    } else if (key == "init.ramp_factor") {
      c.ramp_factor = to_double(key, val);
    } else if (key == "forcing.preset") {
      if (val != "none" && val != "constant_g" && val != "constant_u" && val != "shear_u" &&
          val != "files")
        throw std::runtime_error("config: key 'forcing.preset': unknown preset '" + val + "'");
      c.forcing = val;
    } else if (key == "forcing.amplitude") {
      c.amplitude = to_double(key, val);
    } else if (key == "forcing.u_dir") {
      c.u_dir = to_list(key, val);
    } else if (key == "forcing.mollify") {
      c.mollify = to_bool(key, val);
    } else if (key == "forcing.delta") {
      c.mollify_delta = to_double(key, val);
    } else if (key == "forcing.g_file") {
      c.g_file = val;
    } else if (key == "forcing.u_files") {
      c.u_files = to_words(val);
    } else if (key == "output.snapshot_times") {
      c.snapshot_times = to_list(key, val);
    } else if (key == "output.pgm") {
      c.pgm = to_bool(key, val);
    } else if (key == "probes.mono") {
      c.mono_probes = to_probes(key, val, c.d);
    } else if (key == "probes.interface") {
      if (val != "auto" && val != "sphere" && val != "strip" && val != "none")
        throw std::runtime_error("config: key 'probes.interface': unknown probe '" + val + "'");
      c.interface_probe = val;
    } else if (key == "verify.tol_scale") {
      c.tol_scale = to_double(key, val);
    } else if (key == "sweep.eps") {
      c.sweep_eps = to_list(key, val);
    } else if (key == "sweep.t_sample") {
      c.sweep_t_sample = to_double(key, val);
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }

  if (c.eps_auto && !(c.gamma > 0.0 && c.gamma < 0.5))
    throw std::runtime_error("config: key 'run.gamma': auto eps requires gamma in (0, 1/2)");
  if (static_cast<int>(c.center.size()) != c.d)
    throw std::runtime_error("config: key 'init.center': needs " + std::to_string(c.d) +
                             " entries");
  if (!c.center2.empty() && static_cast<int>(c.center2.size()) != c.d)
    throw std::runtime_error("config: key 'init.center2': needs " + std::to_string(c.d) +
                             " entries");
  if (c.forcing == "constant_u" && static_cast<int>(c.u_dir.size()) != c.d)
    throw std::runtime_error("config: key 'forcing.u_dir': needs " + std::to_string(c.d) +
                             " entries");
  for (const MonoProbe& p : c.mono_probes)
    if (!(p.s > 0.0))
      throw std::runtime_error("config: key 'probes.mono': probe time s must be positive");
  return c;
}

inline std::string render_run_config(const RunConfig& c) {
  using namespace detail_config;
  KVConfig kv;
  auto put = [&](const std::string& k, const std::string& v) { kv.entries.emplace_back(k, v); };
  put("run.d", std::to_string(c.d));
  put("run.n", std::to_string(c.n));
  put("run.eps", c.eps_auto ? "auto" : fmt(c.eps));
  put("run.gamma", fmt(c.gamma));
  if (!c.eps_candidates.empty()) put("run.eps_candidates", list_str(c.eps_candidates));
  put("run.dt", c.dt_auto ? "auto" : fmt(c.dt));
  put("run.scheme", c.scheme);
  put("run.t_end", fmt(c.t_end));
  put("run.cadence", std::to_string(c.cadence));
  put("run.workers", std::to_string(c.workers));
  put("run.out", c.out);
  put("run.margin_floor", fmt(c.margin_floor));
  put("init.shape", c.shape);
  put("init.center", list_str(c.center));
  put("init.radius", fmt(c.radius));
  put("init.axis", std::to_string(c.axis));
  put("init.a", fmt(c.a));
  put("init.b", fmt(c.b));
  if (!c.center2.empty()) put("init.center2", list_str(c.center2));
  put("init.radius2", fmt(c.radius2));
  put("init.allow_thin_clearance", c.allow_thin_clearance ? "true" : "false");
  put("init.ramp_factor", fmt(c.ramp_factor));
  put("forcing.preset", c.forcing);
  put("forcing.amplitude", fmt(c.amplitude));
  if (!c.u_dir.empty()) put("forcing.u_dir", list_str(c.u_dir));
  put("forcing.mollify", c.mollify ? "true" : "false");
  put("forcing.delta", fmt(c.mollify_delta));
  if (!c.g_file.empty()) put("forcing.g_file", c.g_file);
  if (!c.u_files.empty()) put("forcing.u_files", words_str(c.u_files));
  if (!c.snapshot_times.empty()) put("output.snapshot_times", list_str(c.snapshot_times));
  put("output.pgm", c.pgm ? "true" : "false");
  if (!c.mono_probes.empty()) put("probes.mono", probes_str(c.mono_probes));
  put("probes.interface", c.interface_probe);
  put("verify.tol_scale", fmt(c.tol_scale));
  if (!c.sweep_eps.empty()) put("sweep.eps", list_str(c.sweep_eps));
  put("sweep.t_sample", fmt(c.sweep_t_sample));
  return kv_render(kv);
}

}  // namespace pfmc
