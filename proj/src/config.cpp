#include "chcross/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chcross/csv.hpp"
#include "chcross/expr.hpp"

namespace chcross {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              what);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(int line, const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    fail(line, "key '" + key + "' needs a numeric value, got '" + value + "'");
  }
  return v;
}

long long to_int(int line, const std::string& key, const std::string& value) {
  long long v = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    fail(line, "key '" + key + "' needs an integer value, got '" + value + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) items.push_back(item);
  return items;
}

void apply(RunConfig& cfg, int line, const std::string& key,
           const std::string& value) {
  if (key == "x0") cfg.x0 = to_double(line, key, value);
  else if (key == "x1") cfg.x1 = to_double(line, key, value);
  else if (key == "y0") cfg.y0 = to_double(line, key, value);
  else if (key == "y1") cfg.y1 = to_double(line, key, value);
  else if (key == "nx") cfg.nx = static_cast<int>(to_int(line, key, value));
  else if (key == "ny") cfg.ny = static_cast<int>(to_int(line, key, value));
  else if (key == "tau") cfg.tau = to_double(line, key, value);
  else if (key == "eps") cfg.eps = to_double(line, key, value);
  else if (key == "S") cfg.S = to_double(line, key, value);
  else if (key == "g") cfg.g = to_double(line, key, value);
  else if (key == "T") cfg.T = to_double(line, key, value);
  else if (key == "truncation") {
    if (value == "none") cfg.truncation.reset();
    else cfg.truncation = to_double(line, key, value);
  } else if (key == "phi0") cfg.phi0 = value;
  else if (key == "c0") cfg.c0 = value;
  else if (key == "snapshot_every") {
    cfg.snapshot_every = static_cast<int>(to_int(line, key, value));
  } else if (key == "K1") cfg.K1 = to_double(line, key, value);
  else if (key == "K2") cfg.K2 = to_double(line, key, value);
  else if (key == "tau_ref") cfg.tau_ref = to_double(line, key, value);
  else if (key == "n_ref") cfg.n_ref = static_cast<int>(to_int(line, key, value));
  else if (key == "sweep_tau") {
    cfg.sweep_tau.clear();
    for (const std::string& item : split_list(value)) {
      cfg.sweep_tau.push_back(to_double(line, key, item));
    }
  } else if (key == "sweep_n") {
    cfg.sweep_n.clear();
    for (const std::string& item : split_list(value)) {
      cfg.sweep_n.push_back(static_cast<int>(to_int(line, key, item)));
    }
  } else if (key == "seed") {
    cfg.seed = static_cast<unsigned long>(to_int(line, key, value));
  } else if (key == "parallel") {
    if (value == "on") cfg.parallel = true;
    else if (value == "off") cfg.parallel = false;
    else fail(line, "key 'parallel' must be 'on' or 'off', got '" + value + "'");
  } else {
    fail(line, "unknown key '" + key + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(line, "expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for key '" + key + "'");
    apply(cfg, line, key, value);
    cfg.present.insert(key);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  const auto want = [&cfg](const char* key) {
    return cfg.present.count(key) != 0;
  };
  const auto emit = [&os](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  if (want("x0")) emit("x0", format_double(cfg.x0));
  if (want("x1")) emit("x1", format_double(cfg.x1));
  if (want("y0")) emit("y0", format_double(cfg.y0));
  if (want("y1")) emit("y1", format_double(cfg.y1));
  if (want("nx")) emit("nx", std::to_string(cfg.nx));
  if (want("ny")) emit("ny", std::to_string(cfg.ny));
  if (want("tau")) emit("tau", format_double(cfg.tau));
  if (want("eps")) emit("eps", format_double(cfg.eps));
  if (want("S")) emit("S", format_double(cfg.S));
  if (want("g")) emit("g", format_double(cfg.g));
  if (want("T")) emit("T", format_double(cfg.T));
  if (want("truncation")) {
    emit("truncation",
         cfg.truncation ? format_double(*cfg.truncation) : std::string("none"));
  }
  if (want("phi0")) emit("phi0", cfg.phi0);
  if (want("c0")) emit("c0", cfg.c0);
  if (want("snapshot_every")) {
    emit("snapshot_every", std::to_string(cfg.snapshot_every));
  }
  if (want("K1")) emit("K1", format_double(cfg.K1));
  if (want("K2")) emit("K2", format_double(cfg.K2));
  if (want("tau_ref")) emit("tau_ref", format_double(cfg.tau_ref));
  if (want("n_ref")) emit("n_ref", std::to_string(cfg.n_ref));
  if (want("sweep_tau")) {
    std::string joined;
    for (double v : cfg.sweep_tau) {
      if (!joined.empty()) joined += ',';
      joined += format_double(v);
    }
    emit("sweep_tau", joined);
  }
  if (want("sweep_n")) {
    std::string joined;
    for (int v : cfg.sweep_n) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(v);
    }
    emit("sweep_n", joined);
  }
  if (want("seed")) emit("seed", std::to_string(cfg.seed));
  if (want("parallel")) emit("parallel", cfg.parallel ? "on" : "off");
  return os.str();
}

Potential make_potential(const RunConfig& cfg) {
  return cfg.truncation ? Potential(*cfg.truncation) : Potential();
}

Exec make_exec(const RunConfig& cfg) {
  return cfg.parallel ? Exec::openmp() : Exec::serial();
}

namespace {

std::function<double(double, double)> resolve_initial(const std::string& spec,
                                                      const char* preset_expr) {
  if (spec == "paper-exp1") return parse_expression(preset_expr);
  return parse_expression(spec);
}

}  // namespace

std::function<double(double, double)> initial_phi(const RunConfig& cfg) {
  return resolve_initial(cfg.phi0, "0.05*cos(x)*cos(y) + 0.3");
}

std::function<double(double, double)> initial_c(const RunConfig& cfg) {
  return resolve_initial(cfg.c0, "0.05*cos(2*x)*cos(2*y) + 0.5");
}

SchemeParams make_scheme_params(const RunConfig& cfg, const Mesh& mesh) {
  SchemeParams p;
  p.mesh = &mesh;
  p.tau = cfg.tau;
  p.eps = cfg.eps;
  p.S = cfg.S;
  p.g_const = cfg.g;
  p.T = cfg.T;
  p.potential = make_potential(cfg);
  p.K1 = cfg.K1;
  p.K2 = cfg.K2;
  return p;
}

StudyConfig make_study_config(const RunConfig& cfg, StudyMode mode) {
  StudyConfig sc;
  sc.mode = mode;
  sc.x0 = cfg.x0;
  sc.x1 = cfg.x1;
  sc.y0 = cfg.y0;
  sc.y1 = cfg.y1;
  sc.eps = cfg.eps;
  sc.S = cfg.S;
  sc.g_const = cfg.g;
  sc.T = cfg.T;
  sc.potential = make_potential(cfg);
  sc.phi0 = initial_phi(cfg);
  sc.c0 = initial_c(cfg);
  sc.tau_ref = cfg.tau_ref;
  sc.n_ref = cfg.n_ref;
  sc.sweep_tau = cfg.sweep_tau;
  sc.sweep_n = cfg.sweep_n;
  return sc;
}

}  // namespace chcross
