#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chcross/convergence.hpp"
#include "chcross/exec.hpp"
#include "chcross/potential.hpp"
#include "chcross/stepper.hpp"

namespace chcross {

// Plain "key = value" run configuration ("#" starts a comment). Unknown keys
// are rejected with their line number. `present` records which keys the
// parsed text actually set, so serialize_config emits exactly those and a
// parse/serialize round trip is key-equivalent to the input.
struct RunConfig {
  double x0 = 0.0;
  double x1 = 6.283185307179586476925286766559;  // 2*pi
  double y0 = 0.0;
  double y1 = 6.283185307179586476925286766559;
  int nx = 128;
  int ny = 128;
  double tau = 1e-3;
  double eps = 0.3;
  double S = 1.0;
  double g = 1.0;
  double T = 0.128;
  std::optional<double> truncation;  // "none" or the radius M
  std::string phi0 = "paper-exp1";   // preset name or expression in x, y
  std::string c0 = "paper-exp1";
  int snapshot_every = 0;            // 0 = no VTK snapshots
  double K1 = 0.125;
  double K2 = 1.0;
  double tau_ref = 5e-4;
  int n_ref = 128;
  std::vector<double> sweep_tau = {1e-3, 2e-3, 4e-3, 8e-3, 16e-3};
  std::vector<int> sweep_n = {8, 16, 32, 64, 128};
  unsigned long seed = 42;
  bool parallel = false;

  std::set<std::string> present;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

Potential make_potential(const RunConfig& cfg);
Exec make_exec(const RunConfig& cfg);

// Initial conditions: the preset name "paper-exp1" selects the packaged
// first-experiment pair 0.05*cos(x)*cos(y) + 0.3 / 0.05*cos(2*x)*cos(2*y)
// + 0.5; anything else is parsed as an expression in x and y.
std::function<double(double, double)> initial_phi(const RunConfig& cfg);
std::function<double(double, double)> initial_c(const RunConfig& cfg);

// The mesh must outlive the returned params.
SchemeParams make_scheme_params(const RunConfig& cfg, const Mesh& mesh);
StudyConfig make_study_config(const RunConfig& cfg, StudyMode mode);

}  // namespace chcross
