#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chcross/diagnostics.hpp"
#include "chcross/mesh.hpp"
#include "chcross/potential.hpp"
#include "chcross/stepper.hpp"

namespace chcross {

enum class StudyMode { temporal, spatial };

// Self-contained refinement study: the reference solution is generated at the
// configured finer resolution, never loaded from outside.
//
// temporal: one shared mesh (n_ref x n_ref); the reference runs at tau_ref
// and every sweep tau runs to the same final time; errors are H^1 norms of
// the final-time differences for phi, c and mu.
//
// spatial: one shared time step tau_ref; the reference runs on the
// n_ref x n_ref mesh and each sweep entry on its own n x n coarsening; the
// reference final state is interpolated onto the coarse mesh (exact at the
// shared nodes of nested meshes) and the errors are H^1 for phi and mu, L^2
// for c.
struct StudyConfig {
  StudyMode mode = StudyMode::temporal;

  double x0 = 0.0;
  double x1 = 6.283185307179586476925286766559;  // 2*pi
  double y0 = 0.0;
  double y1 = 6.283185307179586476925286766559;
  double eps = 0.3;
  double S = 1.0;
  double g_const = 1.0;
  double T = 0.128;
  Potential potential;
  std::function<double(double, double)> phi0;
  std::function<double(double, double)> c0;

  // Reference resolution: tau_ref is the reference time step (temporal) or
  // the shared time step of all runs (spatial); n_ref the mesh resolution.
  double tau_ref = 5e-4;
  int n_ref = 128;

  std::vector<double> sweep_tau = {1e-3, 2e-3, 4e-3, 8e-3, 16e-3};
  std::vector<int> sweep_n = {8, 16, 32, 64, 128};
};

// One study row. resolution is tau (temporal) or the mesh size h (spatial);
// rows are sorted ascending, finest first. The rate entries of a row compare
// it against the next finer row above: rate = log(err / err_finer) /
// log(resolution / resolution_finer), which is log2 of the error ratio under
// 2:1 refinement. The finest row, and any comparison against a zero error,
// leaves the rate empty.
struct RateRow {
  double resolution = 0.0;
  double err_phi_h1 = 0.0;
  double err_c = 0.0;  // H^1 in temporal mode, L^2 in spatial mode
  double err_mu_h1 = 0.0;
  std::optional<double> rate_phi;
  std::optional<double> rate_c;
  std::optional<double> rate_mu;
};

// Optional study byproducts: the a-priori monitor sums of every run, in row
// order, plus the reference run's own monitor.
struct StudyExtras {
  std::vector<MonitorReport> monitors;
  MonitorReport reference_monitor;
};

std::vector<RateRow> temporal_study(const StudyConfig& cfg,
                                    const Exec& ex = Exec::serial(),
                                    StudyExtras* extras = nullptr);
std::vector<RateRow> spatial_study(const StudyConfig& cfg,
                                   const Exec& ex = Exec::serial(),
                                   StudyExtras* extras = nullptr);

// Fills the rate cells of rows already sorted ascending by resolution
// (applied by both studies; usable on hand-built tables as well). The first
// row and any comparison involving a nonpositive or non-finite error get an
// empty rate.
void compute_rates(std::vector<RateRow>& rows);

enum class ErrorColumn { phi, c, mu };

// Least-squares slope of log(err) against log(resolution) over all rows
// (>= 3 required): the one-number observed order of a study table.
double fit_order(const std::vector<RateRow>& rows, ErrorColumn column);

// Post-step snapshots of one field along a run: fields[k] is the state after
// step k+1, at time (k+1)*tau past the trajectory start.
struct Trajectory {
  double tau = 0.0;
  std::vector<NodalFunction> fields;
};

enum class SpaceNorm { l2, h1, grad_l6_5 };

// Discrete L^{p_time}-in-time error between a trajectory and a finer
// reference trajectory sharing the same time grid:
//
//   ( sum_k tau * ||traj_k - ref_{k s}||^{p_time} )^{1/p_time},
//
// where s = tau / tau_ref is the integral subsampling stride; p_time =
// infinity takes the maximum over k instead. The inner norm is L^2, H^1 or
// the L^{6/5} norm of the gradient. Reference fields on a finer mesh are
// interpolated onto the trajectory's mesh first.
double time_aggregated_error(const Trajectory& traj, const Trajectory& traj_ref,
                             double p_time, SpaceNorm norm,
                             const Exec& ex = Exec::serial());

}  // namespace chcross
