#include "chcross/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "chcross/norms.hpp"

namespace chcross {

namespace {

bool integral_ratio(double a, double b, long long* out) {
  const double ratio = a / b;
  const double rounded = std::round(ratio);
  const double tol =
      16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ratio);
  if (!(std::abs(ratio - rounded) <= tol) || rounded < 1.0) return false;
  if (out != nullptr) *out = static_cast<long long>(rounded);
  return true;
}

void require_initials(const StudyConfig& cfg) {
  if (!cfg.phi0 || !cfg.c0) {
    throw std::invalid_argument("study: initial conditions are required");
  }
  if (!(cfg.tau_ref > 0.0) || cfg.n_ref <= 0) {
    throw std::invalid_argument("study: reference resolution must be positive");
  }
}

SchemeParams base_params(const StudyConfig& cfg, const Mesh& mesh, double tau) {
  SchemeParams p;
  p.mesh = &mesh;
  p.tau = tau;
  p.eps = cfg.eps;
  p.S = cfg.S;
  p.g_const = cfg.g_const;
  p.T = cfg.T;
  p.potential = cfg.potential;
  return p;
}

State initial_state(const StudyConfig& cfg, const Mesh& mesh) {
  State s;
  s.phi = interpolate_nodal(mesh, cfg.phi0);
  s.c = interpolate_nodal(mesh, cfg.c0);
  s.mu = NodalFunction(mesh);
  return s;
}

State run_to_final(const SchemeParams& params, const State& init, int n_steps,
                   MonitorReport* monitor, const Exec& ex) {
  StepObserver observer;
  if (monitor != nullptr) {
    *monitor = MonitorReport{};
    observer = [monitor, &params, &ex](const State& prev, const State& next) {
      const EnergyRecord rec = record(prev, next, params, ex);
      *monitor = accumulate(*monitor, rec, prev, next, params, ex);
    };
  }
  return run(init, params, observer, n_steps, ex);
}

NodalFunction subtract(const NodalFunction& a, const NodalFunction& b) {
  NodalFunction d(*a.mesh);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    d.values[i] = a.values[i] - b.values[i];
  }
  return d;
}

std::optional<double> rate_between(double err_coarse, double res_coarse,
                                   double err_fine, double res_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0) ||
      !std::isfinite(err_coarse) || !std::isfinite(err_fine)) {
    return std::nullopt;
  }
  return std::log(err_coarse / err_fine) / std::log(res_coarse / res_fine);
}

int checked_step_count(double T, double tau, const char* what) {
  long long steps = 0;
  if (!integral_ratio(T, tau, &steps)) {
    std::ostringstream os;
    os << what << " " << tau << " does not divide T = " << T
       << " into an integer number of steps";
    throw std::invalid_argument(os.str());
  }
  return static_cast<int>(steps);
}

}  // namespace

void compute_rates(std::vector<RateRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const RateRow& finer = rows[i - 1];
    RateRow& row = rows[i];
    row.rate_phi = rate_between(row.err_phi_h1, row.resolution,
                                finer.err_phi_h1, finer.resolution);
    row.rate_c =
        rate_between(row.err_c, row.resolution, finer.err_c, finer.resolution);
    row.rate_mu = rate_between(row.err_mu_h1, row.resolution, finer.err_mu_h1,
                               finer.resolution);
  }
}

std::vector<RateRow> temporal_study(const StudyConfig& cfg, const Exec& ex,
                                    StudyExtras* extras) {
  require_initials(cfg);
  if (cfg.sweep_tau.empty()) {
    throw std::invalid_argument("temporal study: empty sweep");
  }
  std::vector<double> sweep = cfg.sweep_tau;
  std::sort(sweep.begin(), sweep.end());
  const int ref_steps = checked_step_count(cfg.T, cfg.tau_ref, "reference tau");
  for (double tau : sweep) {
    if (!(tau >= cfg.tau_ref)) {
      throw std::invalid_argument(
          "temporal study: sweep tau finer than the reference");
    }
    checked_step_count(cfg.T, tau, "sweep tau");
  }

  const Mesh mesh = build_rect_mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.n_ref,
                                    cfg.n_ref);
  const State init = initial_state(cfg, mesh);

  MonitorReport ref_monitor;
  const SchemeParams ref_params = base_params(cfg, mesh, cfg.tau_ref);
  const State ref_final =
      run_to_final(ref_params, init, ref_steps,
                   extras != nullptr ? &ref_monitor : nullptr, ex);

  std::vector<RateRow> rows;
  if (extras != nullptr) {
    extras->monitors.clear();
    extras->reference_monitor = ref_monitor;
  }
  for (double tau : sweep) {
    const SchemeParams params = base_params(cfg, mesh, tau);
    MonitorReport monitor;
    const int steps = checked_step_count(cfg.T, tau, "sweep tau");
    const State final_state = run_to_final(
        params, init, steps, extras != nullptr ? &monitor : nullptr, ex);

    RateRow row;
    row.resolution = tau;
    row.err_phi_h1 = h1_norm(subtract(final_state.phi, ref_final.phi), ex);
    row.err_c = h1_norm(subtract(final_state.c, ref_final.c), ex);
    row.err_mu_h1 = h1_norm(subtract(final_state.mu, ref_final.mu), ex);
    rows.push_back(row);
    if (extras != nullptr) extras->monitors.push_back(monitor);
  }
  compute_rates(rows);
  return rows;
}

std::vector<RateRow> spatial_study(const StudyConfig& cfg, const Exec& ex,
                                   StudyExtras* extras) {
  require_initials(cfg);
  if (cfg.sweep_n.empty()) {
    throw std::invalid_argument("spatial study: empty sweep");
  }
  std::vector<int> sweep = cfg.sweep_n;
  std::sort(sweep.begin(), sweep.end(), std::greater<int>());
  for (int n : sweep) {
    if (n <= 0 || n > cfg.n_ref || cfg.n_ref % n != 0) {
      throw std::invalid_argument(
          "spatial study: sweep mesh is not a nested coarsening of the "
          "reference");
    }
  }
  const int steps = checked_step_count(cfg.T, cfg.tau_ref, "shared tau");

  const Mesh ref_mesh = build_rect_mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1,
                                        cfg.n_ref, cfg.n_ref);
  const SchemeParams ref_params = base_params(cfg, ref_mesh, cfg.tau_ref);
  MonitorReport ref_monitor;
  const State ref_final =
      run_to_final(ref_params, initial_state(cfg, ref_mesh), steps,
                   extras != nullptr ? &ref_monitor : nullptr, ex);

  std::vector<RateRow> rows;
  if (extras != nullptr) {
    extras->monitors.clear();
    extras->reference_monitor = ref_monitor;
  }
  for (int n : sweep) {
    const Mesh mesh = build_rect_mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, n, n);
    const SchemeParams params = base_params(cfg, mesh, cfg.tau_ref);
    MonitorReport monitor;
    const State final_state =
        run_to_final(params, initial_state(cfg, mesh), steps,
                     extras != nullptr ? &monitor : nullptr, ex);

    const NodalFunction phi_ref = transfer_to_mesh(ref_final.phi, mesh);
    const NodalFunction c_ref = transfer_to_mesh(ref_final.c, mesh);
    const NodalFunction mu_ref = transfer_to_mesh(ref_final.mu, mesh);

    RateRow row;
    row.resolution = mesh.h();
    row.err_phi_h1 = h1_norm(subtract(final_state.phi, phi_ref), ex);
    row.err_c = lp_norm(subtract(final_state.c, c_ref), 2.0, ex);
    row.err_mu_h1 = h1_norm(subtract(final_state.mu, mu_ref), ex);
    rows.push_back(row);
    if (extras != nullptr) extras->monitors.push_back(monitor);
  }
  compute_rates(rows);
  return rows;
}

double fit_order(const std::vector<RateRow>& rows, ErrorColumn column) {
  if (rows.size() < 3) {
    throw std::invalid_argument("fit_order: at least 3 rows required");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(rows.size());
  for (const RateRow& row : rows) {
    const double err = column == ErrorColumn::phi  ? row.err_phi_h1
                       : column == ErrorColumn::c ? row.err_c
                                                  : row.err_mu_h1;
    if (!(err > 0.0) || !(row.resolution > 0.0)) {
      throw std::domain_error("fit_order: nonpositive error or resolution");
    }
    const double x = std::log(row.resolution);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double time_aggregated_error(const Trajectory& traj, const Trajectory& traj_ref,
                             double p_time, SpaceNorm norm, const Exec& ex) {
  if (traj.fields.empty() || traj_ref.fields.empty()) {
    throw std::invalid_argument("time_aggregated_error: empty trajectory");
  }
  const bool max_in_time = std::isinf(p_time);
  if (!max_in_time && !(p_time >= 1.0)) {
    throw std::invalid_argument("time_aggregated_error: p_time must be >= 1");
  }
  long long stride = 0;
  if (!integral_ratio(traj.tau, traj_ref.tau, &stride)) {
    throw std::invalid_argument(
        "time_aggregated_error: time grids are not nested");
  }
  if (traj_ref.fields.size() != traj.fields.size() * stride) {
    throw std::invalid_argument(
        "time_aggregated_error: trajectories cover different time spans");
  }

  const Mesh* mesh = traj.fields.front().mesh;
  double sum = 0.0;
  double sup = 0.0;
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    const NodalFunction& ref_field =
        traj_ref.fields[(k + 1) * static_cast<std::size_t>(stride) - 1];
    const NodalFunction ref_here = ref_field.mesh == mesh
                                       ? ref_field
                                       : transfer_to_mesh(ref_field, *mesh);
    const NodalFunction diff = subtract(traj.fields[k], ref_here);
    double inner = 0.0;
    switch (norm) {
      case SpaceNorm::l2:
        inner = lp_norm(diff, 2.0, ex);
        break;
      case SpaceNorm::h1:
        inner = h1_norm(diff, ex);
        break;
      case SpaceNorm::grad_l6_5:
        inner = grad_lp_norm(diff, 6.0 / 5.0, ex);
        break;
    }
    if (max_in_time) {
      sup = std::max(sup, inner);
    } else {
      sum += traj.tau * std::pow(inner, p_time);
    }
  }
  return max_in_time ? sup : std::pow(sum, 1.0 / p_time);
}

}  // namespace chcross
