#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chcross/config.hpp"
#include "chcross/convergence.hpp"
#include "chcross/csv.hpp"
#include "chcross/diagnostics.hpp"
#include "chcross/mesh.hpp"
#include "chcross/norms.hpp"
#include "chcross/stepper.hpp"
#include "chcross/vtk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStrictWarnings = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int snapshot_every = -1;  // -1: take the config value
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--snapshot-every", opts.snapshot_every,
                  "VTK snapshot cadence in steps (0 disables)");
  cmd->add_flag("--strict", opts.strict, "escalate validation warnings");
}

chcross::RunConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return chcross::RunConfig{};
  return chcross::parse_config_file(opts.config_path);
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

// Prints warnings; returns true when --strict demands exit 1.
bool report_warnings(const chcross::ValidationReport& report, bool strict) {
  for (const std::string& w : report.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  return strict && !report.warnings.empty();
}

std::string snapshot_name(const std::string& prefix, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06d.vtk", step);
  return prefix + buf;
}

int run_simulation(const CommonOpts& opts, const chcross::RunConfig& cfg,
                   const chcross::State& initial, const chcross::Mesh& mesh,
                   const std::string& prefix,
                   const std::set<int>* snapshot_steps) {
  const chcross::SchemeParams params = make_scheme_params(cfg, mesh);
  const chcross::Exec ex = make_exec(cfg);
  const chcross::ValidationReport report = validate_params(params);
  if (report_warnings(report, opts.strict)) return kExitStrictWarnings;

  const int cadence =
      opts.snapshot_every >= 0 ? opts.snapshot_every : cfg.snapshot_every;
  const auto want_snapshot = [&](int step) {
    if (snapshot_steps != nullptr) return snapshot_steps->count(step) != 0;
    return cadence > 0 && step % cadence == 0;
  };
  if (want_snapshot(0)) {
    chcross::write_field_vtk(out_path(opts, snapshot_name(prefix, 0)), initial);
  }

  std::vector<chcross::EnergyRecord> records;
  const auto observer = [&](const chcross::State& prev,
                            const chcross::State& next) {
    records.push_back(chcross::record(prev, next, params, ex));
    if (want_snapshot(next.step_index)) {
      chcross::write_field_vtk(
          out_path(opts, snapshot_name(prefix, next.step_index)), next);
    }
  };
  chcross::run(initial, params, observer, std::nullopt, ex);
  chcross::write_energy_csv(out_path(opts, "energy.csv"), records);
  std::cout << "wrote " << out_path(opts, "energy.csv") << " ("
            << records.size() << " steps)\n";
  return kExitOk;
}

int cmd_run(const CommonOpts& opts) {
  const chcross::RunConfig cfg = load_config(opts);
  const chcross::Mesh mesh =
      chcross::build_rect_mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.nx, cfg.ny);
  chcross::State initial;
  initial.phi = chcross::interpolate_nodal(mesh, initial_phi(cfg));
  initial.c = chcross::interpolate_nodal(mesh, initial_c(cfg));
  initial.mu = chcross::NodalFunction(mesh);
  return run_simulation(opts, cfg, initial, mesh, "fields", nullptr);
}

void print_rows(const std::vector<chcross::RateRow>& rows) {
  std::cout << "resolution,err_phi_H1,rate_phi,err_c,rate_c,err_mu_H1,rate_mu\n";
  for (const chcross::RateRow& r : rows) {
    const auto cell = [](const std::optional<double>& v) {
      return v ? chcross::format_double(*v) : std::string("-");
    };
    std::cout << chcross::format_double(r.resolution) << ','
              << chcross::format_double(r.err_phi_h1) << ',' << cell(r.rate_phi)
              << ',' << chcross::format_double(r.err_c) << ',' << cell(r.rate_c)
              << ',' << chcross::format_double(r.err_mu_h1) << ','
              << cell(r.rate_mu) << '\n';
  }
}

int cmd_study(const CommonOpts& opts, chcross::StudyMode mode) {
  chcross::RunConfig cfg = load_config(opts);
  if (mode == chcross::StudyMode::spatial) {
    // Spatial defaults differ from the temporal ones; only explicit keys win.
    if (cfg.present.count("tau_ref") == 0) cfg.tau_ref = 1e-3;
    if (cfg.present.count("n_ref") == 0) cfg.n_ref = 256;
  }
  const chcross::StudyConfig study = make_study_config(cfg, mode);
  const chcross::Exec ex = make_exec(cfg);

  {
    // Validate at the reference resolution before the heavy runs.
    const chcross::Mesh mesh = chcross::build_rect_mesh(
        study.x0, study.x1, study.y0, study.y1, study.n_ref, study.n_ref);
    chcross::SchemeParams params = make_scheme_params(cfg, mesh);
    params.tau = study.tau_ref;
    if (report_warnings(validate_params(params), opts.strict)) {
      return kExitStrictWarnings;
    }
  }

  const bool temporal = mode == chcross::StudyMode::temporal;
  const std::vector<chcross::RateRow> rows =
      temporal ? temporal_study(study, ex) : spatial_study(study, ex);
  const std::string name =
      temporal ? "temporal_rates.csv" : "spatial_rates.csv";
  chcross::write_rate_csv(out_path(opts, name), rows);
  print_rows(rows);
  if (rows.size() >= 3) {
    // A zero-error row (reference resolution inside the sweep) makes the
    // log-log fit undefined; report n/a rather than failing the study.
    const auto fit = [&rows](chcross::ErrorColumn col) -> std::string {
      try {
        return chcross::format_double(chcross::fit_order(rows, col));
      } catch (const std::domain_error&) {
        return "n/a";
      }
    };
    std::cout << "fit_order phi = " << fit(chcross::ErrorColumn::phi)
              << ", c = " << fit(chcross::ErrorColumn::c)
              << ", mu = " << fit(chcross::ErrorColumn::mu) << '\n';
  }
  std::cout << "wrote " << out_path(opts, name) << '\n';
  return kExitOk;
}

int cmd_morphology(const CommonOpts& opts) {
  chcross::RunConfig cfg = load_config(opts);
  // Packaged phase-morphology preset; explicitly configured keys win.
  const auto defaulted = [&cfg](const char* key) {
    return cfg.present.count(key) == 0;
  };
  if (defaulted("nx")) cfg.nx = 128;
  if (defaulted("ny")) cfg.ny = 128;
  if (defaulted("tau")) cfg.tau = 1e-3;
  if (defaulted("T")) cfg.T = 1.0;
  if (defaulted("eps")) cfg.eps = 0.3;
  if (defaulted("S")) cfg.S = 1.0;
  if (defaulted("g")) cfg.g = 0.01;
  if (defaulted("truncation")) cfg.truncation.reset();

  const chcross::Mesh mesh =
      chcross::build_rect_mesh(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.nx, cfg.ny);

  // Random uniform perturbations of the mean pair (0.3, 0.5): all phi values
  // first, then all c values, from one seeded generator.
  std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  chcross::State initial;
  initial.phi = chcross::NodalFunction(mesh);
  initial.c = chcross::NodalFunction(mesh);
  initial.mu = chcross::NodalFunction(mesh);
  for (double& v : initial.phi.values) v = 0.3 + jitter(rng);
  for (double& v : initial.c.values) v = 0.5 + jitter(rng);

  std::set<int> snapshot_steps;
  for (double t : {0.0, 0.4, 0.8, 1.0}) {
    if (t > cfg.T) continue;
    snapshot_steps.insert(static_cast<int>(std::llround(t / cfg.tau)));
  }
  return run_simulation(opts, cfg, initial, mesh, "morphology",
                        &snapshot_steps);
}

bool check(bool ok, const char* what, int& failures) {
  std::cout << (ok ? "pass" : "FAIL") << "  " << what << '\n';
  if (!ok) ++failures;
  return ok;
}

// Small invariant battery on a coarse mesh; seconds, not minutes.
int cmd_selftest() {
  int failures = 0;
  const double two_pi = 6.283185307179586476925286766559;
  const chcross::Mesh mesh =
      chcross::build_rect_mesh(0.0, two_pi, 0.0, two_pi, 16, 16);

  chcross::SchemeParams params;
  params.mesh = &mesh;
  params.tau = 0.05;
  params.eps = 0.3;
  params.S = 3.0;
  params.g_const = 1.0;
  params.T = 0.5;
  params.potential = chcross::Potential(1.5);

  chcross::State state;
  state.phi = chcross::interpolate_nodal(mesh, [](double x, double y) {
    return 0.05 * std::cos(x) * std::cos(y) + 0.3;
  });
  state.c = chcross::interpolate_nodal(mesh, [](double x, double y) {
    return 0.05 * std::cos(2.0 * x) * std::cos(2.0 * y) + 0.5;
  });
  state.mu = chcross::NodalFunction(mesh);

  check(validate_params(params).warnings.empty(),
        "certified parameters raise no warnings", failures);

  const double mass_phi_0 = chcross::mass(state.phi);
  const double mass_c_0 = chcross::mass(state.c);
  const double e_0 = chcross::energy(state, params);
  double max_residual = 0.0;
  double max_mass_drift = 0.0;
  chcross::State previous = state;
  chcross::Stepper stepper(params);
  for (int k = 0; k < 10; ++k) {
    chcross::State next = stepper.advance(previous);
    max_residual = std::max(
        max_residual, chcross::dissipation_residual(previous, next, params));
    max_mass_drift = std::max(
        {max_mass_drift, std::abs(chcross::mass(next.phi) - mass_phi_0),
         std::abs(chcross::mass(next.c) - mass_c_0)});
    previous = std::move(next);
  }
  check(max_mass_drift <= 1e-9 * (1.0 + std::abs(mass_phi_0)),
        "phi and c masses conserved over 10 steps", failures);
  check(max_residual <= 1e-8 * (1.0 + std::abs(e_0)),
        "energy decays at every step (certified parameters)", failures);

  chcross::State flat;
  flat.phi = chcross::NodalFunction(mesh, 0.25);
  flat.c = chcross::NodalFunction(mesh, 0.75);
  flat.mu = chcross::NodalFunction(mesh);
  const chcross::State flat_next = chcross::advance(flat, params);
  double drift = 0.0;
  for (int i = 0; i < mesh.node_count(); ++i) {
    drift = std::max(drift, std::abs(flat_next.phi.values[i] - 0.25));
    drift = std::max(drift, std::abs(flat_next.c.values[i] - 0.75));
  }
  check(drift <= 1e-12, "constant state is a fixed point", failures);

  const chcross::NodalFunction zero(mesh);
  const chcross::NodalFunction lap0 =
      chcross::inverse_laplacian(mesh, zero);
  double lap_max = 0.0;
  for (double v : lap0.values) lap_max = std::max(lap_max, std::abs(v));
  check(lap_max <= 1e-12, "inverse Laplacian of zero is zero", failures);

  if (failures != 0) {
    std::cerr << failures << " selftest check(s) failed\n";
    return kExitRuntime;
  }
  std::cout << "selftest: all checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::set<std::string> known = {"run", "temporal-study", "spatial-study",
                                       "morphology", "selftest"};
  if (argc > 1 && argv[1][0] != '-' && known.count(argv[1]) == 0) {
    std::cerr << "unknown subcommand '" << argv[1] << "'\n"
              << "usage: chcross {run|temporal-study|spatial-study|morphology|"
                 "selftest} [--config PATH] [--out DIR] [--snapshot-every K] "
                 "[--strict]\n";
    return kExitUsage;
  }

  CLI::App app{"Stabilized Cahn-Hilliard cross-diffusion simulator"};
  app.require_subcommand(0, 1);

  CommonOpts run_opts, temporal_opts, spatial_opts, morph_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "single simulation");
  add_common(run_cmd, run_opts);
  CLI::App* temporal_cmd =
      app.add_subcommand("temporal-study", "time-step refinement study");
  add_common(temporal_cmd, temporal_opts);
  CLI::App* spatial_cmd =
      app.add_subcommand("spatial-study", "mesh refinement study");
  add_common(spatial_cmd, spatial_opts);
  CLI::App* morph_cmd =
      app.add_subcommand("morphology", "phase-morphology preset run");
  add_common(morph_cmd, morph_opts);
  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (temporal_cmd->parsed()) {
      return cmd_study(temporal_opts, chcross::StudyMode::temporal);
    }
    if (spatial_cmd->parsed()) {
      return cmd_study(spatial_opts, chcross::StudyMode::spatial);
    }
    if (morph_cmd->parsed()) return cmd_morphology(morph_opts);
    if (selftest_cmd->parsed()) return cmd_selftest();
    std::cout << app.help();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
