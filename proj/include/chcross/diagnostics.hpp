#pragma once

#include <memory>
#include <vector>

#include "chcross/mesh.hpp"
#include "chcross/stepper.hpp"

namespace chcross {

// Per-step scalar diagnostics of a scheme trajectory.
//
// The discrete energy of a state (phi, c) is
//
//   E = (1/2) ||grad phi||^2 + (1/eps^2) <F(phi), 1>
//     + (1/2) ||c||^2 - <phi, c>,
//
// with <F(phi), 1> integrated by the same degree-4 rule as the nonlinear
// load, so the monitored inequality matches the solved discrete system. The
// dissipation produced by the step (phi^n, c^n) -> (phi^{n+1}, c^{n+1},
// mu^{n+1}) is
//
//   D = tau ||grad mu^{n+1} - c^n grad(c^{n+1} - phi^n)||^2
//     + g tau ||grad(c^{n+1} - phi^n)||^2,
//
// where the first norm expands elementwise with the exact integrals of c^n
// and (c^n)^2 (all gradients are constant per element). For a truncated
// potential with S above half the Lipschitz bound of f, every step satisfies
// E(n+1) - E(n) + D <= 0 up to solver tolerance; dissipation_residual
// evaluates the left-hand side.
struct EnergyRecord {
  int step_index = 0;
  double t = 0.0;
  double E = 0.0;
  double mass_phi = 0.0;  // <phi, 1>
  double mass_c = 0.0;    // <c, 1>
  double dissipation = 0.0;
  double mu_mean = 0.0;
  double mu_w16_5 = 0.0;  // ||mu||_{W^{1,6/5}}
};

// Running a-priori monitor sums over the steps k+1 = 1..N of a run:
//
//   sum ||delta c^{k+1}||^2,            sum ||grad delta phi^{k+1}||^2,
//   sum tau ||grad mu^{k+1} - c^k grad(c^{k+1} - phi^k)||^2,
//   sum tau ||grad(c^{k+1} - phi^k)||^2,
//   sum tau ||mu^{k+1}||_{W^{1,6/5}}^{4/3},
//
// with delta the plain step difference, plus the running suprema of
// ||phi^{k+1}||_{H^1} and ||c^{k+1}|| over the computed states. Every
// contribution is nonnegative, so all sums are nondecreasing in step_index.
// max_mu_mean_ratio additionally tracks |mean(mu^{k+1})| relative to
// ||I_h f(phi^k)||^2 + 1, reported rather than bounded by a fixed constant.
struct MonitorReport {
  int step_index = 0;
  double sum_dc_sq = 0.0;
  double sum_grad_dphi_sq = 0.0;
  double sum_flux_sq = 0.0;
  double sum_cross_sq = 0.0;
  double sum_mu_w16_5 = 0.0;
  double sup_phi_h1 = 0.0;
  double sup_c_l2 = 0.0;
  double max_mu_mean_ratio = 0.0;
};

// <v, 1> and <v, 1>/|Omega|, exact for P1 data (mass-matrix row sums in
// closed form).
double mass(const NodalFunction& v, const Exec& ex = Exec::serial());
double mean(const NodalFunction& v, const Exec& ex = Exec::serial());

double energy(const State& s, const SchemeParams& p,
              const Exec& ex = Exec::serial());
double dissipation(const State& s_n, const State& s_np1, const SchemeParams& p,
                   const Exec& ex = Exec::serial());
double dissipation_residual(const State& s_n, const State& s_np1,
                            const SchemeParams& p,
                            const Exec& ex = Exec::serial());

EnergyRecord record(const State& s_n, const State& s_np1,
                    const SchemeParams& p, const Exec& ex = Exec::serial());
MonitorReport accumulate(MonitorReport report, const EnergyRecord& rec,
                         const State& s_n, const State& s_np1,
                         const SchemeParams& p,
                         const Exec& ex = Exec::serial());

// Discrete inverse Laplacian: returns the mean-free u solving
//
//   <grad u, grad eta> = <xi, eta> - |Omega|^{-1} <xi, 1><eta, 1>
//
// for every basis function eta. The right-hand side is projected mean-free
// (testing with eta = 1 otherwise forces <xi, 1> = 0, which general xi does
// not satisfy), the constant nullspace is pinned during the solve and the
// result re-centered. Linear in xi; constants map to zero.
NodalFunction inverse_laplacian(const Mesh& mesh, const NodalFunction& xi,
                                const Exec& ex = Exec::serial());

// ||grad inverse_laplacian(xi)||: negative-order seminorm of xi, a derived
// diagnostic for step increments.
double hminus1_seminorm(const Mesh& mesh, const NodalFunction& xi,
                        const Exec& ex = Exec::serial());

// Reusable evaluator bound to one parameter set; caches the stiffness
// factorization for repeated inverse_laplacian calls.
class Diagnostics {
 public:
  explicit Diagnostics(const SchemeParams& p, const Exec& ex = Exec::serial());
  ~Diagnostics();
  Diagnostics(Diagnostics&&) noexcept;
  Diagnostics& operator=(Diagnostics&&) noexcept;

  const SchemeParams& params() const { return params_; }

  double energy(const State& s) const;
  EnergyRecord record(const State& s_n, const State& s_np1) const;
  void accumulate(MonitorReport& report, const EnergyRecord& rec,
                  const State& s_n, const State& s_np1) const;
  NodalFunction inverse_laplacian(const NodalFunction& xi);

 private:
  struct Cache;
  SchemeParams params_;
  Exec exec_;
  std::unique_ptr<Cache> cache_;
};

}  // namespace chcross
