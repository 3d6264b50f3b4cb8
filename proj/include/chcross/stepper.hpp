#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chcross/assembly.hpp"
#include "chcross/block_system.hpp"
#include "chcross/mesh.hpp"
#include "chcross/potential.hpp"

namespace chcross {

// One-step driver of the stabilized cross-diffusion scheme.
//
// Given (phi^n, c^n) in the P1 space, a single step finds
// (phi^{n+1}, c^{n+1}, mu^{n+1}) solving, for all P1 test functions
// xi, eta, psi:
//
//   (1/tau)(phi^{n+1} - phi^n, xi) - (c^n grad(c^{n+1} - phi^n), grad xi)
//                                  + (grad mu^{n+1}, grad xi)           = 0,
//
//   (1/tau)(c^{n+1} - c^n, eta) + ((c^n)^2 grad(c^{n+1} - phi^n), grad eta)
//                               + g (grad(c^{n+1} - phi^n), grad eta)
//                               - (c^n grad mu^{n+1}, grad eta)         = 0,
//
//   (mu^{n+1}, psi) = (grad phi^{n+1}, grad psi) + (1/eps^2)(f(phi^n), psi)
//                   + (S/eps^2)(phi^{n+1} - phi^n, psi) - (c^{n+1}, psi),
//
// where f = F' is the (possibly truncated) double-well derivative, S >= 0 the
// stabilization constant and g >= 0 the constant mobility. The nonlinearity
// is lagged and the weights c^n are explicit, so each step is ONE coupled
// linear solve; with M the mass matrix, K the stiffness matrix and K_c, K_c2
// the stiffness matrices weighted by the exact elementwise integrals of c^n
// and (c^n)^2, the matrix blocks over the unknown ordering (phi, c, mu) are
//
//   [ (1/tau) M            -K_c                 K  ]
//   [  0                   (1/tau) M + K_c2 + gK   -K_c ]
//   [ -K - (S/eps^2) M      M                   M  ]
//
// with right-hand side
//
//   [ (1/tau) M phi^n - K_c phi^n ]
//   [ (1/tau) M c^n + (K_c2 + gK) phi^n ]
//   [ (1/eps^2) b(f, phi^n) - (S/eps^2) M phi^n ],   b_i(f, u) = <f(u), psi_i>.
//
// Both rows phi and c conserve mass exactly (each row of K, K_c, K_c2 sums
// against the constant test function to zero), and for a truncated potential
// with S above half the Lipschitz bound of f the discrete energy decays at
// every step.
struct SchemeParams {
  const Mesh* mesh = nullptr;
  double tau = 1e-3;    // time step, > 0
  double eps = 0.3;     // interface parameter, > 0
  double S = 1.0;       // stabilization, >= 0
  double g_const = 1.0; // constant mobility, >= 0
  double T = 0.128;     // final time
  Potential potential;  // untruncated by default

  // Scalars of the discrete solvability condition K1 + 2 S > L + 2 eps^2
  // checked by validate_params (advisory only).
  double K1 = 0.125;
  double K2 = 1.0;

  // True when the per-step energy decay is certified: truncated potential
  // with S strictly above L/2 for L the Lipschitz bound of f.
  bool certified() const;
};

struct State {
  NodalFunction phi;
  NodalFunction c;
  NodalFunction mu;
  double t = 0.0;
  int step_index = 0;
};

struct ValidationReport {
  std::vector<std::string> warnings;
  double tau_over_h = 0.0;
};

// Sanity-checks parameters. Throws std::invalid_argument for structurally
// invalid values (non-positive tau or eps, negative S or g, missing mesh);
// everything else is reported as warnings: "stability not certified" when the
// per-step energy decay has no certificate, and a note when the solvability
// condition K1 + 2 S > L + 2 eps^2 fails under the configured scalars.
ValidationReport validate_params(const SchemeParams& p);

// Solver failure inside the time loop; carries the 1-based index of the step
// being computed along with the achieved residual.
class StepError : public SolverError {
 public:
  StepError(const std::string& message, double residual, int step_index)
      : SolverError(message, residual), step_index_(step_index) {}
  int step_index() const { return step_index_; }

 private:
  int step_index_;
};

// Reusable step driver: caches the assembler, M, K, the block composition and
// the solver's symbolic analysis across steps. Only the weighted matrices
// K_c, K_c2 are reassembled from c^n each step.
class Stepper {
 public:
  explicit Stepper(const SchemeParams& params, const Exec& ex = Exec::serial());

  const SchemeParams& params() const { return params_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }

  // Assembles the one-step system for state_n into the internal BlockSystem.
  const BlockSystem& build(const State& state_n);

  // One step: build + solve. Throws StepError on solver failure.
  State advance(const State& state_n);

 private:
  SchemeParams params_;
  Exec exec_;
  Assembler assembler_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  BlockSystem system_;
  DirectSolver solver_;
};

// Contract entry points. The free build_step_system takes precomputed M and K
// (any assembly of the same mesh) and assembles the weighted blocks itself.
BlockSystem build_step_system(const State& state_n, const SchemeParams& p,
                              const SparseMatrix& M, const SparseMatrix& K,
                              const Exec& ex = Exec::serial());

State advance(const State& state_n, const SchemeParams& p,
              const Exec& ex = Exec::serial());

// Per-step hook; receives the states on both ends of the step just taken.
using StepObserver = std::function<void(const State& prev, const State& next)>;

// Runs N steps from `initial`, invoking the observer after each. N is the
// explicit count when given; otherwise T/tau, which must be integral to
// floating-point accuracy (the run refuses to adjust tau silently).
State run(const State& initial, const SchemeParams& p,
          const StepObserver& observer = {},
          std::optional<int> n_steps = std::nullopt,
          const Exec& ex = Exec::serial());

}  // namespace chcross
