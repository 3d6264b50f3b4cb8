#include "chcross/stepper.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chcross {

namespace {

void require_valid(const SchemeParams& p) {
  if (p.mesh == nullptr) {
    throw std::invalid_argument("SchemeParams: mesh is required");
  }
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) {
    throw std::invalid_argument("SchemeParams: tau must be positive");
  }
  if (!(p.eps > 0.0) || !std::isfinite(p.eps)) {
    throw std::invalid_argument("SchemeParams: eps must be positive");
  }
  if (!(p.S >= 0.0)) {
    throw std::invalid_argument("SchemeParams: S must be nonnegative");
  }
  if (!(p.g_const >= 0.0)) {
    throw std::invalid_argument("SchemeParams: g_const must be nonnegative");
  }
}

void require_on_mesh(const State& s, const Mesh& mesh) {
  if (s.phi.mesh != &mesh || s.c.mesh != &mesh || s.mu.mesh != &mesh) {
    throw std::invalid_argument("stepper: state fields live on a different mesh");
  }
}

// Assembles all step blocks and the right-hand side into sys. M and K may be
// any assemblies of p.mesh; the weighted matrices come from `weighted`.
void fill_system(BlockSystem& sys, const State& state, const SchemeParams& p,
                 const SparseMatrix& M, const SparseMatrix& K,
                 const Assembler& weighted, const Exec& ex) {
  const double tau = p.tau;
  const double eps2 = p.eps * p.eps;
  const double g = p.g_const;

  SparseMatrix kc = weighted.weighted_stiffness(state.c, 1, ex);
  SparseMatrix cross = weighted.weighted_stiffness(state.c, 2, ex);
  if (g != 0.0) cross.add_scaled(K, g);

  const std::vector<double>& phi = state.phi.values;
  const std::vector<double>& c = state.c.values;
  const std::vector<double> m_phi = matvec(M, phi, ex);
  const std::vector<double> m_c = matvec(M, c, ex);
  const std::vector<double> kc_phi = matvec(kc, phi, ex);
  const std::vector<double> cross_phi = matvec(cross, phi, ex);
  const Potential pot = p.potential;
  const std::vector<double> bf = weighted.load(
      [&pot](double s) { return pot.derivative(s); }, state.phi, ex);

  const int n = M.nrows();
  double* r_phi = sys.rhs_segment(kPhi);
  double* r_c = sys.rhs_segment(kC);
  double* r_mu = sys.rhs_segment(kMu);
  for (int i = 0; i < n; ++i) {
    r_phi[i] = m_phi[static_cast<std::size_t>(i)] / tau -
               kc_phi[static_cast<std::size_t>(i)];
    r_c[i] = m_c[static_cast<std::size_t>(i)] / tau +
             cross_phi[static_cast<std::size_t>(i)];
    r_mu[i] = bf[static_cast<std::size_t>(i)] / eps2 -
              (p.S / eps2) * m_phi[static_cast<std::size_t>(i)];
  }

  SparseMatrix a00 = M.scaled(1.0 / tau);
  SparseMatrix a01 = kc.scaled(-1.0);
  SparseMatrix a11 = cross;
  a11.add_scaled(M, 1.0 / tau);
  SparseMatrix a12 = std::move(kc);
  a12.scale(-1.0);
  SparseMatrix a20 = K.scaled(-1.0);
  a20.add_scaled(M, -p.S / eps2);

  sys.set_block(kPhi, kPhi, std::move(a00));
  sys.set_block(kPhi, kC, std::move(a01));
  sys.set_block(kPhi, kMu, K);
  sys.set_block(kC, kC, std::move(a11));
  sys.set_block(kC, kMu, std::move(a12));
  sys.set_block(kMu, kPhi, std::move(a20));
  sys.set_block(kMu, kC, M);
  sys.set_block(kMu, kMu, M);
  sys.finalize();
}

State make_state(const Mesh& mesh, std::vector<double> monolithic,
                 const State& prev, double tau) {
  const auto n = static_cast<std::ptrdiff_t>(mesh.node_count());
  State next;
  next.phi = NodalFunction(mesh, std::vector<double>(monolithic.begin(),
                                                     monolithic.begin() + n));
  next.c = NodalFunction(mesh, std::vector<double>(monolithic.begin() + n,
                                                   monolithic.begin() + 2 * n));
  next.mu = NodalFunction(
      mesh, std::vector<double>(monolithic.begin() + 2 * n, monolithic.end()));
  next.t = prev.t + tau;
  next.step_index = prev.step_index + 1;
  return next;
}

const Mesh& checked_mesh(const SchemeParams& p) {
  require_valid(p);
  return *p.mesh;
}

}  // namespace

bool SchemeParams::certified() const {
  if (!potential.truncated()) return false;
  return S > 0.5 * potential.lipschitz_bound();
}

ValidationReport validate_params(const SchemeParams& p) {
  require_valid(p);
  ValidationReport report;
  report.tau_over_h = p.tau / p.mesh->h();

  if (!p.potential.truncated()) {
    report.warnings.push_back(
        "stability not certified: untruncated potential, f has no global "
        "Lipschitz bound");
  } else {
    const double lip = p.potential.lipschitz_bound();
    if (!(p.S > 0.5 * lip)) {
      std::ostringstream os;
      os << "stability not certified: S = " << p.S << " is not above L/2 = "
         << 0.5 * lip;
      report.warnings.push_back(os.str());
    }
    if (!(p.K1 + 2.0 * p.S > lip + 2.0 * p.eps * p.eps)) {
      std::ostringstream os;
      os << "solvability condition K1 + 2S > L + 2*eps^2 fails: "
         << p.K1 + 2.0 * p.S << " <= " << lip + 2.0 * p.eps * p.eps;
      report.warnings.push_back(os.str());
    }
  }
  if (p.T < p.tau) {
    report.warnings.push_back("final time T is below one time step");
  }
  return report;
}

Stepper::Stepper(const SchemeParams& params, const Exec& ex)
    : params_(params),
      exec_(ex),
      assembler_(checked_mesh(params)),
      mass_(assembler_.mass(ex)),
      stiffness_(assembler_.stiffness(ex)),
      system_(params.mesh->node_count()) {}

const BlockSystem& Stepper::build(const State& state_n) {
  require_on_mesh(state_n, *params_.mesh);
  fill_system(system_, state_n, params_, mass_, stiffness_, assembler_, exec_);
  return system_;
}

State Stepper::advance(const State& state_n) {
  build(state_n);
  try {
    std::vector<double> x = solver_.solve(system_);
    return make_state(*params_.mesh, std::move(x), state_n, params_.tau);
  } catch (const SolverError& err) {
    throw StepError(std::string("step ") +
                        std::to_string(state_n.step_index + 1) + ": " +
                        err.what(),
                    err.residual(), state_n.step_index + 1);
  }
}

BlockSystem build_step_system(const State& state_n, const SchemeParams& p,
                              const SparseMatrix& M, const SparseMatrix& K,
                              const Exec& ex) {
  require_valid(p);
  require_on_mesh(state_n, *p.mesh);
  BlockSystem sys(p.mesh->node_count());
  Assembler weighted(*p.mesh);
  fill_system(sys, state_n, p, M, K, weighted, ex);
  return sys;
}

State advance(const State& state_n, const SchemeParams& p, const Exec& ex) {
  Stepper stepper(p, ex);
  return stepper.advance(state_n);
}

State run(const State& initial, const SchemeParams& p,
          const StepObserver& observer, std::optional<int> n_steps,
          const Exec& ex) {
  require_valid(p);
  int steps = 0;
  if (n_steps) {
    if (*n_steps < 0) throw std::invalid_argument("run: negative step count");
    steps = *n_steps;
  } else {
    const double ratio = p.T / p.tau;
    const double rounded = std::round(ratio);
    const double tol =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ratio);
    if (!(std::abs(ratio - rounded) <= tol)) {
      std::ostringstream os;
      os << "run: T/tau = " << ratio
         << " is not an integer step count; pass one explicitly";
      throw std::invalid_argument(os.str());
    }
    steps = static_cast<int>(rounded);
  }

  State state = initial;
  if (steps == 0) return state;
  Stepper stepper(p, ex);
  for (int k = 0; k < steps; ++k) {
    State next = stepper.advance(state);
    if (observer) observer(state, next);
    state = std::move(next);
  }
  return state;
}

}  // namespace chcross
