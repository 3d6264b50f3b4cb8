#include "chcross/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chcross/assembly.hpp"
#include "chcross/block_system.hpp"
#include "chcross/norms.hpp"

namespace chcross {

namespace {

void require_field(const NodalFunction& v) {
  if (v.mesh == nullptr) {
    throw std::invalid_argument("diagnostics: field has no mesh");
  }
}

void require_pair(const State& s_n, const State& s_np1, const Mesh* mesh) {
  if (s_n.phi.mesh != mesh || s_n.c.mesh != mesh || s_np1.phi.mesh != mesh ||
      s_np1.c.mesh != mesh || s_np1.mu.mesh != mesh) {
    throw std::invalid_argument("diagnostics: states live on a different mesh");
  }
}

// Elementwise gradient of a P1 field on element e.
Vec2 element_gradient(const ElementGeometry& geo, const std::array<int, 3>& tri,
                      const std::vector<double>& v) {
  return Vec2{v[tri[0]] * geo.grad[0].x + v[tri[1]] * geo.grad[1].x +
                  v[tri[2]] * geo.grad[2].x,
              v[tri[0]] * geo.grad[0].y + v[tri[1]] * geo.grad[1].y +
                  v[tri[2]] * geo.grad[2].y};
}

struct DissipationParts {
  double flux_sq = 0.0;   // ||grad mu - c^n grad(c^{n+1} - phi^n)||^2
  double cross_sq = 0.0;  // ||grad(c^{n+1} - phi^n)||^2
};

// Both squared norms expand elementwise: all gradients are constant per
// element, so only the exact integrals of c^n and (c^n)^2 enter.
DissipationParts dissipation_parts(const State& s_n, const State& s_np1,
                                   const Exec& ex) {
  const Mesh& mesh = *s_n.phi.mesh;
  const auto& cn = s_n.c.values;
  const auto& phin = s_n.phi.values;
  const auto& cnp1 = s_np1.c.values;
  const auto& mu = s_np1.mu.values;
  const std::size_t ne = static_cast<std::size_t>(mesh.element_count());

  const double flux = chunked_sum(ne, ex, [&](std::size_t e) {
    const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
    const auto& tri = mesh.element(static_cast<int>(e));
    const Vec2 gmu = element_gradient(geo, tri, mu);
    const double w0 = cnp1[tri[0]] - phin[tri[0]];
    const double w1 = cnp1[tri[1]] - phin[tri[1]];
    const double w2 = cnp1[tri[2]] - phin[tri[2]];
    const Vec2 gw{w0 * geo.grad[0].x + w1 * geo.grad[1].x + w2 * geo.grad[2].x,
                  w0 * geo.grad[0].y + w1 * geo.grad[1].y + w2 * geo.grad[2].y};
    const double c0 = cn[tri[0]], c1 = cn[tri[1]], c2 = cn[tri[2]];
    const double int_c = geo.area * (c0 + c1 + c2) / 3.0;
    const double int_c2 = geo.area / 6.0 *
                          (c0 * c0 + c1 * c1 + c2 * c2 + c0 * c1 + c0 * c2 +
                           c1 * c2);
    return geo.area * (gmu.x * gmu.x + gmu.y * gmu.y) -
           2.0 * int_c * (gmu.x * gw.x + gmu.y * gw.y) +
           int_c2 * (gw.x * gw.x + gw.y * gw.y);
  });
  const double cross = chunked_sum(ne, ex, [&](std::size_t e) {
    const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
    const auto& tri = mesh.element(static_cast<int>(e));
    const double w0 = cnp1[tri[0]] - phin[tri[0]];
    const double w1 = cnp1[tri[1]] - phin[tri[1]];
    const double w2 = cnp1[tri[2]] - phin[tri[2]];
    const Vec2 gw{w0 * geo.grad[0].x + w1 * geo.grad[1].x + w2 * geo.grad[2].x,
                  w0 * geo.grad[0].y + w1 * geo.grad[1].y + w2 * geo.grad[2].y};
    return geo.area * (gw.x * gw.x + gw.y * gw.y);
  });
  return DissipationParts{flux, cross};
}

NodalFunction difference(const NodalFunction& a, const NodalFunction& b) {
  NodalFunction d(*a.mesh);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    d.values[i] = a.values[i] - b.values[i];
  }
  return d;
}

}  // namespace

double mass(const NodalFunction& v, const Exec& ex) {
  require_field(v);
  const Mesh& mesh = *v.mesh;
  const auto& vv = v.values;
  return chunked_sum(
      static_cast<std::size_t>(mesh.element_count()), ex, [&](std::size_t e) {
        const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
        const auto& tri = mesh.element(static_cast<int>(e));
        return geo.area * (vv[tri[0]] + vv[tri[1]] + vv[tri[2]]) / 3.0;
      });
}

double mean(const NodalFunction& v, const Exec& ex) {
  require_field(v);
  return mass(v, ex) / v.mesh->area();
}

double energy(const State& s, const SchemeParams& p, const Exec& ex) {
  if (s.phi.mesh != p.mesh || s.c.mesh != p.mesh) {
    throw std::invalid_argument("diagnostics: state lives on a different mesh");
  }
  const double grad_phi = grad_lp_norm(s.phi, 2.0, ex);
  const Potential pot = p.potential;
  const double potential_term = integrate_composed(
      *p.mesh, [&pot](double v) { return pot.value(v); }, s.phi, ex);
  const double c_l2 = lp_norm(s.c, 2.0, ex);
  return 0.5 * grad_phi * grad_phi + potential_term / (p.eps * p.eps) +
         0.5 * c_l2 * c_l2 - l2_inner_product(s.phi, s.c, ex);
}

double dissipation(const State& s_n, const State& s_np1, const SchemeParams& p,
                   const Exec& ex) {
  require_pair(s_n, s_np1, p.mesh);
  const DissipationParts parts = dissipation_parts(s_n, s_np1, ex);
  return p.tau * parts.flux_sq + p.g_const * p.tau * parts.cross_sq;
}

double dissipation_residual(const State& s_n, const State& s_np1,
                            const SchemeParams& p, const Exec& ex) {
  return energy(s_np1, p, ex) - energy(s_n, p, ex) +
         dissipation(s_n, s_np1, p, ex);
}

EnergyRecord record(const State& s_n, const State& s_np1,
                    const SchemeParams& p, const Exec& ex) {
  require_pair(s_n, s_np1, p.mesh);
  EnergyRecord rec;
  rec.step_index = s_np1.step_index;
  rec.t = s_np1.t;
  rec.E = energy(s_np1, p, ex);
  rec.mass_phi = mass(s_np1.phi, ex);
  rec.mass_c = mass(s_np1.c, ex);
  rec.dissipation = dissipation(s_n, s_np1, p, ex);
  rec.mu_mean = mean(s_np1.mu, ex);
  rec.mu_w16_5 = w1_6_5_norm(s_np1.mu, ex);
  return rec;
}

MonitorReport accumulate(MonitorReport report, const EnergyRecord& rec,
                         const State& s_n, const State& s_np1,
                         const SchemeParams& p, const Exec& ex) {
  require_pair(s_n, s_np1, p.mesh);
  const NodalFunction dc = difference(s_np1.c, s_n.c);
  const NodalFunction dphi = difference(s_np1.phi, s_n.phi);
  const double dc_l2 = lp_norm(dc, 2.0, ex);
  const double dphi_grad = grad_lp_norm(dphi, 2.0, ex);
  const DissipationParts parts = dissipation_parts(s_n, s_np1, ex);

  report.step_index = rec.step_index;
  report.sum_dc_sq += dc_l2 * dc_l2;
  report.sum_grad_dphi_sq += dphi_grad * dphi_grad;
  report.sum_flux_sq += p.tau * parts.flux_sq;
  report.sum_cross_sq += p.tau * parts.cross_sq;
  report.sum_mu_w16_5 += p.tau * std::pow(rec.mu_w16_5, 4.0 / 3.0);
  report.sup_phi_h1 = std::max(report.sup_phi_h1, h1_norm(s_np1.phi, ex));
  report.sup_c_l2 = std::max(report.sup_c_l2, lp_norm(s_np1.c, 2.0, ex));

  const Potential pot = p.potential;
  NodalFunction f_phi(*p.mesh);
  for (std::size_t i = 0; i < f_phi.values.size(); ++i) {
    f_phi.values[i] = pot.derivative(s_n.phi.values[i]);
  }
  const double f_l2 = lp_norm(f_phi, 2.0, ex);
  report.max_mu_mean_ratio = std::max(
      report.max_mu_mean_ratio, std::abs(rec.mu_mean) / (f_l2 * f_l2 + 1.0));
  return report;
}

NodalFunction inverse_laplacian(const Mesh& mesh, const NodalFunction& xi,
                                const Exec& ex) {
  require_field(xi);
  if (xi.mesh != &mesh) {
    throw std::invalid_argument("inverse_laplacian: field on a different mesh");
  }
  Assembler assembler(mesh);
  SparseMatrix stiffness = assembler.stiffness(ex);
  const int slot = stiffness.pattern().find(0, 0);
  stiffness.values()[slot] += 1.0;

  const SparseMatrix mass_matrix = assembler.mass(ex);
  std::vector<double> rhs = matvec(mass_matrix, xi.values, ex);
  const double xi_mass = mass(xi, ex);
  const double factor = xi_mass / mesh.area();
  NodalFunction ones(mesh, 1.0);
  const std::vector<double> lumped = matvec(mass_matrix, ones.values, ex);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= factor * lumped[i];

  DirectSolver solver;
  NodalFunction u(mesh, solver.solve(stiffness, rhs));
  const double u_mean = mean(u, ex);
  for (double& v : u.values) v -= u_mean;
  return u;
}

double hminus1_seminorm(const Mesh& mesh, const NodalFunction& xi,
                        const Exec& ex) {
  return grad_lp_norm(inverse_laplacian(mesh, xi, ex), 2.0, ex);
}

struct Diagnostics::Cache {
  Assembler assembler;
  SparseMatrix pinned_stiffness;
  SparseMatrix mass_matrix;
  std::vector<double> lumped;
  DirectSolver solver;

  explicit Cache(const Mesh& mesh)
      : assembler(mesh),
        pinned_stiffness(assembler.stiffness()),
        mass_matrix(assembler.mass()) {
    pinned_stiffness.values()[pinned_stiffness.pattern().find(0, 0)] += 1.0;
    NodalFunction ones(mesh, 1.0);
    lumped = matvec(mass_matrix, ones.values);
  }
};

Diagnostics::Diagnostics(const SchemeParams& p, const Exec& ex)
    : params_(p), exec_(ex) {
  if (p.mesh == nullptr) {
    throw std::invalid_argument("Diagnostics: mesh is required");
  }
}

Diagnostics::~Diagnostics() = default;
Diagnostics::Diagnostics(Diagnostics&&) noexcept = default;
Diagnostics& Diagnostics::operator=(Diagnostics&&) noexcept = default;

double Diagnostics::energy(const State& s) const {
  return chcross::energy(s, params_, exec_);
}

EnergyRecord Diagnostics::record(const State& s_n, const State& s_np1) const {
  return chcross::record(s_n, s_np1, params_, exec_);
}

void Diagnostics::accumulate(MonitorReport& report, const EnergyRecord& rec,
                             const State& s_n, const State& s_np1) const {
  report = chcross::accumulate(report, rec, s_n, s_np1, params_, exec_);
}

NodalFunction Diagnostics::inverse_laplacian(const NodalFunction& xi) {
  require_field(xi);
  if (xi.mesh != params_.mesh) {
    throw std::invalid_argument("inverse_laplacian: field on a different mesh");
  }
  if (!cache_) cache_ = std::make_unique<Cache>(*params_.mesh);

  std::vector<double> rhs = matvec(cache_->mass_matrix, xi.values, exec_);
  const double factor = mass(xi, exec_) / params_.mesh->area();
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    rhs[i] -= factor * cache_->lumped[i];
  }
  NodalFunction u(*params_.mesh,
                  cache_->solver.solve(cache_->pinned_stiffness, rhs));
  const double u_mean = mean(u, exec_);
  for (double& v : u.values) v -= u_mean;
  return u;
}

}  // namespace chcross
