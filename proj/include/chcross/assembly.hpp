#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "chcross/exec.hpp"
#include "chcross/mesh.hpp"
#include "chcross/sparse.hpp"

namespace chcross {

// Per-mesh assembly machinery.
//
// Every matrix assembled through one Assembler shares a single CSR pattern
// (the node adjacency of the mesh), so the time stepper can combine blocks
// slot-by-slot. Assembly is two-phase:
//
//   phase 1: per-element local matrices, embarrassingly parallel;
//   phase 2: per-row gather over the node->element incidence list, which is
//            ordered by ascending element index.
//
// Phase 2 therefore adds each slot's contributions in exactly the order a
// sequential scatter over elements would, making the result bitwise
// independent of the thread count and identical to the serial path.
class Assembler {
 public:
  explicit Assembler(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const CsrPattern>& pattern() const { return pattern_; }

  // Consistent mass matrix: entry (i,j) = <psi_j, psi_i>. SPD; 1^T M 1 = |Omega|.
  SparseMatrix mass(const Exec& ex = Exec::serial()) const;

  // Stiffness matrix: entry (i,j) = <grad psi_j, grad psi_i>. PSD; K 1 = 0.
  SparseMatrix stiffness(const Exec& ex = Exec::serial()) const;

  // Weighted stiffness: entry (i,j) = sum_K (int_K w^p) grad psi_j . grad psi_i
  // with the elementwise weight integral exact for P1 data (p in {1, 2}).
  // With w == 1, p = 1 the result equals stiffness() bitwise.
  SparseMatrix weighted_stiffness(const NodalFunction& w, int p,
                                  const Exec& ex = Exec::serial()) const;

  // Load vector b_i = <g(u), psi_i> with the degree-4 rule (exact for cubic
  // g of a P1 field against a P1 test function).
  std::vector<double> load(const std::function<double(double)>& g,
                           const NodalFunction& u,
                           const Exec& ex = Exec::serial()) const;

  const ElementGeometry& geometry(int e) const {
    return geom_[static_cast<std::size_t>(e)];
  }

 private:
  SparseMatrix gather_matrix(const std::vector<double>& local,
                             const Exec& ex) const;

  const Mesh* mesh_;
  std::shared_ptr<const CsrPattern> pattern_;
  std::vector<ElementGeometry> geom_;
  // Incidence: for node i, entries inc_ptr_[i] .. inc_ptr_[i+1] list the
  // (element, local vertex) pairs containing i, ascending by element.
  std::vector<int> inc_ptr_;
  std::vector<std::array<int, 2>> incidence_;
  // Pattern slot of (row, element-local column) per incidence entry.
  std::vector<int> slot_;
};

// Contract entry points; each builds a transient Assembler.
SparseMatrix assemble_mass(const Mesh& mesh, const Exec& ex = Exec::serial());
SparseMatrix assemble_stiffness(const Mesh& mesh,
                                const Exec& ex = Exec::serial());
SparseMatrix assemble_weighted_stiffness(const Mesh& mesh,
                                         const NodalFunction& w, int p,
                                         const Exec& ex = Exec::serial());
std::vector<double> assemble_load(const Mesh& mesh,
                                  const std::function<double(double)>& g,
                                  const NodalFunction& u,
                                  const Exec& ex = Exec::serial());

// int_Omega g(u(x)) dx with the degree-4 rule; deterministic chunked
// reduction. Used for the potential term of the discrete energy, with the
// same rule as the nonlinear load so the two stay consistent.
double integrate_composed(const Mesh& mesh,
                          const std::function<double(double)>& g,
                          const NodalFunction& u,
                          const Exec& ex = Exec::serial());

}  // namespace chcross
