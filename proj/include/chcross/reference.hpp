#pragma once

#include "chcross/mesh.hpp"
#include "chcross/norms.hpp"
#include "chcross/sparse.hpp"

namespace chcross {

// Plain single-threaded reference kernels: element-by-element triplet
// scatter, row-by-row matvec, left-to-right fold reductions. They pin down
// the semantics of the optimized paths -- assembly and matvec must agree
// bitwise, the norms to rounding -- and serve as the benchmark baseline.
SparseMatrix naive_assemble_mass(const Mesh& mesh);
SparseMatrix naive_assemble_stiffness(const Mesh& mesh);
SparseMatrix naive_assemble_weighted_stiffness(const Mesh& mesh,
                                               const NodalFunction& w, int p);

std::vector<double> naive_matvec(const SparseMatrix& A,
                                 const std::vector<double>& x);

double naive_lp_norm(const NodalFunction& v, double p);
double naive_grad_lp_norm(const NodalFunction& v, double p);

}  // namespace chcross
