#pragma once

#include "chcross/exec.hpp"
#include "chcross/mesh.hpp"

namespace chcross {

// Discrete L^p and W^{1,p} norms of P1 fields.
//
// grad_lp_norm is exact in closed form (the gradient is constant per
// element). lp_norm uses elementwise quadrature: exact up to degree
// ceil(p)+1 for integer p, and the degree-4 rule applied to |v|^p otherwise.
// All reductions are deterministic chunked sums.
double lp_norm(const NodalFunction& v, double p, const Exec& ex = Exec::serial());
double grad_lp_norm(const NodalFunction& v, double p,
                    const Exec& ex = Exec::serial());

// (||v||_{L2}^2 + ||grad v||_{L2}^2)^{1/2}
double h1_norm(const NodalFunction& v, const Exec& ex = Exec::serial());

// (||v||_{6/5}^{6/5} + ||grad v||_{6/5}^{6/5})^{5/6}
double w1_6_5_norm(const NodalFunction& v, const Exec& ex = Exec::serial());

// <u, v>_{L2}, exact for P1 data (elementwise closed form).
double l2_inner_product(const NodalFunction& u, const NodalFunction& v,
                        const Exec& ex = Exec::serial());

}  // namespace chcross
