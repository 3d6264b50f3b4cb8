#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "chcross/block_system.hpp"
#include "chcross/sparse.hpp"
#include "oracles.hpp"

using namespace chcross;

namespace {

SparseMatrix from_dense(const oracle::Dense& D) {
  std::vector<Triplet> ts;
  for (int i = 0; i < static_cast<int>(D.size()); ++i) {
    for (int j = 0; j < static_cast<int>(D[i].size()); ++j) {
      if (D[i][j] != 0.0) ts.push_back({i, j, D[i][j]});
    }
  }
  return SparseMatrix::from_triplets(static_cast<int>(D.size()),
                                     static_cast<int>(D.size()), ts);
}

oracle::Dense random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  oracle::Dense B(n, std::vector<double>(n, 0.0));
  for (auto& row : B) {
    for (double& v : row) v = dist(rng);
  }
  oracle::Dense A(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = i == j ? static_cast<double>(n) : 0.0;
      for (int k = 0; k < n; ++k) s += B[k][i] * B[k][j];
      A[i][j] = s;
    }
  }
  return A;
}

}  // namespace

TEST_SUITE("sparse") {

TEST_CASE("from_triplets sums duplicates and sorts columns") {
  const SparseMatrix A = SparseMatrix::from_triplets(
      2, 3, {{1, 2, 0.5}, {0, 1, 1.0}, {0, 1, 2.0}, {1, 0, -1.0}});
  CHECK(A.nrows() == 2);
  CHECK(A.ncols() == 3);
  CHECK(A.nnz() == 3);
  CHECK(A.coeff(0, 1) == 3.0);
  CHECK(A.coeff(1, 0) == -1.0);
  CHECK(A.coeff(1, 2) == 0.5);
  CHECK(A.coeff(0, 0) == 0.0);  // structural zero
  const auto& ci = A.pattern().col_idx();
  for (int i = 0; i < A.nrows(); ++i) {
    for (int k = A.pattern().row_ptr()[i] + 1; k < A.pattern().row_ptr()[i + 1];
         ++k) {
      CHECK(ci[k - 1] < ci[k]);
    }
  }
}

TEST_CASE("from_triplets validates indices and values") {
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, -1, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SparseMatrix::from_triplets(
          2, 2, {{0, 0, std::numeric_limits<double>::quiet_NaN()}}),
      std::invalid_argument);
}

TEST_CASE("matvec: identity, zero and a dense cross-check") {
  const SparseMatrix I =
      SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  const std::vector<double> x = {0.25, -3.0, 7.5};
  CHECK(matvec(I, x) == x);

  const SparseMatrix Z = SparseMatrix::from_triplets(3, 3, {});
  for (double v : matvec(Z, x)) CHECK(v == 0.0);

  const oracle::Dense D = {{2.0, 1.0}, {1.0, 2.0}};
  const SparseMatrix A = from_dense(D);
  const std::vector<double> ones = {1.0, 1.0};
  const std::vector<double> y = matvec(A, ones);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 3.0);
  CHECK(y == oracle::dense_matvec(D, ones));
}

TEST_CASE("matvec rejects a dimension mismatch") {
  const SparseMatrix A = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
  CHECK_THROWS_AS(matvec(A, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("add_scaled accepts equal structure, rejects different structure") {
  const SparseMatrix A =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  SparseMatrix B =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 10.0}, {1, 1, 20.0}});
  B.add_scaled(A, 0.5);  // distinct pattern objects, identical structure
  CHECK(B.coeff(0, 0) == 10.5);
  CHECK(B.coeff(1, 1) == 21.0);

  SparseMatrix C = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  CHECK_THROWS_AS(C.add_scaled(A, 1.0), std::invalid_argument);
}

TEST_CASE("scale and scaled") {
  SparseMatrix A = SparseMatrix::from_triplets(1, 1, {{0, 0, 3.0}});
  const SparseMatrix B = A.scaled(-2.0);
  CHECK(B.coeff(0, 0) == -6.0);
  CHECK(A.coeff(0, 0) == 3.0);
  A.scale(0.5);
  CHECK(A.coeff(0, 0) == 1.5);
}

TEST_CASE("relative_residual is zero for an exact solution") {
  const SparseMatrix I =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  const std::vector<double> b = {2.0, -3.0};
  CHECK(relative_residual(I, b, b) == 0.0);
}

TEST_CASE("matrix market dump") {
  const SparseMatrix A =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.5}, {1, 0, -2.0}, {1, 1, 4.0}});
  std::ostringstream os;
  write_matrix_market(A, os);
  CHECK(os.str() ==
        "%%MatrixMarket matrix coordinate real general\n"
        "2 2 3\n"
        "1 1 1.5\n"
        "2 1 -2\n"
        "2 2 4\n");
}

TEST_CASE("solver: diagonal system") {
  const SparseMatrix A = SparseMatrix::from_triplets(
      3, 3, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 4.0}});
  DirectSolver solver;
  const std::vector<double> x = solver.solve(A, {2.0, 3.0, 4.0});
  for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(solver.last_residual() <= DirectSolver::residual_tolerance());
}

TEST_CASE("solver matches a dense LU oracle on a random SPD system") {
  const oracle::Dense D = random_spd(10, 20240817u);
  const SparseMatrix A = from_dense(D);
  std::vector<double> b(10);
  for (int i = 0; i < 10; ++i) b[i] = std::sin(1.0 + i);

  DirectSolver solver;
  const std::vector<double> x = solver.solve(A, b);
  const std::vector<double> x_oracle = oracle::dense_solve(D, b);
  for (int i = 0; i < 10; ++i) {
    CHECK(x[i] == doctest::Approx(x_oracle[i]).epsilon(1e-10));
  }
}

TEST_CASE("solver is deterministic") {
  const oracle::Dense D = random_spd(10, 7u);
  const SparseMatrix A = from_dense(D);
  std::vector<double> b(10);
  for (int i = 0; i < 10; ++i) b[i] = std::cos(0.5 * i) - 0.2;
  DirectSolver s1, s2;
  const std::vector<double> x1 = s1.solve(A, b);
  const std::vector<double> x2 = s2.solve(A, b);
  CHECK(x1 == x2);  // bitwise
  const std::vector<double> x3 = s1.solve(A, b);  // reused factorization path
  CHECK(x1 == x3);
}

TEST_CASE("reported residual matches an independent recomputation") {
  const oracle::Dense D = random_spd(10, 99u);
  const SparseMatrix A = from_dense(D);
  std::vector<double> b(10, 1.0);
  DirectSolver solver;
  const std::vector<double> x = solver.solve(A, b);
  const double again = relative_residual(A, x, b);
  CHECK(std::abs(solver.last_residual() - again) <= 1e-14);
  CHECK(solver.last_residual() <= 1e-10);
}

TEST_CASE("solver reports singular systems") {
  const SparseMatrix A = SparseMatrix::from_triplets(
      2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  DirectSolver solver;
  CHECK_THROWS_AS(solver.solve(A, {1.0, 2.0}), SolverError);
}

TEST_CASE("solver validates shapes") {
  const SparseMatrix R = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
  DirectSolver solver;
  CHECK_THROWS_AS(solver.solve(R, {1.0, 2.0}), std::invalid_argument);
  const SparseMatrix A = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0},
                                                            {1, 1, 1.0}});
  CHECK_THROWS_AS(solver.solve(A, {1.0}), std::invalid_argument);
}

TEST_CASE("block system composes blocks at their offsets") {
  const SparseMatrix M =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 0.5}, {1, 1, 3.0}});
  const SparseMatrix K =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 0, -1.0}});
  BlockSystem sys(2);
  sys.set_block(kPhi, kPhi, M);
  sys.set_block(kPhi, kMu, K);
  sys.set_block(kMu, kC, M.scaled(-1.0));
  sys.finalize();
  const SparseMatrix& A = sys.matrix();
  CHECK(A.nrows() == 6);
  CHECK(A.ncols() == 6);
  CHECK(A.coeff(0, 0) == 2.0);
  CHECK(A.coeff(0, 1) == 0.5);
  CHECK(A.coeff(1, 1) == 3.0);
  CHECK(A.coeff(0, 4) == 1.0);   // K block lives at column offset 2*n
  CHECK(A.coeff(1, 4) == -1.0);
  CHECK(A.coeff(4, 2) == -2.0);  // (mu, c) block at rows 4.., cols 2..
  CHECK(A.coeff(4, 3) == -0.5);
  CHECK(A.coeff(0, 2) == 0.0);   // absent block stays structurally empty
  CHECK_FALSE(sys.has_block(kPhi, kC));
  CHECK(sys.has_block(kPhi, kPhi));
}

TEST_CASE("block system validates access and dimensions") {
  BlockSystem sys(2);
  CHECK_THROWS_AS(sys.matrix(), std::logic_error);  // finalize not called
  CHECK_THROWS_AS(sys.set_block(3, 0, SparseMatrix()), std::invalid_argument);
  const SparseMatrix bad = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}});
  CHECK_THROWS_AS(sys.set_block(0, 0, bad), std::invalid_argument);
  CHECK_THROWS_AS(BlockSystem(0), std::invalid_argument);
}

TEST_CASE("block rhs segments address the stacked vector") {
  BlockSystem sys(2);
  sys.rhs_segment(kPhi)[0] = 1.0;
  sys.rhs_segment(kC)[1] = 2.0;
  sys.rhs_segment(kMu)[0] = 3.0;
  const std::vector<double>& r = sys.rhs();
  REQUIRE(r.size() == 6);
  CHECK(r[0] == 1.0);
  CHECK(r[3] == 2.0);
  CHECK(r[4] == 3.0);
}

TEST_CASE("block solve agrees with the dense oracle") {
  // Assemble a small nonsymmetric block system and compare the monolithic
  // solve against dense LU on the composed matrix.
  const SparseMatrix M =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0},
                                         {1, 1, 5.0}});
  const SparseMatrix K =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  BlockSystem sys(2);
  sys.set_block(kPhi, kPhi, M);
  sys.set_block(kPhi, kMu, K);
  sys.set_block(kC, kC, M);
  sys.set_block(kC, kMu, K.scaled(-0.5));
  sys.set_block(kMu, kPhi, K.scaled(-1.0));
  sys.set_block(kMu, kC, M.scaled(0.25));
  sys.set_block(kMu, kMu, M);
  for (int i = 0; i < 6; ++i) sys.rhs()[i] = 1.0 + i;
  sys.finalize();

  oracle::Dense D(6, std::vector<double>(6, 0.0));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) D[i][j] = sys.matrix().coeff(i, j);
  }
  DirectSolver solver;
  const std::vector<double> x = solver.solve(sys);
  const std::vector<double> y = oracle::dense_solve(D, sys.rhs());
  for (int i = 0; i < 6; ++i) {
    CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-10));
  }
}

TEST_CASE("finalize refreshes values without rebuilding the pattern") {
  const SparseMatrix M =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 3.0}});
  BlockSystem sys(2);
  sys.set_block(kPhi, kPhi, M);
  sys.finalize();
  const CsrPattern* before = &sys.matrix().pattern();
  sys.set_block(kPhi, kPhi, M.scaled(10.0));
  sys.finalize();
  CHECK(&sys.matrix().pattern() == before);  // symbolic composition reused
  CHECK(sys.matrix().coeff(0, 0) == 20.0);
  CHECK(sys.matrix().coeff(1, 1) == 30.0);
}

}  // TEST_SUITE
