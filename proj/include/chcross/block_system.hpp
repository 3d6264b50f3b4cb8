#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "chcross/sparse.hpp"

namespace chcross {

// Field slots in the monolithic unknown ordering (contiguous by field).
inline constexpr int kPhi = 0;
inline constexpr int kC = 1;
inline constexpr int kMu = 2;

// One coupled 3x3-block linear system over the unknown ordering (phi, c, mu).
// Blocks are node_count x node_count scalar matrices; absent blocks are
// structural zeros. finalize() concatenates the block patterns into one
// monolithic matrix of size 3*node_count; when called again with the same
// block pattern objects it only refreshes the values, so the symbolic
// composition is paid once per pattern.
class BlockSystem {
 public:
  explicit BlockSystem(int node_count);

  int node_count() const { return n_; }

  void set_block(int bi, int bj, SparseMatrix block);
  bool has_block(int bi, int bj) const;
  const SparseMatrix& block(int bi, int bj) const;

  std::vector<double>& rhs() { return rhs_; }
  const std::vector<double>& rhs() const { return rhs_; }
  double* rhs_segment(int bi) { return rhs_.data() + bi * n_; }
  const double* rhs_segment(int bi) const { return rhs_.data() + bi * n_; }

  void finalize();
  bool finalized() const { return !matrix_.empty(); }
  const SparseMatrix& matrix() const;

 private:
  static int index(int bi, int bj);

  int n_ = 0;
  std::array<SparseMatrix, 9> blocks_;
  std::vector<double> rhs_;
  SparseMatrix matrix_;
  // Symbolic composition cache: the pattern object of each block at the last
  // finalize, and per block the monolithic value offset of each of its rows.
  std::array<const CsrPattern*, 9> composed_{};
  std::array<std::vector<int>, 9> row_offset_;
};

// Raised when the direct factorization fails or the verified residual of a
// solve exceeds the contract tolerance. Carries the achieved relative
// residual (infinite when no solution was produced at all).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double residual)
      : std::runtime_error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Sequential sparse LU with reusable symbolic analysis. Every solve verifies
// the relative residual ||Ax - b||_2 / max(1, ||b||_2) with an independent
// matvec and throws SolverError when it exceeds residual_tolerance(). Two
// solves of the same finalized system produce identical bit patterns.
class DirectSolver {
 public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  std::vector<double> solve(const SparseMatrix& A, const std::vector<double>& b);
  std::vector<double> solve(const BlockSystem& sys);

  // Relative residual achieved by the most recent successful solve.
  double last_residual() const;

  static constexpr double residual_tolerance() { return 1e-10; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace chcross
