#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "chcross/exec.hpp"

namespace chcross {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Immutable CSR sparsity structure. Matrices assembled on the same mesh share
// one pattern object, which makes linear combinations and block composition
// slot-by-slot operations.
class CsrPattern {
 public:
  CsrPattern(int nrows, int ncols, std::vector<int> row_ptr,
             std::vector<int> col_idx);

  int nrows() const { return nrows_; }
  int ncols() const { return ncols_; }
  int nnz() const { return static_cast<int>(col_idx_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }

  // Slot of entry (row, col), or -1 when structurally absent. Columns are
  // ascending within each row, so this is a binary search.
  int find(int row, int col) const;

 private:
  int nrows_, ncols_;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
};

// Row-major CSR matrix over a shared immutable pattern. Values are mutable
// until the matrix is handed to a solver; the pattern never changes.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const CsrPattern> pattern);

  // Finalizes a triplet list: stable-sorts by (row, col) and sums duplicates
  // in insertion order, so the result is bitwise identical to sequential
  // scatter assembly. Throws on out-of-range indices or non-finite values.
  static SparseMatrix from_triplets(int nrows, int ncols,
                                    std::vector<Triplet> triplets);

  bool empty() const { return pattern_ == nullptr; }
  int nrows() const;
  int ncols() const;
  int nnz() const;
  const CsrPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const CsrPattern>& pattern_ptr() const {
    return pattern_;
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Entry (i, j), 0 for structural zeros.
  double coeff(int i, int j) const;

  // this += s * other. Requires the identical pattern object or a
  // slot-for-slot identical structure.
  void add_scaled(const SparseMatrix& other, double s);
  void scale(double s);
  SparseMatrix scaled(double s) const;

  bool symmetric_hint = false;

 private:
  std::shared_ptr<const CsrPattern> pattern_;
  std::vector<double> values_;
};

// y = A x. Row-parallel under an OpenMP policy; bitwise independent of the
// thread count (each row is one serial dot product).
void matvec_into(const SparseMatrix& A, const double* x, double* y,
                 const Exec& ex = Exec::serial());
std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x,
                           const Exec& ex = Exec::serial());

// ||A x - b||_2 / max(1, ||b||_2), recomputed with our own matvec.
double relative_residual(const SparseMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b);

// Coordinate text dump ("%%MatrixMarket matrix coordinate real general",
// 1-based indices), for debugging.
void write_matrix_market(const SparseMatrix& A, std::ostream& os);

}  // namespace chcross
