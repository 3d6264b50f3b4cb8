#include "chcross/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "chcross/csv.hpp"

namespace chcross {

CsrPattern::CsrPattern(int nrows, int ncols, std::vector<int> row_ptr,
                       std::vector<int> col_idx)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)) {
  if (nrows_ < 0 || ncols_ < 0 ||
      row_ptr_.size() != static_cast<std::size_t>(nrows_) + 1 ||
      row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<int>(col_idx_.size()))
    throw std::invalid_argument("CsrPattern: inconsistent structure");
  for (int i = 0; i < nrows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1])
      throw std::invalid_argument("CsrPattern: row_ptr not nondecreasing");
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= ncols_)
        throw std::invalid_argument("CsrPattern: column index out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("CsrPattern: columns not strictly ascending");
    }
  }
}

int CsrPattern::find(int row, int col) const {
  if (row < 0 || row >= nrows_) return -1;
  const auto first = col_idx_.begin() + row_ptr_[row];
  const auto last = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return -1;
  return static_cast<int>(it - col_idx_.begin());
}

SparseMatrix::SparseMatrix(std::shared_ptr<const CsrPattern> pattern)
    : pattern_(std::move(pattern)) {
  if (!pattern_) throw std::invalid_argument("SparseMatrix: null pattern");
  values_.assign(static_cast<std::size_t>(pattern_->nnz()), 0.0);
}

SparseMatrix SparseMatrix::from_triplets(int nrows, int ncols,
                                         std::vector<Triplet> ts) {
  for (const Triplet& t : ts) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw std::invalid_argument("from_triplets: index out of range");
    if (!std::isfinite(t.value))
      throw std::invalid_argument("from_triplets: non-finite value");
  }
  // Stable sort keeps duplicates in insertion order; their sum is then the
  // same floating-point sum a sequential scatter would have produced.
  std::stable_sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> row_ptr(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> vals;
  col_idx.reserve(ts.size());
  vals.reserve(ts.size());
  std::size_t k = 0;
  for (int i = 0; i < nrows; ++i) {
    while (k < ts.size() && ts[k].row == i) {
      const int c = ts[k].col;
      double v = 0.0;
      while (k < ts.size() && ts[k].row == i && ts[k].col == c) v += ts[k++].value;
      col_idx.push_back(c);
      vals.push_back(v);
    }
    row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col_idx.size());
  }
  SparseMatrix A(std::make_shared<CsrPattern>(nrows, ncols, std::move(row_ptr),
                                              std::move(col_idx)));
  A.values_ = std::move(vals);
  return A;
}

int SparseMatrix::nrows() const { return pattern_ ? pattern_->nrows() : 0; }
int SparseMatrix::ncols() const { return pattern_ ? pattern_->ncols() : 0; }
int SparseMatrix::nnz() const { return pattern_ ? pattern_->nnz() : 0; }

double SparseMatrix::coeff(int i, int j) const {
  const int slot = pattern_->find(i, j);
  return slot < 0 ? 0.0 : values_[static_cast<std::size_t>(slot)];
}

void SparseMatrix::add_scaled(const SparseMatrix& other, double s) {
  // Distinct pattern objects are fine as long as the structure is identical
  // slot for slot (matrices assembled on the same mesh by different
  // assemblers).
  if (pattern_ != other.pattern_) {
    const CsrPattern& a = *pattern_;
    const CsrPattern& b = *other.pattern_;
    if (a.nrows() != b.nrows() || a.ncols() != b.ncols() ||
        a.row_ptr() != b.row_ptr() || a.col_idx() != b.col_idx())
      throw std::invalid_argument("add_scaled: patterns differ");
  }
  for (std::size_t k = 0; k < values_.size(); ++k)
    values_[k] += s * other.values_[k];
}

void SparseMatrix::scale(double s) {
  for (double& v : values_) v *= s;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix out = *this;
  out.scale(s);
  return out;
}

void matvec_into(const SparseMatrix& A, const double* x, double* y,
                 const Exec& ex) {
  const auto& rp = A.pattern().row_ptr();
  const auto& ci = A.pattern().col_idx();
  const auto& v = A.values();
  parallel_for(static_cast<std::size_t>(A.nrows()), ex, [&](std::size_t i) {
    double s = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      s += v[static_cast<std::size_t>(k)] * x[ci[static_cast<std::size_t>(k)]];
    y[i] = s;
  });
}

std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x,
                           const Exec& ex) {
  if (static_cast<int>(x.size()) != A.ncols())
    throw std::invalid_argument("matvec: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(A.ncols()) + " columns)");
  std::vector<double> y(static_cast<std::size_t>(A.nrows()), 0.0);
  matvec_into(A, x.data(), y.data(), ex);
  return y;
}

double relative_residual(const SparseMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
  const std::vector<double> ax = matvec(A, x);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = ax[i] - b[i];
    rn += r * r;
    bn += b[i] * b[i];
  }
  return std::sqrt(rn) / std::max(1.0, std::sqrt(bn));
}

void write_matrix_market(const SparseMatrix& A, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.nrows() << " " << A.ncols() << " " << A.nnz() << "\n";
  const auto& rp = A.pattern().row_ptr();
  const auto& ci = A.pattern().col_idx();
  for (int i = 0; i < A.nrows(); ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      os << i + 1 << " " << ci[static_cast<std::size_t>(k)] + 1 << " "
         << format_double(A.values()[static_cast<std::size_t>(k)]) << "\n";
}

}  // namespace chcross
