#include "chcross/block_system.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstring>
#include <limits>

namespace chcross {

BlockSystem::BlockSystem(int node_count) : n_(node_count) {
  if (node_count <= 0) {
    throw std::invalid_argument("BlockSystem: node count must be positive");
  }
  rhs_.assign(3 * static_cast<std::size_t>(n_), 0.0);
}

int BlockSystem::index(int bi, int bj) {
  if (bi < 0 || bi > 2 || bj < 0 || bj > 2) {
    throw std::invalid_argument("BlockSystem: block index out of range");
  }
  return 3 * bi + bj;
}

void BlockSystem::set_block(int bi, int bj, SparseMatrix block) {
  const int k = index(bi, bj);
  if (!block.empty() && (block.nrows() != n_ || block.ncols() != n_)) {
    throw std::invalid_argument("BlockSystem: block dimensions do not match");
  }
  blocks_[k] = std::move(block);
}

bool BlockSystem::has_block(int bi, int bj) const {
  return !blocks_[index(bi, bj)].empty();
}

const SparseMatrix& BlockSystem::block(int bi, int bj) const {
  return blocks_[index(bi, bj)];
}

const SparseMatrix& BlockSystem::matrix() const {
  if (matrix_.empty()) {
    throw std::logic_error("BlockSystem: finalize() has not been called");
  }
  return matrix_;
}

void BlockSystem::finalize() {
  bool structure_unchanged = !matrix_.empty();
  for (int k = 0; k < 9 && structure_unchanged; ++k) {
    const CsrPattern* p = blocks_[k].empty() ? nullptr : &blocks_[k].pattern();
    structure_unchanged = (p == composed_[k]);
  }

  if (!structure_unchanged) {
    const int big = 3 * n_;
    std::vector<int> row_ptr(static_cast<std::size_t>(big) + 1, 0);
    std::vector<int> col_idx;
    for (int bi = 0; bi < 3; ++bi) {
      for (int i = 0; i < n_; ++i) {
        const int row = bi * n_ + i;
        for (int bj = 0; bj < 3; ++bj) {
          const SparseMatrix& blk = blocks_[index(bi, bj)];
          if (blk.empty()) continue;
          const auto& bp = blk.pattern();
          row_offset_[index(bi, bj)].resize(static_cast<std::size_t>(n_));
          row_offset_[index(bi, bj)][static_cast<std::size_t>(i)] =
              static_cast<int>(col_idx.size());
          for (int s = bp.row_ptr()[i]; s < bp.row_ptr()[i + 1]; ++s) {
            col_idx.push_back(bj * n_ + bp.col_idx()[s]);
          }
        }
        row_ptr[static_cast<std::size_t>(row) + 1] =
            static_cast<int>(col_idx.size());
      }
    }
    auto pattern = std::make_shared<CsrPattern>(big, big, std::move(row_ptr),
                                                std::move(col_idx));
    matrix_ = SparseMatrix(std::move(pattern));
    for (int k = 0; k < 9; ++k) {
      composed_[k] = blocks_[k].empty() ? nullptr : &blocks_[k].pattern();
      if (blocks_[k].empty()) row_offset_[k].clear();
    }
  }

  double* dst = matrix_.values().data();
  for (int bi = 0; bi < 3; ++bi) {
    for (int bj = 0; bj < 3; ++bj) {
      const int k = index(bi, bj);
      const SparseMatrix& blk = blocks_[k];
      if (blk.empty()) continue;
      const auto& bp = blk.pattern();
      const double* src = blk.values().data();
      for (int i = 0; i < n_; ++i) {
        const int begin = bp.row_ptr()[i];
        const int count = bp.row_ptr()[i + 1] - begin;
        std::memcpy(dst + row_offset_[k][static_cast<std::size_t>(i)],
                    src + begin, sizeof(double) * static_cast<std::size_t>(count));
      }
    }
  }
}

struct DirectSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  const CsrPattern* analyzed = nullptr;
  std::shared_ptr<const CsrPattern> hold;
  double last_residual = 0.0;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

double DirectSolver::last_residual() const { return impl_->last_residual; }

std::vector<double> DirectSolver::solve(const SparseMatrix& A,
                                        const std::vector<double>& b) {
  if (A.empty() || A.nrows() != A.ncols()) {
    throw std::invalid_argument("DirectSolver: matrix must be square");
  }
  if (static_cast<int>(b.size()) != A.nrows()) {
    throw std::invalid_argument("DirectSolver: right-hand side size mismatch");
  }
  const int n = A.nrows();
  const Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> map(
      n, n, A.nnz(), A.pattern().row_ptr().data(), A.pattern().col_idx().data(),
      A.values().data());
  Eigen::SparseMatrix<double> mat = map;

  auto& impl = *impl_;
  if (impl.analyzed != &A.pattern()) {
    impl.lu.analyzePattern(mat);
    impl.analyzed = &A.pattern();
    impl.hold = A.pattern_ptr();
  }
  impl.lu.factorize(mat);
  if (impl.lu.info() != Eigen::Success) {
    throw SolverError("DirectSolver: factorization failed (matrix singular or "
                      "numerically rank-deficient)",
                      std::numeric_limits<double>::infinity());
  }

  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  std::vector<double> x(static_cast<std::size_t>(n));
  Eigen::Map<Eigen::VectorXd>(x.data(), n) = impl.lu.solve(rhs);
  if (impl.lu.info() != Eigen::Success) {
    throw SolverError("DirectSolver: triangular solve failed",
                      std::numeric_limits<double>::infinity());
  }

  const double residual = relative_residual(A, x, b);
  impl.last_residual = residual;
  if (!(residual <= residual_tolerance())) {
    throw SolverError("DirectSolver: verified residual " +
                          std::to_string(residual) + " exceeds tolerance",
                      residual);
  }
  return x;
}

std::vector<double> DirectSolver::solve(const BlockSystem& sys) {
  return solve(sys.matrix(), sys.rhs());
}

}  // namespace chcross
