#pragma once

#include "semimg/exec.hpp"

#include <span>
#include <vector>

namespace semimg {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator+(const Vector& x, const Vector& y);
Vector operator*(double alpha, const Vector& x);

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row matrix. Column indices are strictly increasing in every row.
struct CsrMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_offsets{0};
  std::vector<int> col_indices;
  std::vector<double> values;
  bool symmetric = false;

  int nnz() const { return static_cast<int>(values.size()); }
  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;
  /// Position of (i, j) in `values`, or -1.
  int find(int i, int j) const;
};

/// Duplicates are summed in input order.
CsrMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets);
CsrMatrix identity_matrix(int n);

void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y, Exec exec = Exec::parallel);
Vector multiply(const CsrMatrix& a, std::span<const double> x, Exec exec = Exec::parallel);
/// y = A^T x
Vector multiply_transpose(const CsrMatrix& a, std::span<const double> x);
CsrMatrix transpose(const CsrMatrix& a);
/// Sparse product A * B.
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
/// b - A x
Vector residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x, Exec exec = Exec::parallel);
/// sqrt(x^T A x)
double energy_norm(const CsrMatrix& a, std::span<const double> x);

enum class SweepOrder { forward, backward };

/// In-place Gauss-Seidel sweeps on A x = b. Throws singular on a zero diagonal.
void gauss_seidel(const CsrMatrix& a, std::span<const double> b, std::span<double> x, int sweeps, SweepOrder order);

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  static DenseMatrix from_sparse(const CsrMatrix& a);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Vector multiply(const DenseMatrix& a, std::span<const double> x);

/// Dense Cholesky factorization A = L L^T.
///
/// A non-positive pivot throws singular. When `min_pivot_ratio` is positive,
/// a pivot below min_pivot_ratio * max diagonal throws degenerate instead, which
/// flags numerically dependent columns.
class Cholesky {
 public:
  Cholesky() = default;
  explicit Cholesky(const DenseMatrix& a, double min_pivot_ratio = 0.0);

  int size() const { return n_; }
  Vector solve(std::span<const double> b) const;

 private:
  int n_ = 0;
  std::vector<double> lower_;
};

Vector cholesky_solve(const DenseMatrix& a, std::span<const double> b);

}  // namespace semimg
