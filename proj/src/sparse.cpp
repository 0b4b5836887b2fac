#include "semimg/sparse.hpp"

#include "semimg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semimg {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (const double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector operator-(const Vector& x, const Vector& y) {
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vector operator+(const Vector& x, const Vector& y) {
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Vector operator*(double alpha, const Vector& x) {
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = alpha * x[i];
  return z;
}

int CsrMatrix::find(int i, int j) const {
  const auto first = col_indices.begin() + row_offsets[i];
  const auto last = col_indices.begin() + row_offsets[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - col_indices.begin()) : -1;
}

double CsrMatrix::at(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : values[k];
}

CsrMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  CsrMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_offsets.assign(n_rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const Triplet& t = triplets[k];
    require(t.row >= 0 && t.row < n_rows && t.col >= 0 && t.col < n_cols, ErrorCategory::invalid_argument,
            "from_triplets: index out of range");
    if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      m.values.back() += t.value;
    } else {
      m.col_indices.push_back(t.col);
      m.values.push_back(t.value);
      ++m.row_offsets[t.row + 1];
    }
  }
  for (int i = 0; i < n_rows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

CsrMatrix identity_matrix(int n) {
  CsrMatrix m;
  m.n_rows = m.n_cols = n;
  m.row_offsets.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.row_offsets[i] = i;
  m.col_indices.resize(n);
  for (int i = 0; i < n; ++i) m.col_indices[i] = i;
  m.values.assign(n, 1.0);
  m.symmetric = true;
  return m;
}

void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y, Exec exec) {
  require(static_cast<int>(x.size()) == a.n_cols && static_cast<int>(y.size()) == a.n_rows,
          ErrorCategory::invalid_argument, "multiply: dimension mismatch");
  const int n = a.n_rows;
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) s += a.values[k] * x[a.col_indices[k]];
      y[i] = s;
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) s += a.values[k] * x[a.col_indices[k]];
    y[i] = s;
  }
}

Vector multiply(const CsrMatrix& a, std::span<const double> x, Exec exec) {
  Vector y(a.n_rows);
  multiply(a, x, y, exec);
  return y;
}

Vector multiply_transpose(const CsrMatrix& a, std::span<const double> x) {
  require(static_cast<int>(x.size()) == a.n_rows, ErrorCategory::invalid_argument,
          "multiply_transpose: dimension mismatch");
  Vector y(a.n_cols, 0.0);
  for (int i = 0; i < a.n_rows; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) y[a.col_indices[k]] += a.values[k] * x[i];
  return y;
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.n_rows = a.n_cols;
  t.n_cols = a.n_rows;
  t.symmetric = a.symmetric;
  t.row_offsets.assign(a.n_cols + 1, 0);
  for (const int j : a.col_indices) ++t.row_offsets[j + 1];
  for (int j = 0; j < a.n_cols; ++j) t.row_offsets[j + 1] += t.row_offsets[j];
  t.col_indices.resize(a.col_indices.size());
  t.values.resize(a.values.size());
  std::vector<int> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (int i = 0; i < a.n_rows; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int pos = next[a.col_indices[k]]++;
      t.col_indices[pos] = i;
      t.values[pos] = a.values[k];
    }
  }
  return t;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  require(a.n_cols == b.n_rows, ErrorCategory::invalid_argument, "multiply: inner dimension mismatch");
  CsrMatrix c;
  c.n_rows = a.n_rows;
  c.n_cols = b.n_cols;
  c.row_offsets.assign(a.n_rows + 1, 0);
  std::vector<int> marker(b.n_cols, -1);
  std::vector<double> accum(b.n_cols, 0.0);
  std::vector<int> row_cols;
  for (int i = 0; i < a.n_rows; ++i) {
    row_cols.clear();
    for (int ka = a.row_offsets[i]; ka < a.row_offsets[i + 1]; ++ka) {
      const int j = a.col_indices[ka];
      const double av = a.values[ka];
      for (int kb = b.row_offsets[j]; kb < b.row_offsets[j + 1]; ++kb) {
        const int col = b.col_indices[kb];
        if (marker[col] != i) {
          marker[col] = i;
          accum[col] = 0.0;
          row_cols.push_back(col);
        }
        accum[col] += av * b.values[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (const int col : row_cols) {
      c.col_indices.push_back(col);
      c.values.push_back(accum[col]);
    }
    c.row_offsets[i + 1] = static_cast<int>(c.col_indices.size());
  }
  return c;
}

Vector residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x, Exec exec) {
  Vector r = multiply(a, x, exec);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

double energy_norm(const CsrMatrix& a, std::span<const double> x) {
  const Vector ax = multiply(a, x, Exec::serial);
  return std::sqrt(std::max(0.0, dot(x, ax)));
}

void gauss_seidel(const CsrMatrix& a, std::span<const double> b, std::span<double> x, int sweeps, SweepOrder order) {
  require(a.n_rows == a.n_cols && static_cast<int>(b.size()) == a.n_rows && static_cast<int>(x.size()) == a.n_rows,
          ErrorCategory::invalid_argument, "gauss_seidel: dimension mismatch");
  const int n = a.n_rows;
  auto relax = [&](int i) {
    double diag = 0.0;
    double s = b[i];
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int j = a.col_indices[k];
      if (j == i) {
        diag = a.values[k];
      } else {
        s -= a.values[k] * x[j];
      }
    }
    if (diag == 0.0) fail(ErrorCategory::singular, "gauss_seidel: zero diagonal in row " + std::to_string(i));
    x[i] = s / diag;
  };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    if (order == SweepOrder::forward) {
      for (int i = 0; i < n; ++i) relax(i);
    } else {
      for (int i = n - 1; i >= 0; --i) relax(i);
    }
  }
}

DenseMatrix DenseMatrix::from_sparse(const CsrMatrix& a) {
  DenseMatrix d(a.n_rows, a.n_cols);
  for (int i = 0; i < a.n_rows; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) d(i, a.col_indices[k]) = a.values[k];
  return d;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  Vector y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Cholesky::Cholesky(const DenseMatrix& a, double min_pivot_ratio) : n_(a.rows()) {
  require(a.rows() == a.cols(), ErrorCategory::invalid_argument, "Cholesky: matrix not square");
  lower_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  double max_diag = 0.0;
  for (int i = 0; i < n_; ++i) max_diag = std::max(max_diag, a(i, i));
  auto l = [&](int i, int j) -> double& { return lower_[static_cast<std::size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    // With a threshold, roundoff-negative pivots also count as dependence.
    if (min_pivot_ratio > 0.0 && pivot <= min_pivot_ratio * max_diag) {
      fail(ErrorCategory::degenerate, "Cholesky: pivot " + std::to_string(pivot) + " at row " + std::to_string(j) +
                                          " is below the dependence threshold");
    }
    if (!(pivot > 0.0)) {
      fail(ErrorCategory::singular, "Cholesky: non-positive pivot " + std::to_string(pivot) + " at row " + std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (int i = j + 1; i < n_; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  require(static_cast<int>(b.size()) == n_, ErrorCategory::invalid_argument, "Cholesky::solve: dimension mismatch");
  auto l = [&](int i, int j) { return lower_[static_cast<std::size_t>(i) * n_ + j]; };
  Vector y(b.begin(), b.end());
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    for (int k = i + 1; k < n_; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

Vector cholesky_solve(const DenseMatrix& a, std::span<const double> b) { return Cholesky(a).solve(b); }

}  // namespace semimg
