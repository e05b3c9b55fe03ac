#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rzlmi/polynomial.hpp"

namespace rzlmi {

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, const T& fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  T& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[i * cols_ + j]; }

  // Copy with row `skip_row` and column `skip_col` removed.
  DenseMatrix minor_matrix(int skip_row, int skip_col) const {
    DenseMatrix m(rows_ - 1, cols_ - 1);
    for (int i = 0, r = 0; i < rows_; ++i) {
      if (i == skip_row) continue;
      for (int j = 0, c = 0; j < cols_; ++j) {
        if (j == skip_col) continue;
        m(r, c++) = (*this)(i, j);
      }
      ++r;
    }
    return m;
  }
  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// Product over a ring whose zero element is supplied (polynomials carry a variable count).
template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b, const T& zero) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product dimension mismatch");
  DenseMatrix<T> c(a.rows(), b.cols(), zero);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

// Division-free determinant: Laplace expansion memoized over column subsets,
// n 2^n ring multiplications. Suited to polynomial entries where pivoting is unavailable.
template <class T>
T determinant(const DenseMatrix<T>& m, const T& zero, const T& one) {
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return one;
  if (n > 20) throw std::invalid_argument("matrix too large for subset expansion");
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<T> dp(std::size_t{1} << n, zero);
  dp[0] = one;
  // dp[S] = det of the last |S| rows restricted to the columns in S.
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int k = n - std::popcount(s);  // row being expanded
    T acc = zero;
    int before = 0;
    for (int j = 0; j < n; ++j) {
      if (!(s & (1u << j))) continue;
      const T term = m(k, j) * dp[s & ~(1u << j)];
      if (before % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
      ++before;
    }
    dp[s] = std::move(acc);
  }
  return dp[full];
}

// Signed-cofactor transpose: M * adj(M) = det(M) I.
template <class T>
DenseMatrix<T> adjugate(const DenseMatrix<T>& m, const T& zero, const T& one) {
  if (!m.is_square()) throw DimensionError("adjugate of a non-square matrix");
  const int n = m.rows();
  DenseMatrix<T> adj(n, n, zero);
  if (n == 1) {
    adj(0, 0) = one;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T c = determinant(m.minor_matrix(j, i), zero, one);
      if ((i + j) % 2) c = zero - c;
      adj(i, j) = std::move(c);
    }
  return adj;
}

template <class T>
DenseMatrix<T> identity_matrix(int n, const T& zero, const T& one) {
  DenseMatrix<T> I(n, n, zero);
  for (int i = 0; i < n; ++i) I(i, i) = one;
  return I;
}

// Matrix of polynomials sharing one variable count.
template <class K>
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, int num_vars)
      : num_vars_(num_vars), m_(rows, cols, Polynomial<K>(num_vars)) {}
  explicit PolyMatrix(DenseMatrix<Polynomial<K>> m) : m_(std::move(m)) {
    num_vars_ = m_.rows() * m_.cols() > 0 ? m_(0, 0).num_vars() : 0;
    for (int i = 0; i < m_.rows(); ++i)
      for (int j = 0; j < m_.cols(); ++j)
        if (m_(i, j).num_vars() != num_vars_) throw DimensionError("matrix entries use different variable counts");
  }

  int rows() const { return m_.rows(); }
  int cols() const { return m_.cols(); }
  int num_vars() const { return num_vars_; }
  const Polynomial<K>& operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, Polynomial<K> p) {
    if (p.num_vars() != num_vars_) throw DimensionError("entry has wrong variable count");
    m_(i, j) = std::move(p);
  }
  const DenseMatrix<Polynomial<K>>& dense() const { return m_; }

  Polynomial<K> zero() const { return Polynomial<K>(num_vars_); }
  Polynomial<K> one() const { return Polynomial<K>::constant(num_vars_, ScalarTraits<K>::from_int(1)); }

  DenseMatrix<Complex> evaluate_complex(const std::vector<Complex>& x) const {
    DenseMatrix<Complex> out(rows(), cols());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) out(i, j) = m_(i, j).evaluate_complex(x);
    return out;
  }
  DenseMatrix<K> evaluate(const std::vector<K>& x) const {
    DenseMatrix<K> out(rows(), cols());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) out(i, j) = m_(i, j)(x);
    return out;
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    return PolyMatrix(multiply(a.m_, b.m_, a.zero()));
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) { return a.m_ == b.m_; }

 private:
  int num_vars_ = 0;
  DenseMatrix<Polynomial<K>> m_;
};

class SizeBoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class K>
Polynomial<K> determinant(const PolyMatrix<K>& m) {
  return determinant(m.dense(), m.zero(), m.one());
}

// Cofactor adjugate of a square polynomial matrix of size at most max_size.
template <class K>
PolyMatrix<K> adjugate(const PolyMatrix<K>& m, int max_size = 6) {
  if (m.rows() != m.cols()) throw DimensionError("adjugate of a non-square matrix");
  if (m.rows() > max_size) throw SizeBoundError("adjugate size bound exceeded");
  return PolyMatrix<K>(adjugate(m.dense(), m.zero(), m.one()));
}

}  // namespace rzlmi
