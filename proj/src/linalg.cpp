#include "rzlmi/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rzlmi {

namespace {

struct Echelon {
  DenseMatrix<Exact> r;
  std::vector<int> pivots;  // pivot column per row
};

Echelon rref(DenseMatrix<Exact> a) {
  const int rows = a.rows(), cols = a.cols();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int i = row; i < rows; ++i)
      if (!a(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < cols; ++j) std::swap(a(piv, j), a(row, j));
    const Exact inv = Exact(1) / a(row, col);
    for (int j = col; j < cols; ++j) a(row, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      const Exact f = a(i, col);
      for (int j = col; j < cols; ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

}  // namespace

DenseMatrix<Complex> from_eigen(const Eigen::MatrixXcd& m) {
  DenseMatrix<Complex> out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

template <>
NullspaceResult<Exact> nullspace(const DenseMatrix<Exact>& a, double) {
  const int cols = a.cols();
  const Echelon e = rref(a);
  NullspaceResult<Exact> res;
  res.rank = static_cast<int>(e.pivots.size());
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Exact> v(cols);
    v[free] = Exact(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.r(static_cast<int>(r), free);
    res.basis.push_back(std::move(v));
  }
  return res;
}

template <>
NullspaceResult<Complex> nullspace(const DenseMatrix<Complex>& a, double rel_tol) {
  const int cols = a.cols();
  NullspaceResult<Complex> res;
  if (a.rows() == 0) {
    for (int j = 0; j < cols; ++j) {
      std::vector<Complex> v(cols);
      v[j] = 1.0;
      res.basis.push_back(std::move(v));
    }
    return res;
  }
  Eigen::MatrixXcd m = to_eigen(a);
  // Pad to at least as many rows as columns so that V is a full basis.
  if (m.rows() < m.cols()) {
    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(m.cols(), m.cols());
    padded.topRows(m.rows()) = m;
    m = padded;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * smax) ++rank;
  res.rank = rank;
  res.conditioning = rank > 0 && smax > 0 ? s(rank - 1) / smax : 1.0;
  const auto& v = svd.matrixV();
  for (int k = rank; k < cols; ++k) {
    std::vector<Complex> col(cols);
    for (int j = 0; j < cols; ++j) col[j] = v(j, k);
    res.basis.push_back(std::move(col));
  }
  return res;
}

template <>
SolveResult<Exact> solve_linear(const DenseMatrix<Exact>& a, const std::vector<Exact>& b, double) {
  if (static_cast<int>(b.size()) != a.rows()) throw DimensionError("right-hand side has wrong length");
  const int rows = a.rows(), cols = a.cols();
  DenseMatrix<Exact> aug(rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = b[i];
  }
  const Echelon e = rref(aug);
  SolveResult<Exact> res;
  res.consistent = e.pivots.empty() || e.pivots.back() != cols;
  if (!res.consistent) {
    res.residual = 1.0;
    return res;
  }
  res.unique = static_cast<int>(e.pivots.size()) == cols;
  res.x.assign(cols, Exact(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) res.x[e.pivots[r]] = e.r(static_cast<int>(r), cols);
  return res;
}

template <>
SolveResult<Complex> solve_linear(const DenseMatrix<Complex>& a, const std::vector<Complex>& b, double rel_tol) {
  if (static_cast<int>(b.size()) != a.rows()) throw DimensionError("right-hand side has wrong length");
  const Eigen::MatrixXcd m = to_eigen(a);
  Eigen::VectorXcd rhs(a.rows());
  for (int i = 0; i < a.rows(); ++i) rhs(i) = b[i];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  svd.setThreshold(rel_tol);
  const Eigen::VectorXcd x = svd.solve(rhs);
  SolveResult<Complex> res;
  res.unique = svd.rank() == a.cols() && smax > 0;
  const double bn = rhs.norm();
  res.residual = bn > 0 ? (m * x - rhs).norm() / bn : (m * x).norm();
  res.consistent = res.residual <= 1e-7;
  res.x.assign(x.data(), x.data() + x.size());
  return res;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositive:
      return "positive-definite";
    case Definiteness::kNegative:
      return "negative-definite";
    case Definiteness::kIndefinite:
      return "indefinite";
    case Definiteness::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

Definiteness classify_definiteness(const Eigen::MatrixXcd& m, double tol) {
  const auto ev = hermitian_eigenvalues(m);
  if (ev.empty()) return Definiteness::kPositive;
  double scale = 0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  if (scale == 0) return Definiteness::kInconclusive;
  const double band = tol * scale;
  int pos = 0, neg = 0, mid = 0;
  for (double v : ev) {
    if (v > band) {
      ++pos;
    } else if (v < -band) {
      ++neg;
    } else {
      ++mid;
    }
  }
  if (pos && neg) return Definiteness::kIndefinite;
  if (mid) return Definiteness::kInconclusive;
  return pos ? Definiteness::kPositive : Definiteness::kNegative;
}

}  // namespace rzlmi
