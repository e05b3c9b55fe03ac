#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rzlmi/matrix.hpp"

namespace rzlmi {

template <class K>
struct NullspaceResult {
  std::vector<std::vector<K>> basis;  // each vector has A.cols() entries
  int rank = 0;
  // Float mode: smallest retained singular value over largest; exact mode: 1.
  double conditioning = 1.0;
};

// Exact mode uses reduced row echelon form; float mode an SVD with a relative
// singular-value threshold rel_tol.
template <class K>
NullspaceResult<K> nullspace(const DenseMatrix<K>& a, double rel_tol = 1e-9);

template <class K>
struct SolveResult {
  std::vector<K> x;
  bool consistent = false;
  bool unique = false;
  double residual = 0.0;  // relative; float mode calls it consistent below 1e-7
};

template <class K>
SolveResult<K> solve_linear(const DenseMatrix<K>& a, const std::vector<K>& b, double rel_tol = 1e-9);

template <class K>
int matrix_rank(const DenseMatrix<K>& a, double rel_tol = 1e-9) {
  return nullspace(a, rel_tol).rank;
}

template <class K>
Eigen::MatrixXcd to_eigen(const DenseMatrix<K>& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_complex(m(i, j));
  return out;
}

DenseMatrix<Complex> from_eigen(const Eigen::MatrixXcd& m);

// Eigenvalues of the hermitian part (M + M*)/2, ascending.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);

enum class Definiteness { kPositive, kNegative, kIndefinite, kInconclusive };
std::string to_string(Definiteness d);

// Definite when every eigenvalue clears tol * max|eigenvalue|; an eigenvalue
// inside the band +-tol*scale makes the verdict inconclusive.
Definiteness classify_definiteness(const Eigen::MatrixXcd& m, double tol);

}  // namespace rzlmi
