#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "rzlmi/linalg.hpp"
#include "rzlmi/verdict.hpp"

namespace rzlmi {

enum class SymmetryClass { kRealSymmetric, kHermitian };
std::string to_string(SymmetryClass c);

// A_0 + x_1 A_1 + ... + x_d A_d; projectively U(X) = X_0 A_0 + ... + X_d A_d.
template <class K>
class MatrixPencil {
 public:
  MatrixPencil() = default;
  // Validates shapes and (within tol in float mode) the hermitian property.
  MatrixPencil(std::vector<DenseMatrix<K>> matrices, SymmetryClass cls, double tol = 1e-9);
  // Class inferred from the imaginary parts.
  static MatrixPencil from_matrices(std::vector<DenseMatrix<K>> matrices, double tol = 1e-9);

  int d() const { return static_cast<int>(a_.size()) - 1; }
  int n() const { return a_.empty() ? 0 : a_.front().rows(); }
  SymmetryClass symmetry() const { return cls_; }
  const std::vector<DenseMatrix<K>>& matrices() const { return a_; }
  const DenseMatrix<K>& operator[](int alpha) const { return a_[alpha]; }

  DenseMatrix<K> at(const std::vector<K>& x) const;                    // affine point, length d
  DenseMatrix<K> at_projective(const std::vector<K>& X) const;         // length d+1
  Eigen::MatrixXcd eval(const std::vector<double>& x) const;           // affine, float
  Eigen::MatrixXcd eval_projective(const std::vector<Complex>& X) const;
  PolyMatrix<K> symbolic() const;             // entries affine-linear in x_1..x_d
  PolyMatrix<K> symbolic_projective() const;  // entries linear forms in X_0..X_d

  template <class To>
  MatrixPencil<To> cast() const {
    std::vector<DenseMatrix<To>> out;
    for (const auto& m : a_) {
      DenseMatrix<To> c(m.rows(), m.cols());
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) c(i, j) = convert_scalar<To>(m(i, j));
      out.push_back(std::move(c));
    }
    return MatrixPencil<To>(std::move(out), cls_, 1e-6);
  }

 private:
  std::vector<DenseMatrix<K>> a_;
  SymmetryClass cls_ = SymmetryClass::kHermitian;
};

// Symbolic determinant for n <= symbolic_bound. Beyond it, float mode
// interpolates numeric determinants by least squares; exact mode throws SizeBoundError.
template <class K>
Polynomial<K> det_poly(const MatrixPencil<K>& pencil, int symbolic_bound = 8);

struct VerificationReport {
  Status status = Status::kPass;
  double det_residual = 0.0;    // max relative |det A(x) - p(x) h(x)| over samples
  double identity_error = 0.0;  // max |A(x0) - I| entry
  std::vector<double> basepoint_spectrum;
  Definiteness basepoint = Definiteness::kInconclusive;
  bool divisible = false;
  double division_residual = 0.0;
  nlohmann::json h = nullptr;         // cofactor polynomial (JSON form)
  std::vector<double> h_samples;      // h at sampled interior points
  std::vector<VerdictReport> checks;  // basepoint, divisibility, h-positive
  nlohmann::json to_json() const;
};

// Certificate: A(x0) > 0, det = p h, h > 0 on sampled interior points.
template <class K>
VerificationReport verify_lmi(const MatrixPencil<K>& pencil, const Polynomial<K>& p, const std::vector<K>& x0,
                              double tol = 1e-6, int samples = 200, std::uint64_t seed = 0, double box = 2.0);

// At points X of the curve det U = 0 (on lines through X0), V = adj U(X) is
// rank one and V U(X0) V = P'_{X0}(X) V.
template <class K>
VerdictReport pairing_check(const MatrixPencil<K>& pencil, const std::vector<K>& X0, int curve_samples,
                            double tol = 1e-8, std::uint64_t seed = 0);

// Generalized eigenvectors of (U(X), U(X0)) on a line through X0 are
// U(X0)-orthogonal; the signs of the compressions give the definiteness of U(X0).
template <class K>
VerdictReport eigenspace_orthogonality_check(const MatrixPencil<K>& pencil, const std::vector<K>& X0, double tol = 1e-8,
                                             std::uint64_t seed = 0);

// Every diagonal cofactor V_jj interlaces P = det U iff U(X0) is definite.
// `only_j` restricts to one cofactor (0-based; -1 = all).
template <class K>
VerdictReport cauchy_cross_check(const MatrixPencil<K>& pencil, const std::vector<K>& x0, int num_lines,
                                 double tol = 1e-8, std::uint64_t seed = 0, int only_j = -1, int threads = 0);

// d/dX_alpha det U(X) = trace(A_alpha adj U(X)) at random real X.
template <class K>
VerdictReport derdet_check(const MatrixPencil<K>& pencil, int samples, double tol = 1e-9, std::uint64_t seed = 0);

// A = B + iC  ->  [[B, -C], [C, B]].
template <class K>
MatrixPencil<K> realify(const MatrixPencil<K>& pencil);

struct PencilDocument {
  MatrixPencil<Exact> pencil;
  CoeffMode mode = CoeffMode::kExact;
};

template <class K>
nlohmann::json pencil_to_json(const MatrixPencil<K>& pencil);
PencilDocument pencil_from_json(const nlohmann::json& j);
PencilDocument parse_pencil(const std::string& text);

}  // namespace rzlmi
