#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rzlmi/pencil.hpp"

namespace rzlmi {

// Stage-tagged failure. Retryable errors come from unlucky random choices
// (coordinate change, conjugate split) and trigger a fresh attempt.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(std::string stage, const std::string& what, bool retryable = false)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), retryable_(retryable) {}
  const std::string& stage() const { return stage_; }
  bool retryable() const { return retryable_; }

 private:
  std::string stage_;
  bool retryable_;
};

// Projective points normalized so the largest coordinate equals 1.
template <class K>
struct DivisorPoint {
  std::vector<K> X;
  int multiplicity = 1;
  int conjugate = -1;  // index of the conjugate point; itself for real points
};

template <class K>
struct Divisor {
  std::vector<DivisorPoint<K>> points;
  int degree() const {
    int s = 0;
    for (const auto& p : points) s += p.multiplicity;
    return s;
  }
  Divisor conj() const;
  nlohmann::json to_json() const;
};

// No common projective zero of the partials of P, checked numerically via
// resultants of random combinations of the partials.
template <class K>
bool is_smooth(const HomogeneousPolynomial<K>& P, std::uint64_t seed = 0);

// P of degree m (smooth, hence irreducible) and Q of degree m-1, in X0, X1, X2.
// Exact mode rationalizes the points and verifies them exactly.
template <class K>
Divisor<K> intersection_divisor(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                std::uint64_t seed = 0);

// Real points are halved; from each conjugate pair D takes one member. With
// seed 0 D takes the member whose first non-real coordinate has positive
// imaginary part; other seeds pick at random. Dtau is the conjugate of D.
template <class K>
std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>& div, std::uint64_t seed = 0);
template <class K>
std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>& div, const std::vector<bool>& take_first);

// Basis of the degree m-1 forms vanishing on D (tangent conditions for
// multiplicity 2); throws unless the space has dimension m.
template <class K>
std::vector<HomogeneousPolynomial<K>> vanishing_basis(const Divisor<K>& D, const HomogeneousPolynomial<K>& P);

// Replaces one basis element by Q (which must lie in the span) and moves it first.
template <class K>
std::vector<HomogeneousPolynomial<K>> rotate_basis(const std::vector<HomogeneousPolynomial<K>>& basis,
                                                   const HomogeneousPolynomial<K>& Q);

// V_i1 = column[i], V_1j = conj(column[j]), and V_ij for i, j > 1 from
// V_11 V_ij + W P = V_i1 V_1j.
template <class K>
PolyMatrix<K> fill_matrix(const HomogeneousPolynomial<K>& P, const std::vector<HomogeneousPolynomial<K>>& column);

template <class K>
struct Extraction {
  MatrixPencil<K> U;  // adj V / P^(m-2), as X0 A'_0 + X1 A'_1 + X2 A'_2
  K c{};              // det V = c P^(m-1)
  double det_residual = 0.0;
  double adj_residual = 0.0;
};

template <class K>
Extraction<K> extract_pencil(const PolyMatrix<K>& V, const HomogeneousPolynomial<K>& P);

// Divisor, split, basis, completion and extraction for an arbitrary Q of
// degree m-1, retried over split seeds. U(X0) is definite iff Q interlaces P.
template <class K>
Extraction<K> representation_from_interlacer(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                             std::uint64_t seed = 0, int max_attempts = 5);

template <class K>
struct Normalization {
  MatrixPencil<K> A;
  bool flipped = false;  // U(X0) was negative definite
};

// U(X0) = R D R* with R unit upper triangular; A_a = D^(-1/2) R^(-1) A'_a R^(-*) D^(-1/2).
template <class K>
Normalization<K> normalize_at_basepoint(const MatrixPencil<K>& U, const std::vector<K>& X0);

template <class K>
struct InterlacerSpec {
  std::optional<Polynomial<K>> q;                  // affine, degree m-1 or m-2
  std::optional<std::vector<K>> derivative_at;     // default: the base point
};

struct ConstructOptions {
  int max_attempts = 5;
  double tol = 1e-6;
  int verify_samples = 200;
  int rz_lines = 200;
};

template <class K>
struct ConstructionResult {
  MatrixPencil<K> pencil;
  Polynomial<K> p;  // the input rescaled to p(x0) = 1
  nlohmann::json trace;
};

template <class K>
ConstructionResult<K> construct(const Polynomial<K>& p, const std::vector<K>& x0, const InterlacerSpec<K>& interlacer,
                                std::uint64_t seed = 0, const ConstructOptions& options = {});

}  // namespace rzlmi
