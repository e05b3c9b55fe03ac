#pragma once

#include <cstdint>
#include <vector>

#include "rzlmi/matrix.hpp"
#include "rzlmi/realroots.hpp"
#include "rzlmi/verdict.hpp"

namespace rzlmi {

enum class RzStatus { kConfirmedSampled, kNotRz, kInconclusive };
std::string to_string(RzStatus s);
Status to_status(RzStatus s);

struct RzVerdict {
  RzStatus status = RzStatus::kConfirmedSampled;
  std::optional<Witness> witness;  // the first failing (or ambiguous) line by sample index
  int lines_tested = 0;
  int inconclusive_lines = 0;
  double tol = 1e-8;
  nlohmann::json to_json() const;
};

// Directions drawn uniformly on the sphere from per-line seeded streams.
// Exact mode rationalizes each direction before restricting.
template <class K>
RzVerdict is_rz_sampled(const Polynomial<K>& p, const std::vector<K>& x0, int num_lines, double tol = 1e-8,
                        std::uint64_t seed = 0, int threads = 0);

template <class K>
struct HermiteMatrix {
  PolyMatrix<K> H;  // m x m, entries polynomials in x
  std::vector<K> x0;
  int m = 0;
  Polynomial<K> source;
};

// H_ij = sum over the m roots of t^m p(x0 + x/t) (normalized by p(x0)) of root^(i+j-2).
template <class K>
HermiteMatrix<K> hermite_matrix(const Polynomial<K>& p, const std::vector<K>& x0);

// Samples x with the same direction streams as is_rz_sampled and tests
// lambda_min(H(x)) >= -tol * max|lambda|.
template <class K>
VerdictReport hermite_psd_check(const HermiteMatrix<K>& H, int num_samples, double tol = 1e-8, std::uint64_t seed = 0,
                                int threads = 0);

// Dehomogenized d^k/ds^k P(X + s X0) at s = 0, X0 = (1, x0). Returns the zero
// polynomial when k > deg p.
template <class K>
Polynomial<K> renegar_derivative(const Polynomial<K>& p, const std::vector<K>& x0, int k);

// p and its Renegar derivatives p^(1) .. p^(m-1) at x0, evaluated together.
template <class K>
class MembershipOracle {
 public:
  MembershipOracle(const Polynomial<K>& p, const std::vector<K>& x0);
  // (p(x) >= -tol, p^(1)(x) >= -tol, ...).
  std::vector<bool> levels(const std::vector<K>& x, double tol) const;
  std::vector<double> values(const std::vector<K>& x) const;
  bool contains(const std::vector<K>& x, double tol) const;
  const std::vector<Polynomial<K>>& polynomials() const { return levels_; }

 private:
  std::vector<Polynomial<K>> levels_;
};

// Caller certifies p is RZ at x0 with p(x0) > 0.
template <class K>
bool membership(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& x, double tol = 1e-9);

// Unit-sphere direction as a coefficient vector (rationalized in exact mode).
template <class K>
std::vector<K> direction_as(const std::vector<double>& dir);

template <class K>
std::vector<double> to_doubles(const std::vector<K>& v);

}  // namespace rzlmi
