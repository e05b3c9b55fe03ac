#pragma once

#include <vector>

#include "rzlmi/polynomial.hpp"

namespace rzlmi {

enum class Tristate { kTrue, kFalse, kInconclusive };
std::string to_string(Tristate t);

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

// Real roots of a univariate polynomial, strictly increasing, with multiplicities.
struct RootList {
  std::vector<RealRoot> roots;
  int complex_count = 0;
  CoeffMode mode = CoeffMode::kFloat;
  double tol = 1e-8;
  // Float mode only: a near-multiple cluster whose real/non-real status is
  // below the resolution of the tolerance.
  bool ambiguous = false;
  std::vector<Complex> nonreal;  // float mode: the roots classified as non-real

  int real_count() const {
    int n = 0;
    for (const auto& r : roots) n += r.multiplicity;
    return n;
  }
  int degree() const { return real_count() + complex_count; }
  // Roots expanded by multiplicity, ascending.
  std::vector<double> expanded() const;
};

// Exact mode: squarefree decomposition + Sturm isolation + bisection to width
// tol (relative). Float mode: companion-matrix eigenvalues, clustered within
// sqrt(tol) and classified real when |Im| <= tol (1 + |root|).
template <class K>
RootList real_roots(const UnivariatePolynomial<K>& f, double tol = 1e-8);

// kTrue iff every root is real; kInconclusive when the float classification is ambiguous.
template <class K>
Tristate all_real(const UnivariatePolynomial<K>& f, double tol = 1e-8);

// Number of distinct real roots in (a, b]. Exact mode only.
template <class K>
int sturm_count(const UnivariatePolynomial<K>& f, const Rational& a, const Rational& b);

// Newton identities. `a` holds the coefficients of a monic polynomial from the
// top: a[0] = 1 (not read), a[k] multiplies t^(m-k). Returns p_0 .. p_kmax.
template <class R, class FromInt>
std::vector<R> newton_power_sums(const std::vector<R>& a, int k_max, const FromInt& from_int) {
  const int m = static_cast<int>(a.size()) - 1;
  std::vector<R> p;
  p.reserve(k_max + 1);
  p.push_back(from_int(m));
  for (int k = 1; k <= k_max; ++k) {
    R acc = from_int(0);
    for (int i = 1; i <= std::min(k - 1, m); ++i) acc += a[i] * p[k - i];
    if (k <= m) acc += a[k] * from_int(k);
    p.push_back(from_int(0) - acc);
  }
  return p;
}

// Power sums p_0..p_kmax of the roots of f (normalized to monic), p_0 = deg f.
template <class K>
std::vector<K> power_sums(const UnivariatePolynomial<K>& f, int k_max);

// Division with remainder and monic gcd over the Gaussian rationals.
std::pair<UnivariatePolynomial<Exact>, UnivariatePolynomial<Exact>> divmod(const UnivariatePolynomial<Exact>& a,
                                                                           const UnivariatePolynomial<Exact>& b);
UnivariatePolynomial<Exact> univariate_gcd(UnivariatePolynomial<Exact> a, UnivariatePolynomial<Exact> b);

// Exact helpers on rational coefficient vectors (ascending).
namespace exact_univariate {

using RVec = std::vector<Rational>;

RVec from_poly(const UnivariatePolynomial<Exact>& f);  // throws if a coefficient is non-real
RVec derivative(const RVec& f);
RVec remainder(const RVec& a, const RVec& b);
RVec quotient(const RVec& a, const RVec& b);
RVec gcd(RVec a, RVec b);  // monic
Rational eval(const RVec& f, const Rational& x);
// Yun decomposition: factors[i] is the squarefree part of multiplicity i+1.
std::vector<RVec> squarefree_decomposition(const RVec& f);
std::vector<RVec> sturm_sequence(const RVec& f);
int sign_variations_at(const std::vector<RVec>& seq, const Rational& x);
// Cauchy bound: every root has |root| < bound.
Rational root_bound(const RVec& f);

}  // namespace exact_univariate

}  // namespace rzlmi
