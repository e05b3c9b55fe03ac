#pragma once

#include <cstdint>

#include "rzlmi/linalg.hpp"
#include "rzlmi/realroots.hpp"
#include "rzlmi/verdict.hpp"

namespace rzlmi {

// Coefficients b_ij of (f(t)g(s) - f(s)g(t)) / (t - s) = sum b_ij t^i s^j over
// any commutative ring; f and g ascending, size max(deg f, deg g).
template <class R>
DenseMatrix<R> bezout_coefficients(const std::vector<R>& f, const std::vector<R>& g, const R& zero) {
  const int m = static_cast<int>(std::max(f.size(), g.size())) - 1;
  if (m <= 0) return DenseMatrix<R>(0, 0, zero);
  auto fc = [&](int i) -> const R& { return i < static_cast<int>(f.size()) ? f[i] : zero; };
  auto gc = [&](int i) -> const R& { return i < static_cast<int>(g.size()) ? g[i] : zero; };
  DenseMatrix<R> b(m, m, zero);
  // (t - s) B = N gives b_{a,j} = n_{a+1,j} + b_{a+1,j-1}.
  for (int a = m - 1; a >= 0; --a)
    for (int j = 0; j < m; ++j) {
      R v = fc(a + 1) * gc(j) - fc(j) * gc(a + 1);
      if (a + 1 < m && j >= 1) v += b(a + 1, j - 1);
      b(a, j) = std::move(v);
    }
  return b;
}

template <class K>
DenseMatrix<K> bezout_matrix(const UnivariatePolynomial<K>& f, const UnivariatePolynomial<K>& g);

// Nullity of B(f, g): the number of common roots counted with multiplicity.
template <class K>
int common_zero_count(const UnivariatePolynomial<K>& f, const UnivariatePolynomial<K>& g, double rel_tol = 1e-9);

// True when P and Q have no common factor, judged on a seeded random
// projective line: exact gcd in exact mode, Sylvester conditioning >= 1e-10 in float mode.
template <class K>
bool relatively_prime(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q, std::uint64_t seed = 0);

// B(ȟ_x, q̌_x): ȟ_x(t) = t^m p(x0 + x/t), q̌_x(t) = t^(m-1) q(x0 + x/t); entries polynomial in x.
// Q of degree m-2 is multiplied by X0 first.
template <class K>
PolyMatrix<K> bezoutiant_field(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                               const std::vector<K>& x0, std::uint64_t seed = 0);

// Weak alternation s1 <= s1' <= s2 <= ... <= s_m of the roots of P(X + sX0)
// and Q(X + sX0) on sampled lines X = (0, u), with band tol * max(1, |root|).
template <class K>
VerdictReport interlaces_sampled(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                 const std::vector<K>& x0, int num_lines, double tol = 1e-8, std::uint64_t seed = 0,
                                 int threads = 0);

// lambda_min(B(P, Q; x0)(u)) >= -tol * max|lambda| on the same sampled directions.
template <class K>
VerdictReport psd_interlacing_check(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                    const std::vector<K>& x0, int num_samples, double tol = 1e-8,
                                    std::uint64_t seed = 0, int threads = 0);

}  // namespace rzlmi
