#pragma once

#include <random>
#include <string>
#include <vector>

#include "rzlmi/poly_io.hpp"
#include "rzlmi/polynomial.hpp"

namespace rzlmi::testing {

inline Polynomial<Exact> px(const std::string& text, int vars) { return parse_polynomial_text(text, vars, 1).poly; }
inline Polynomial<Complex> pf(const std::string& text, int vars) { return px(text, vars).cast<Complex>(); }

// Homogeneous forms are written in X0..Xd.
inline HomogeneousPolynomial<Exact> hx(const std::string& text, int vars) {
  return HomogeneousPolynomial<Exact>::from(parse_polynomial_text(text, vars, 0).poly);
}

inline Exact q(long num, long den = 1) { return Exact(Rational(num, den)); }
inline Exact qi(long re, long im) { return Exact(Rational(re), Rational(im)); }

inline std::vector<Exact> qv(std::initializer_list<long> v) {
  std::vector<Exact> out;
  for (long x : v) out.emplace_back(x);
  return out;
}
inline std::vector<Complex> cv(std::initializer_list<double> v) {
  std::vector<Complex> out;
  for (double x : v) out.emplace_back(x, 0.0);
  return out;
}

inline UnivariatePolynomial<Exact> ux(std::initializer_list<long> ascending) {
  std::vector<Exact> c;
  for (long v : ascending) c.emplace_back(v);
  return UnivariatePolynomial<Exact>(std::move(c));
}
inline UnivariatePolynomial<Complex> uf(std::initializer_list<double> ascending) {
  std::vector<Complex> c;
  for (double v : ascending) c.emplace_back(v, 0.0);
  return UnivariatePolynomial<Complex>(std::move(c));
}

// Random polynomial with small integer coefficients on monomials of degree <= deg.
inline Polynomial<Exact> random_poly(std::mt19937_64& rng, int vars, int deg, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5);
  Polynomial<Exact> p(vars);
  for (int k = 0; k < terms; ++k) {
    Exponent e(vars, 0);
    int left = deg;
    for (int i = 0; i < vars; ++i) {
      e[i] = std::uniform_int_distribution<int>(0, left)(rng);
      left -= e[i];
    }
    p.add_term(e, Exact(coef(rng)));
  }
  return p;
}

}  // namespace rzlmi::testing
