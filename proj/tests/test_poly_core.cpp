#include <random>

#include "doctest.h"
#include "rzlmi/matrix.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/polynomial.hpp"
#include "support.hpp"

using namespace rzlmi;
using namespace rzlmi::testing;

namespace {
const auto kCircle = px("1 - x1^2 - x2^2", 2);
}

TEST_CASE("evaluate circle") {
  CHECK(kCircle(qv({0, 0})) == q(1));
  CHECK(kCircle(qv({1, 0})) == q(0));
  CHECK(kCircle(qv({1, 1})) == q(-1));
  CHECK_THROWS_AS(kCircle(qv({1})), DimensionError);
}

TEST_CASE("zero polynomial degree sentinel") {
  Polynomial<Exact> z(3);
  CHECK(z.degree() == kZeroDegree);
  auto p = px("x1 - x1", 1);
  CHECK(p.is_zero());
  CHECK(kCircle.degree() == 2);
}

TEST_CASE("homogenize") {
  CHECK(homogenize(kCircle, 2) == hx("X0^2 - X1^2 - X2^2", 3));
  CHECK(homogenize(px("2", 1), 1).poly() == parse_polynomial_text("2 X0", 2, 0).poly);
  CHECK(homogenize(px("x1 + x1 x2", 2), 3) == hx("X0^2 X1 + X0 X1 X2", 3));
  CHECK_THROWS(homogenize(kCircle, 1));
}

TEST_CASE("dehomogenize") {
  CHECK(dehomogenize(hx("X0^2 - X1^2 - X2^2", 3)) == kCircle);
  CHECK(dehomogenize(HomogeneousPolynomial<Exact>(parse_polynomial_text("2 X0", 2, 0).poly, 1)) == px("2", 1));
  CHECK(dehomogenize(hx("X0 X1^2 + X2^3", 3)) == px("x1^2 + x2^3", 2));
}

TEST_CASE("homogenize round trip when X0 does not divide P") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_poly(rng, 3, 4, 6);
    if (p.is_zero()) continue;
    auto P = homogenize(p, p.degree() + 2);
    CHECK(dehomogenize(P) == p);
    auto again = homogenize(dehomogenize(P), P.degree());
    CHECK(again == P);
  }
}

TEST_CASE("restrict_to_line") {
  CHECK(restrict_to_line(kCircle, qv({0, 0}), qv({1, 0})) == ux({1, 0, -1}));
  CHECK(restrict_to_line(kCircle, qv({0, 0}), qv({1, 1})) == ux({1, 0, -2}));
  auto f = restrict_to_line(kCircle, qv({2, 3}), qv({0, 0}));
  CHECK(f.degree() == 0);
  CHECK(f.coeff(0) == q(-12));
}

TEST_CASE("restrict_to_line matches pointwise evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_poly(rng, 3, 5, 8);
    std::vector<Exact> x0, dir;
    for (int i = 0; i < 3; ++i) {
      x0.emplace_back(small(rng));
      dir.emplace_back(small(rng));
    }
    auto f = restrict_to_line(p, x0, dir);
    for (int k = 0; k < 20; ++k) {
      const Exact t(Rational(small(rng), 1 + k));
      std::vector<Exact> x(3);
      for (int i = 0; i < 3; ++i) x[i] = x0[i] + t * dir[i];
      CHECK(f(t) == p(x));
    }
  }
}

TEST_CASE("reversed_restriction") {
  CHECK(reversed_restriction(kCircle, qv({0, 0}), qv({1, 0}), 2) == ux({-1, 0, 1}));
  CHECK(reversed_restriction(kCircle, qv({0, 0}), qv({3, 4}), 2) == ux({-25, 0, 1}));
  CHECK(reversed_restriction(px("1", 2), qv({0, 0}), qv({1, 2}), 0) == ux({1}));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_poly(rng, 2, 3, 5);
    if (p.is_zero()) continue;
    const int m = 4;
    auto f = restrict_to_line(p, qv({1, -1}), qv({2, 1}));
    auto r = reversed_restriction(p, qv({1, -1}), qv({2, 1}), m);
    for (int k = 0; k <= m; ++k) CHECK(r.coeff(k) == f.coeff(m - k));
  }
}

TEST_CASE("directional_derivative") {
  const auto P = hx("X0^2 - X1^2 - X2^2", 3);
  CHECK(directional_derivative(P, qv({1, 0, 0})).poly() == parse_polynomial_text("2 X0", 3, 0).poly);
  CHECK(directional_derivative(hx("X0 X1", 3), qv({0, 1, 0})).poly() == parse_polynomial_text("X0", 3, 0).poly);
  CHECK_THROWS(directional_derivative(P, qv({0, 0, 0})));
  auto D = directional_derivative(hx("X1^2", 3), qv({1, 0, 0}));
  CHECK(D.is_zero());
  CHECK(D.degree() == 1);
}

TEST_CASE("directional_derivative matches central differences") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_poly(rng, 2, 4, 7);
    if (p.is_zero()) continue;
    auto P = homogenize(p, 4).cast<Complex>();
    std::vector<Complex> X0 = {g(rng), g(rng), g(rng)};
    auto D = directional_derivative(P, X0);
    std::vector<Complex> X = {g(rng), g(rng), g(rng)};
    const double h = 1e-5;
    std::vector<Complex> xp(3), xm(3);
    for (int a = 0; a < 3; ++a) {
      xp[a] = X[a] + h * X0[a];
      xm[a] = X[a] - h * X0[a];
    }
    const Complex fd = (P.evaluate_complex(xp) - P.evaluate_complex(xm)) / (2 * h);
    const Complex exact = D.evaluate_complex(X);
    CHECK(std::abs(fd - exact) <= 1e-7 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("projective vs affine restriction identity") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> small(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_poly(rng, 2, 3, 6);
    if (p.is_zero()) continue;
    const int m = 3;
    auto P = homogenize(p, m);
    std::vector<Exact> x = {Exact(small(rng)), Exact(small(rng))};
    std::vector<Exact> x0 = {Exact(small(rng)), Exact(small(rng))};
    Exact s(Rational(small(rng), 7));
    if (s == Exact(-1)) s = Exact(2);
    std::vector<Exact> Xs = {Exact(1) + s, x[0] + s * x0[0], x[1] + s * x0[1]};
    const Exact lhs = P(Xs);
    const Exact inv = Exact(1) / (s + Exact(1));
    std::vector<Exact> y = {x0[0] + inv * (x[0] - x0[0]), x0[1] + inv * (x[1] - x0[1])};
    Exact pw(1);
    for (int k = 0; k < m; ++k) pw *= s + Exact(1);
    CHECK(lhs == pw * p(y));
  }
}

TEST_CASE("exact_divide") {
  const auto num = parse_polynomial_text("X0^2 - X1^2", 2, 0).poly;
  const auto den = parse_polynomial_text("X0 - X1", 2, 0).poly;
  auto r = exact_divide(num, den);
  CHECK(r.exact);
  CHECK(r.quotient == parse_polynomial_text("X0 + X1", 2, 0).poly);
  auto bad = exact_divide(parse_polynomial_text("X0^2", 2, 0).poly, parse_polynomial_text("X1", 2, 0).poly);
  CHECK_FALSE(bad.exact);
  CHECK_THROWS(exact_divide(num, Polynomial<Exact>(2)));

  auto fr = exact_divide(num.cast<Complex>(), den.cast<Complex>());
  CHECK(fr.exact);
  CHECK(fr.quotient.coeff({1, 0}).real() == doctest::Approx(1.0));
  auto fbad = exact_divide(parse_polynomial_text("X0^2", 2, 0).poly.cast<Complex>(),
                           parse_polynomial_text("X1", 2, 0).poly.cast<Complex>());
  CHECK_FALSE(fbad.exact);
}

TEST_CASE("exact_divide round trip") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    auto P = random_poly(rng, 3, 3, 5);
    auto W = random_poly(rng, 3, 2, 4);
    if (P.is_zero() || W.is_zero()) continue;
    auto r = exact_divide(P * W, P);
    CHECK(r.exact);
    CHECK(r.quotient == W);
    auto rf = exact_divide((P * W).cast<Complex>(), P.cast<Complex>());
    CHECK(rf.exact);
    CHECK((rf.quotient - W.cast<Complex>()).max_abs_coeff() <= 1e-9);
  }
}

TEST_CASE("adjugate") {
  PolyMatrix<Exact> one(1, 1, 2);
  one.set(0, 0, px("1 + x1", 2));
  CHECK(adjugate(one)(0, 0) == px("1", 2));

  PolyMatrix<Exact> m(2, 2, 2);
  m.set(0, 0, px("x1", 2));
  m.set(0, 1, px("x2 + 1", 2));
  m.set(1, 0, px("x1 x2", 2));
  m.set(1, 1, px("3", 2));
  auto a = adjugate(m);
  CHECK(a(0, 0) == m(1, 1));
  CHECK(a(0, 1) == -m(0, 1));
  CHECK(a(1, 0) == -m(1, 0));
  CHECK(a(1, 1) == m(0, 0));

  PolyMatrix<Exact> big(7, 7, 1);
  CHECK_THROWS_AS(adjugate(big), SizeBoundError);
}

TEST_CASE("adjugate identity for sizes 1 to 4") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 4; ++n) {
    PolyMatrix<Exact> m(n, n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.set(i, j, random_poly(rng, 2, 2, 3));
    const auto det = determinant(m);
    const auto prod = m * adjugate(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(prod(i, j) == (i == j ? det : Polynomial<Exact>(2)));
  }
}

TEST_CASE("text and JSON formats") {
  auto doc = parse_polynomial_text("# vars 3\n(1/2+3i) * x1^2 * x3\n- 0.25 x2\n+ 7", -1, 1);
  CHECK(doc.poly.num_vars() == 3);
  CHECK(doc.poly.coeff({2, 0, 1}) == Exact(Rational(1, 2), Rational(3)));
  CHECK(doc.poly.coeff({0, 1, 0}) == q(-1, 4));
  CHECK(doc.poly.coeff({0, 0, 0}) == q(7));

  auto j = polynomial_to_json(doc.poly);
  auto back = polynomial_from_json(j);
  CHECK(back.poly == doc.poly);

  auto jf = polynomial_to_json(doc.poly.cast<Complex>());
  CHECK(polynomial_from_json(jf).poly.cast<Complex>() == doc.poly.cast<Complex>());

  nlohmann::json dup = {{"vars", 1},
                        {"terms", {{{"exp", {1}}, {"re", "1"}}, {{"exp", {1}}, {"re", 2}}}}};
  CHECK_THROWS_AS(polynomial_from_json(dup), ParseError);
  CHECK_THROWS_AS(parse_polynomial_text("1 + * x1"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("{\"vars\": 1, \"terms\": [ {\"exp\": [1, 2]} ]}"), ParseError);
  try {
    parse_polynomial_text("1 +\n x1 ^ x2");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
}
