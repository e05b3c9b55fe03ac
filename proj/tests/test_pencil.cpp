#include <random>

#include "doctest.h"
#include "rzlmi/construct.hpp"
#include "rzlmi/corpus.hpp"
#include "rzlmi/pencil.hpp"
#include "support.hpp"

using namespace rzlmi;
using namespace rzlmi::testing;

namespace {

template <class K>
DenseMatrix<K> dm(std::initializer_list<std::initializer_list<Exact>> rows) {
  const int r = static_cast<int>(rows.size()), c = static_cast<int>(rows.begin()->size());
  DenseMatrix<K> m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& v : row) m(i, j++) = convert_scalar<K>(v);
    ++i;
  }
  return m;
}

template <class K>
MatrixPencil<K> circle_pencil() {
  return MatrixPencil<K>::from_matrices({dm<K>({{q(1), q(0)}, {q(0), q(1)}}), dm<K>({{q(1), q(0)}, {q(0), q(-1)}}),
                                         dm<K>({{q(0), q(1)}, {q(1), q(0)}})});
}

template <class K>
MatrixPencil<K> hermitian_circle() {
  return MatrixPencil<K>::from_matrices({dm<K>({{q(1), q(0)}, {q(0), q(1)}}), dm<K>({{q(0), qi(0, -1)}, {qi(0, 1), q(0)}}),
                                         dm<K>({{q(0), q(-1)}, {q(-1), q(0)}})});
}

// Block diagonal sum of two pencils with the same d.
template <class K>
MatrixPencil<K> direct_sum(const MatrixPencil<K>& a, const MatrixPencil<K>& b) {
  std::vector<DenseMatrix<K>> out;
  const int n = a.n() + b.n();
  for (int al = 0; al <= a.d(); ++al) {
    DenseMatrix<K> M(n, n);
    for (int i = 0; i < a.n(); ++i)
      for (int j = 0; j < a.n(); ++j) M(i, j) = a[al](i, j);
    for (int i = 0; i < b.n(); ++i)
      for (int j = 0; j < b.n(); ++j) M(a.n() + i, a.n() + j) = b[al](i, j);
    out.push_back(std::move(M));
  }
  return MatrixPencil<K>(std::move(out), SymmetryClass::kHermitian);
}

template <class K>
MatrixPencil<K> negated(const MatrixPencil<K>& a) {
  std::vector<DenseMatrix<K>> out;
  for (const auto& M : a.matrices()) {
    DenseMatrix<K> N(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) N(i, j) = K{} - M(i, j);
    out.push_back(std::move(N));
  }
  return MatrixPencil<K>(std::move(out), a.symmetry());
}

MatrixPencil<Complex> random_pencil(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<DenseMatrix<Complex>> mats;
  for (int a = 0; a <= d; ++a) {
    DenseMatrix<Complex> M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        M(i, j) = i == j ? Complex(g(rng), 0) : Complex(g(rng), g(rng));
        M(j, i) = std::conj(M(i, j));
      }
    mats.push_back(std::move(M));
  }
  return MatrixPencil<Complex>(std::move(mats), SymmetryClass::kHermitian);
}

}  // namespace

TEST_CASE("pencil validation") {
  CHECK_THROWS(MatrixPencil<Exact>({dm<Exact>({{q(1), q(2)}, {q(3), q(1)}})}, SymmetryClass::kRealSymmetric));
  CHECK_THROWS(MatrixPencil<Exact>({dm<Exact>({{q(1), qi(0, 1)}, {qi(0, -1), q(1)}})}, SymmetryClass::kRealSymmetric));
  CHECK_NOTHROW(MatrixPencil<Exact>({dm<Exact>({{q(1), qi(0, 1)}, {qi(0, -1), q(1)}})}, SymmetryClass::kHermitian));
  CHECK(hermitian_circle<Exact>().symmetry() == SymmetryClass::kHermitian);
  CHECK(circle_pencil<Exact>().symmetry() == SymmetryClass::kRealSymmetric);
}

TEST_CASE_TEMPLATE("det_poly examples", K, Exact, Complex) {
  CHECK(det_poly(circle_pencil<K>()) == px("1 - x1^2 - x2^2", 2).template cast<K>());
  CHECK(det_poly(hermitian_circle<K>()) == px("1 - x1^2 - x2^2", 2).template cast<K>());
  const auto diag = MatrixPencil<K>::from_matrices({dm<K>({{q(1), q(0)}, {q(0), q(2)}}), dm<K>({{q(3), q(0)}, {q(0), q(-1)}})});
  CHECK(det_poly(diag) == px("2 + 5 x1 - 3 x1^2", 1).template cast<K>());
  const auto zero = MatrixPencil<K>::from_matrices(std::vector<DenseMatrix<K>>(3, DenseMatrix<K>(3, 3)));
  CHECK(det_poly(zero).is_zero());
}

TEST_CASE("det_poly interpolation agrees with the symbolic determinant") {
  const auto P = random_pencil(4, 2, 9);
  const auto sym = det_poly(P);
  const auto interp = det_poly(P, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    const std::vector<Complex> x{g(rng), g(rng)};
    CHECK(std::abs(sym.evaluate_complex(x) - interp.evaluate_complex(x)) <= 1e-8 * sym.evaluation_scale(x));
  }
  CHECK_THROWS_AS(det_poly(circle_pencil<Exact>(), 1), SizeBoundError);
}

TEST_CASE_TEMPLATE("verify_lmi examples", K, Exact, Complex) {
  const auto p = px("1 - x1^2 - x2^2", 2).template cast<K>();
  const std::vector<K> o(2);
  const auto ok = verify_lmi(hermitian_circle<K>(), p, o);
  CHECK(ok.status == Status::kPass);
  CHECK(ok.divisible);
  CHECK(ok.identity_error == 0.0);
  CHECK((polynomial_from_json(ok.h).poly.template cast<Complex>() - pf("1", 2)).max_abs_coeff() <= 1e-12);

  // An extra block [1 + x1] multiplies the determinant by h = 1 + x1.
  const auto block = MatrixPencil<K>::from_matrices({dm<K>({{q(1)}}), dm<K>({{q(1)}}), dm<K>({{q(0)}})});
  const auto sum = verify_lmi(direct_sum(hermitian_circle<K>(), block), p, o);
  CHECK(sum.status == Status::kPass);
  CHECK((polynomial_from_json(sum.h).poly.template cast<Complex>() - pf("1 + x1", 2)).max_abs_coeff() <= 1e-12);
  CHECK_FALSE(sum.h_samples.empty());
  for (double h : sum.h_samples) CHECK(h > 0);

  const auto bad = verify_lmi(negated(hermitian_circle<K>()), p, o);
  CHECK(bad.status == Status::kFail);
  CHECK(bad.checks[0].check == "basepoint-definite");
  CHECK(bad.checks[0].status == Status::kFail);
  CHECK(bad.checks[0].witness);

  const auto wrong = verify_lmi(hermitian_circle<K>(), px("1 - x1^2 - 2 x2^2", 2).template cast<K>(), o);
  CHECK(wrong.status == Status::kFail);
  CHECK_FALSE(wrong.divisible);
}

TEST_CASE("pairing_check examples") {
  const auto circ = pairing_check(hermitian_circle<Complex>(), cv({1, 0, 0}), 50, 1e-8, 2);
  CHECK(circ.passed());
  CHECK(circ.tested == 50);
  CHECK(circ.max_residual <= 1e-8);

  const auto one = MatrixPencil<Exact>::from_matrices({dm<Exact>({{q(1)}}), dm<Exact>({{q(1)}})});
  CHECK(pairing_check(one, qv({1, 0}), 5).passed());

  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto inst = random_rz(3, s, CoeffMode::kFloat);
    CHECK(pairing_check(*inst.pencil, qv({1, 0, 0}), 50, 1e-8, s).passed());
  }
}

TEST_CASE("eigenspace_orthogonality_check examples") {
  const auto c = eigenspace_orthogonality_check(hermitian_circle<Complex>(), cv({1, 0, 0}), 1e-8, 4);
  CHECK(c.passed());
  CHECK(c.max_residual <= 1e-8);
  for (double v : c.extra["compressions"].get<std::vector<double>>()) CHECK(v > 0);

  const auto eng = indefinite_pencil(3, 0);
  const auto e = eigenspace_orthogonality_check(eng.pencil, cv({1, 0, 0}), 1e-8, 4);
  CHECK(e.passed());
  CHECK(e.extra["basepoint"] == "indefinite");
  const auto comp = e.extra["compressions"].get<std::vector<double>>();
  CHECK(std::any_of(comp.begin(), comp.end(), [](double v) { return v < 0; }));

  const auto one = MatrixPencil<Exact>::from_matrices({dm<Exact>({{q(1)}}), dm<Exact>({{q(1)}})});
  CHECK(eigenspace_orthogonality_check(one, qv({1, 0})).passed());
}

TEST_CASE("cauchy_cross_check examples") {
  const auto c = cauchy_cross_check(hermitian_circle<Exact>(), qv({0, 0}), 60);
  CHECK(c.passed());
  CHECK(c.extra["basepoint"] == "positive-definite");
  for (const auto& j : c.extra["cofactors"]) CHECK(j["status"] == "pass");

  for (int m : {3, 4}) {
    const auto eng = indefinite_pencil(m, 1);
    const auto r = cauchy_cross_check(eng.pencil, cv({0, 0}), 60);
    CHECK(r.passed());
    CHECK(r.extra["basepoint"] == "indefinite");
    bool any_fail = false;
    for (const auto& j : r.extra["cofactors"]) any_fail = any_fail || j["status"] == "fail";
    CHECK(any_fail);
  }
  CHECK_THROWS(cauchy_cross_check(hermitian_circle<Exact>(), qv({0, 0}), 10, 1e-8, 0, 2));
}

TEST_CASE("derdet_check examples") {
  CHECK(derdet_check(hermitian_circle<Exact>(), 20).passed());
  const auto diag = MatrixPencil<Exact>::from_matrices(
      {dm<Exact>({{q(1), q(0)}, {q(0), q(2)}}), dm<Exact>({{q(3), q(0)}, {q(0), q(-1)}})});
  CHECK(derdet_check(diag, 20).passed());
  const auto r = derdet_check(random_pencil(4, 2, 3), 50, 1e-9);
  CHECK(r.passed());
  CHECK(r.max_residual <= 1e-9);
  // The alpha = 0 identity on the circle: d/dX0 (X0^2 - X1^2 - X2^2) = 2 X0 = trace(adj U).
  const auto U = hermitian_circle<Exact>().symbolic_projective();
  const auto adj = adjugate(U);
  CHECK(adj(0, 0) + adj(1, 1) == hx("2 X0", 3).poly());
}

TEST_CASE("realify examples") {
  const auto A = MatrixPencil<Exact>::from_matrices({dm<Exact>({{q(0), qi(0, -1)}, {qi(0, 1), q(0)}})});
  const auto R = realify(A);
  CHECK(R.symmetry() == SymmetryClass::kRealSymmetric);
  CHECK(R[0] == dm<Exact>({{q(0), q(0), q(0), q(1)}, {q(0), q(0), q(-1), q(0)}, {q(0), q(-1), q(0), q(0)},
                           {q(1), q(0), q(0), q(0)}}));

  const auto real = realify(circle_pencil<Exact>());
  CHECK(det_poly(real) == det_poly(circle_pencil<Exact>()).pow(2));

  const auto hc = realify(hermitian_circle<Exact>());
  CHECK(det_poly(hc) == px("1 - x1^2 - x2^2", 2).pow(2));
}

TEST_CASE("realify squares the determinant and keeps the PSD region") {
  const auto P = random_pencil(3, 2, 17);
  const auto R = realify(P);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{g(rng), g(rng)};
    const Complex d = P.eval(x).determinant(), dr = R.eval(x).determinant();
    CHECK(std::abs(dr - d * d) <= 1e-10 * std::max(1.0, std::abs(d * d)));
    const double a = hermitian_eigenvalues(P.eval(x)).front(), b = hermitian_eigenvalues(R.eval(x)).front();
    CHECK(std::abs(a - b) <= 1e-9 * (1 + std::abs(a)));
  }
}

TEST_CASE("pencil JSON round trip and errors") {
  const auto j = pencil_to_json(hermitian_circle<Exact>());
  const auto doc = pencil_from_json(j);
  CHECK(doc.mode == CoeffMode::kExact);
  CHECK(doc.pencil.matrices() == hermitian_circle<Exact>().matrices());

  const auto jf = pencil_to_json(random_pencil(2, 2, 1));
  const auto df = parse_pencil(jf.dump());
  CHECK(df.mode == CoeffMode::kFloat);
  CHECK(df.pencil.cast<Complex>().matrices() == random_pencil(2, 2, 1).matrices());

  CHECK_THROWS_AS(parse_pencil("{\"d\": 1, \"n\": 2, \"matrices\": []}"), ParseError);
  CHECK_THROWS_AS(parse_pencil("{\"d\": 0, \"n\": 1, \"matrices\": [{\"re\": [[\"x\"]]}]}"), ParseError);
  CHECK_THROWS_AS(parse_pencil("{\"d\": 0, \"n\": 2, \"matrices\": [{\"re\": [[\"1\",\"2\"],[\"3\",\"1\"]]}]}"),
                  ParseError);
  CHECK_THROWS_AS(parse_pencil("not json"), ParseError);
}

TEST_CASE("constructed pencils pass verification with h = 1") {
  for (int m = 2; m <= 4; ++m) {
    const auto inst = random_rz(m, 21, CoeffMode::kFloat);
    const auto res = construct(inst.p.cast<Complex>(), cv({0, 0}), InterlacerSpec<Complex>{}, 3);
    const auto v = verify_lmi(res.pencil, res.p, cv({0, 0}), 1e-6, 200, 5);
    CHECK(v.status == Status::kPass);
    const auto h = polynomial_from_json(v.h).poly.cast<Complex>();
    CHECK((h - Polynomial<Complex>::constant(2, 1.0)).max_abs_coeff() <= 1e-9);
    CHECK(derdet_check(res.pencil, 30).passed());
    CHECK(pairing_check(res.pencil, cv({1, 0, 0}), 30).passed());
  }
}
