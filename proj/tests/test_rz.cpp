#include <random>

#include "doctest.h"
#include "rzlmi/corpus.hpp"
#include "rzlmi/rz.hpp"
#include "support.hpp"

using namespace rzlmi;
using namespace rzlmi::testing;

TEST_CASE_TEMPLATE("is_rz_sampled on the circle and the TV screen", K, Exact, Complex) {
  const std::vector<K> origin(2);
  const auto c = is_rz_sampled(px("1 - x1^2 - x2^2", 2).template cast<K>(), origin, 200, 1e-8, 7);
  CHECK(c.status == RzStatus::kConfirmedSampled);
  CHECK(c.lines_tested == 200);
  CHECK_FALSE(c.witness);

  const auto tv = is_rz_sampled(px("1 - x1^4 - x2^4", 2).template cast<K>(), origin, 50, 1e-8, 7);
  CHECK(tv.status == RzStatus::kNotRz);
  REQUIRE(tv.witness);
  // The witness line really has non-real roots.
  const auto& w = *tv.witness;
  const auto f = restrict_to_line(pf("1 - x1^4 - x2^4", 2), cv({w.x0[0], w.x0[1]}), cv({w.dir[0], w.dir[1]}));
  CHECK(all_real(f) == Tristate::kFalse);

  CHECK_THROWS(is_rz_sampled(px("x1 + x2", 2).template cast<K>(), origin, 10));
}

TEST_CASE("is_rz_sampled is independent of the thread count") {
  const auto p = pf("1 - x1^4 - x2^4 + x1*x2", 2);
  const auto a = is_rz_sampled(p, cv({0, 0}), 64, 1e-8, 3, 1);
  const auto b = is_rz_sampled(p, cv({0, 0}), 64, 1e-8, 3, 4);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("hermite_matrix examples") {
  const auto H = hermite_matrix(px("1 - x1^2 - x2^2", 2), qv({0, 0}));
  REQUIRE(H.m == 2);
  CHECK(H.H(0, 0) == px("2", 2));
  CHECK(H.H(0, 1).is_zero());
  CHECK(H.H(1, 0).is_zero());
  CHECK(H.H(1, 1) == px("2 x1^2 + 2 x2^2", 2));

  const auto L = hermite_matrix(px("1 - x1", 1), qv({0}));
  REQUIRE(L.m == 1);
  CHECK(L.H(0, 0) == px("1", 1));

  const auto Q = hermite_matrix(px("1 + 2 x1 + x1^2 - x2^2", 2), qv({0, 0}));
  CHECK(Q.H(0, 0) == px("2", 2));
  CHECK(hermite_psd_check(Q, 100).passed());

  CHECK_THROWS(hermite_matrix(px("x1 - x2", 2), qv({0, 0})));
}

TEST_CASE("hermite matrix is Hankel and scales by homogeneity") {
  std::mt19937_64 rng(11);
  const auto inst = random_rz(3, 4);
  const auto H = hermite_matrix(inst.p, inst.x0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(H.H(i, j) == H.H(j, i));
      if (i + 1 < 3 && j >= 1) CHECK(H.H(i + 1, j - 1) == H.H(i, j));
    }
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const double lam = 0.2 + std::abs(u(rng)) * 3;
    const std::vector<Complex> x{u(rng), u(rng)}, lx{lam * x[0], lam * x[1]};
    const auto a = H.H.evaluate_complex(x), b = H.H.evaluate_complex(lx);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(b(i, j) - std::pow(lam, i + j) * a(i, j)) <= 1e-9 * (1 + std::abs(b(i, j))));
  }
}

TEST_CASE("hermite_psd_check matches is_rz_sampled") {
  CHECK(hermite_psd_check(hermite_matrix(px("1 - x1^2 - x2^2", 2), qv({0, 0})), 200).passed());
  const auto tv = hermite_psd_check(hermite_matrix(px("1 - x1^4 - x2^4", 2), qv({0, 0})), 200);
  CHECK(tv.status == Status::kFail);
  CHECK(tv.witness);

  // Constant p: empty matrix, vacuous pass.
  const auto H0 = hermite_matrix(px("3", 2), qv({0, 0}));
  CHECK(H0.m == 0);
  CHECK(hermite_psd_check(H0, 10).passed());
}

TEST_CASE("renegar_derivative examples") {
  const auto p = px("1 - x1^2 - x2^2", 2);
  CHECK(renegar_derivative(p, qv({0, 0}), 0) == p);
  CHECK(renegar_derivative(p, qv({0, 0}), 1) == px("2", 2));
  CHECK(renegar_derivative(p, qv({0, 0}), 2) == px("2", 2));
  CHECK(renegar_derivative(p, qv({0, 0}), 3).is_zero());
  // Off-centre base point: d/ds P(X + s(1, a, 0)) = 2 X0 - 2 a X1.
  CHECK(renegar_derivative(p, {q(1, 2), q(0)}, 1) == px("2 - x1", 2));
}

TEST_CASE_TEMPLATE("membership examples", K, Exact, Complex) {
  const auto p = px("1 - x1^2 - x2^2", 2).template cast<K>();
  const std::vector<K> o(2);
  auto pt = [](double a, double b) { return std::vector<K>{ScalarTraits<K>::from_complex({a, 0}), ScalarTraits<K>::from_complex({b, 0})}; };
  CHECK(membership(p, o, pt(0.5, 0)));
  CHECK_FALSE(membership(p, o, pt(2, 0)));
  CHECK(membership(p, o, o));
  CHECK_THROWS(MembershipOracle<K>(p.scaled(ScalarTraits<K>::from_int(-1)), o));
}

TEST_CASE("membership agrees with the generating pencil and levels are nested") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = random_rz(3, seed);
    const MembershipOracle<Exact> oracle(inst.p, inst.x0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int inside = 0;
    for (int i = 0; i < 200; ++i) {
      const std::vector<double> x{u(rng), u(rng)};
      const auto ev = hermitian_eigenvalues(inst.pencil->eval(x));
      const double lmin = ev.front();
      if (std::abs(lmin) < 1e-6) continue;
      const std::vector<Exact> xe{Exact(rational_from_double(x[0])), Exact(rational_from_double(x[1]))};
      const bool member = oracle.contains(xe, 0.0);
      CHECK(member == (lmin > 0));
      if (member) {
        ++inside;
        for (bool level : oracle.levels(xe, 0.0)) CHECK(level);
      }
    }
    CHECK(inside > 0);
  }
}
