// One line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "rzlmi/construct.hpp"
#include "rzlmi/corpus.hpp"
#include "rzlmi/interlace.hpp"
#include "rzlmi/pencil.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/rz.hpp"

using namespace rzlmi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

std::vector<Complex> origin(int d) { return std::vector<Complex>(d, Complex(0.0)); }

Polynomial<Complex> pf(const Instance& in) { return in.p.cast<Complex>(); }

double lambda_min(const Eigen::MatrixXcd& M) { return hermitian_eigenvalues(M).front(); }

// 1. Exact circle end to end.
void circle_end_to_end(Result& r) {
  const auto t0 = Clock::now();
  const auto c = circle();
  const auto res = construct(c.p, c.x0, InterlacerSpec<Exact>{});
  const double dt = seconds_since(t0);
  r.require(res.pencil.n() == 2, "pencil is 2x2");
  r.require(res.pencil.symmetry() == SymmetryClass::kHermitian || res.pencil.symmetry() == SymmetryClass::kRealSymmetric,
            "hermitian");
  r.require(res.pencil[0] == identity_matrix(2, Exact(0), Exact(1)), "A0 = I exactly");
  r.require(det_poly(res.pencil) == c.p, "det = p exactly");
  r.require(dt < 1.0, "runtime < 1 s");
  r.detail << "runtime " << dt << " s";
}

// 2. Round trip on generated ground truth.
void round_trip(Result& r) {
  int count = 0, retried = 0;
  double worst_det = 0, worst_id = 0, worst_h = 0, worst_time = 0;
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto t0 = Clock::now();
      const auto in = random_rz(m, seed, CoeffMode::kFloat);
      try {
        const auto res = construct(pf(in), origin(2), InterlacerSpec<Complex>{}, seed);
        if (res.trace["attempts"].get<int>() > 1) ++retried;
        const auto v = verify_lmi(res.pencil, res.p, origin(2), 1e-6, 200, seed);
        const auto h = polynomial_from_json(v.h).poly.cast<Complex>();
        const double herr = (h - Polynomial<Complex>::constant(2, 1.0)).max_abs_coeff();
        worst_det = std::max(worst_det, v.det_residual);
        worst_id = std::max(worst_id, v.identity_error);
        worst_h = std::max(worst_h, herr);
        r.require(v.status == Status::kPass, "verify passes (m=" + std::to_string(m) + ")");
        r.require(herr <= 1e-6, "h = 1");
      } catch (const std::exception& e) {
        r.require(false, "construct m=" + std::to_string(m) + " seed=" + std::to_string(seed) + ": " + e.what());
      }
      worst_time = std::max(worst_time, seconds_since(t0));
      ++count;
    }
  r.require(worst_det <= 1e-6, "det residual <= 1e-6");
  r.require(worst_id <= 1e-8, "|A(x0) - I| <= 1e-8");
  r.require(worst_time < 10.0, "runtime < 10 s per instance");
  r.detail << count << " instances, " << retried << " needed retries, max det residual " << worst_det
           << ", max |A(x0)-I| " << worst_id << ", max |h-1| " << worst_h << ", slowest " << worst_time << " s";
}

// 3. RZ classification of the named examples.
void classification(Result& r) {
  auto timed = [&](const std::string& name, const std::function<RzVerdict()>& f, RzStatus want, bool witness) {
    const auto t0 = Clock::now();
    const auto v = f();
    const double dt = seconds_since(t0);
    r.require(v.status == want, name + " verdict");
    if (witness) r.require(v.witness.has_value() && !v.witness->dir.empty(), name + " witness line");
    r.require(dt < 5.0, name + " < 5 s");
    r.detail << name << " " << to_string(v.status) << " (" << dt << " s) ";
  };
  const auto c = circle();
  timed("circle", [&] { return is_rz_sampled(c.p, c.x0, 200); }, RzStatus::kConfirmedSampled, false);
  const auto tv = tv_screen();
  timed("tv_screen", [&] { return is_rz_sampled(tv.p, tv.x0, 200); }, RzStatus::kNotRz, true);
  const auto va = vamos();
  timed("vamos", [&] { return is_rz_sampled(pf(va), origin(8), 500); }, RzStatus::kConfirmedSampled, false);
  for (int d = 2; d <= 6; ++d) {
    const auto b = bad_quadratic(d);
    timed("bad_quadratic(" + std::to_string(d) + ")", [&] { return is_rz_sampled(b.p, b.x0, 200); },
          RzStatus::kConfirmedSampled, false);
  }
}

// 4. Hermite PSD criterion agrees with line sampling.
void hermite_agreement(Result& r) {
  std::vector<std::pair<std::string, Polynomial<Complex>>> cases;
  for (const auto& name : {"circle", "tv_screen", "bad_quadratic:2", "bad_quadratic:3", "bad_quadratic:4"})
    cases.emplace_back(name, pf(corpus_instance(name)));
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t s = 0; s < 7; ++s) cases.emplace_back("random_rz", pf(random_rz(m, s, CoeffMode::kFloat)));
  // Perturbed instances: p + 0.3 |p|_max x1^m, some of which leave the RZ class.
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t s = 100; s < 108; ++s) {
      const auto p = pf(random_rz(m, s, CoeffMode::kFloat));
      Polynomial<Complex> bump(2);
      bump.add_term({m, 0}, 0.3 * p.max_abs_coeff());
      cases.emplace_back("perturbed", p + bump);
    }
  int agree = 0, rz = 0, not_rz = 0;
  for (const auto& [name, p] : cases) {
    const auto x0 = origin(p.num_vars());
    const auto line = is_rz_sampled(p, x0, 200);
    const auto herm = hermite_psd_check(hermite_matrix(p, x0), 200);
    const bool same = to_status(line.status) == herm.status && line.status != RzStatus::kInconclusive;
    r.require(same, name + " agreement");
    agree += same;
    rz += line.status == RzStatus::kConfirmedSampled;
    not_rz += line.status == RzStatus::kNotRz;
  }
  const auto H = hermite_matrix(circle().p, circle().x0);
  PolyMatrix<Exact> closed(2, 2, 2);
  closed.set(0, 0, Polynomial<Exact>::constant(2, Exact(2)));
  closed.set(1, 1, parse_polynomial_text("2 x1^2 + 2 x2^2", 2).poly);
  r.require(H.H == closed, "circle Hermite matrix closed form");
  r.detail << agree << "/" << cases.size() << " agree (" << rz << " RZ, " << not_rz
           << " not RZ); circle Hermite matrix exact";
}

// 5. Interlacing suite.
void interlacing_suite(Result& r) {
  struct Case {
    std::string name;
    HomogeneousPolynomial<Complex> P, Q;
    std::vector<Complex> x0;
    bool expected;
  };
  std::vector<Case> cases;
  auto add_derivative = [&](const std::string& name, const Polynomial<Complex>& p) {
    const auto P = homogenize(p, p.degree());
    std::vector<Complex> X0(p.num_vars() + 1, Complex(0.0));
    X0[0] = 1.0;
    cases.push_back({name, P, directional_derivative(P, X0), origin(p.num_vars()), true});
  };
  for (const auto& name : {"circle", "bad_quadratic:2", "bad_quadratic:3", "bad_quadratic:4"})
    add_derivative(name, pf(corpus_instance(name)));
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t s = 0; s < 10; ++s) add_derivative("random_rz", pf(random_rz(m, s, CoeffMode::kFloat)));
  // Engineered negatives: the non-interlacing cofactors of indefinite
  // representations, and derivatives in a direction outside the cone.
  for (int m : {3, 4})
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto eng = indefinite_pencil(m, s);
      cases.push_back({"engineered", homogenize(eng.p, m), eng.Q, origin(2), false});
    }
  // x' at twice the boundary distance along (1, 1): det of the pencil there is
  // the boundary at t = 1 / lambda_max(-(B1 + B2)).
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t s = 0; s < 2; ++s) {
      const auto in = random_rz(m, s, CoeffMode::kFloat);
      const auto A = in.pencil->cast<Complex>();
      const Eigen::MatrixXcd B = A.eval({1.0, 1.0}) - A.eval({0.0, 0.0});
      const double top = hermitian_eigenvalues(-B).back();
      const double t = top > 1e-9 ? 2.0 / top : 2.0 / hermitian_eigenvalues(-B).front();
      const auto P = homogenize(pf(in), m);
      cases.push_back({"outside-derivative", P, directional_derivative(P, {Complex(1.0), Complex(t), Complex(t)}),
                       origin(2), false});
    }
  int agree = 0, positives = 0, negatives = 0;
  for (const auto& c : cases) {
    const auto a = interlaces_sampled(c.P, c.Q, c.x0, 200);
    const auto b = psd_interlacing_check(c.P, c.Q, c.x0, 200);
    const bool same = a.status == b.status && a.status != Status::kInconclusive;
    agree += same;
    r.require(same, c.name + " verdicts agree");
    r.require(a.passed() == c.expected, c.name + " expected verdict (case " + std::to_string(&c - cases.data()) + ")");
    (c.expected ? positives : negatives)++;
  }
  r.detail << agree << "/" << cases.size() << " agree (" << positives << " derivative interlacers pass, " << negatives
           << " engineered negatives fail)";
}

// 6. Identity suite.
void identity_suite(Result& r) {
  std::vector<std::pair<std::string, MatrixPencil<Complex>>> pencils;
  pencils.emplace_back("circle", circle().pencil->cast<Complex>());
  for (int m = 1; m <= 4; ++m)
    for (std::uint64_t s = 0; s < 3; ++s) {
      pencils.emplace_back("random_rz", random_rz(m, s).pencil->cast<Complex>());
      pencils.emplace_back("random_rz float", random_rz(m, s, CoeffMode::kFloat).pencil->cast<Complex>());
    }
  for (int m = 2; m <= 4; ++m) {
    const auto in = random_rz(m, 7, CoeffMode::kFloat);
    pencils.emplace_back("constructed", construct(pf(in), origin(2), InterlacerSpec<Complex>{}, 7).pencil);
  }
  for (int m : {3, 4}) pencils.emplace_back("engineered", indefinite_pencil(m, 0).pencil);
  double worst_derdet = 0, worst_pair = 0;
  for (const auto& [name, A] : pencils) {
    const auto dd = derdet_check(A, 50, 1e-9);
    worst_derdet = std::max(worst_derdet, dd.max_residual);
    r.require(dd.passed(), name + " trace identity");
    std::vector<Complex> X0{1.0, 0.0, 0.0};
    const auto pr = pairing_check(A, X0, 50, 1e-8);
    worst_pair = std::max(worst_pair, pr.max_residual);
    r.require(pr.passed(), name + " pairing identity");
  }

  // M adj M = det M I over the polynomial ring, sizes 1 to 4.
  int adj_sizes = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto M = random_rz(n, 11).pencil->symbolic_projective();
    const auto adj = adjugate(M);
    const auto det = determinant(M);
    const auto prod = M * adj;
    bool ok = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ok = ok && prod(i, j) == (i == j ? det : Polynomial<Exact>(3));
    r.require(ok, "adjugate identity n=" + std::to_string(n));
    adj_sizes += ok;
  }
  // det V = P^(m-1) and adj V = P^(m-2) U on the exact circle representation.
  const auto P = homogenize(circle().p, 2);
  const auto Q = parse_polynomial_text("2 X0", 3, 0).poly;
  const auto D = split_divisor(intersection_divisor(P, HomogeneousPolynomial<Exact>::from(Q)), 0).first;
  const auto V = fill_matrix(P, rotate_basis(vanishing_basis(D, P), HomogeneousPolynomial<Exact>::from(Q)));
  const auto ex = extract_pencil(V, P);
  r.require(determinant(V) == P.poly().scaled(ex.c), "det V = c P");
  r.require(adjugate(V) == ex.U.symbolic_projective(), "adj V = U");

  // P(X + s X0) = (s+1)^m p(x0 + (x - x0)/(s+1)) exactly.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> u(-9, 9), den(1, 7);
  auto rq = [&] { return Exact(Rational(u(rng), den(rng))); };
  int line_checks = 0;
  for (const auto& name : {"circle", "tv_screen", "bad_quadratic:3", "random_rz:3:1", "random_rz:4:2"}) {
    const auto in = corpus_instance(name);
    const int d = in.p.num_vars(), m = in.p.degree();
    const auto Ph = homogenize(in.p, m);
    for (int t = 0; t < 20; ++t) {
      std::vector<Exact> x(d), x0(d);
      for (auto& v : x) v = rq();
      for (auto& v : x0) v = rq();
      Exact s = rq();
      if (s == Exact(-1)) s = Exact(2);
      std::vector<Exact> Xs{Exact(1) + s};
      for (int i = 0; i < d; ++i) Xs.push_back(x[i] + s * x0[i]);
      std::vector<Exact> y(d);
      for (int i = 0; i < d; ++i) y[i] = x0[i] + (x[i] - x0[i]) / (Exact(1) + s);
      Exact scale(1);
      for (int k = 0; k < m; ++k) scale *= Exact(1) + s;
      const bool ok = Ph(Xs) == scale * in.p(y);
      r.require(ok, std::string("projective restriction identity on ") + name);
      line_checks += ok;
    }
  }
  r.detail << pencils.size() << " pencils: max trace residual " << worst_derdet << ", max pairing residual "
           << worst_pair << "; adjugate exact for " << adj_sizes << "/4 sizes; circle det V and adj V exact; "
           << line_checks << "/100 exact line identities";
}

// 7. Cofactor interlacing versus basepoint definiteness.
void cofactor_cross_check(Result& r) {
  int positive_ok = 0, indefinite_ok = 0;
  for (int k = 0; k < 20; ++k) {
    const int m = 2 + k % 3;
    const auto in = random_rz(m, 200 + k, CoeffMode::kFloat);
    const auto res = construct(pf(in), origin(2), InterlacerSpec<Complex>{}, k);
    const auto v = cauchy_cross_check(res.pencil, origin(2), 100);
    bool all_interlace = true;
    for (const auto& j : v.extra["cofactors"]) all_interlace = all_interlace && j["status"] == "pass";
    const bool ok = v.passed() && all_interlace && v.extra["basepoint"] == "positive-definite";
    r.require(ok, "constructed pencil " + std::to_string(k) + ": every cofactor interlaces");
    positive_ok += ok;
  }
  for (int k = 0; k < 10; ++k) {
    const auto eng = indefinite_pencil(3 + k % 2, k / 2);
    const auto v = cauchy_cross_check(eng.pencil, origin(2), 100);
    bool any_fail = false;
    for (const auto& j : v.extra["cofactors"]) any_fail = any_fail || j["status"] == "fail";
    const bool ok = v.passed() && any_fail && v.extra["basepoint"] == "indefinite";
    r.require(ok, "engineered pencil " + std::to_string(k) + ": some cofactor fails");
    indefinite_ok += ok;
  }
  r.detail << positive_ok << "/20 positive pencils with all cofactors interlacing, " << indefinite_ok
           << "/10 indefinite pencils with a failing cofactor";
}

// 8. Real-symmetric doubling.
void realification(Result& r) {
  std::vector<MatrixPencil<Complex>> pencils;
  for (int m = 2; m <= 4; ++m) pencils.push_back(random_rz(m, 3).pencil->cast<Complex>());
  pencils.push_back(construct(circle().p, circle().x0, InterlacerSpec<Exact>{}).pencil.cast<Complex>());
  pencils.push_back(construct(pf(random_rz(3, 4, CoeffMode::kFloat)), origin(2), InterlacerSpec<Complex>{}).pencil);
  double worst = 0;
  int psd_agree = 0, psd_total = 0;
  for (std::size_t k = 0; k < pencils.size(); ++k) {
    const auto& A = pencils[k];
    const auto R = realify(A);
    r.require(R.symmetry() == SymmetryClass::kRealSymmetric, "real-symmetric output");
    std::mt19937_64 rng(k);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> x{g(rng), g(rng)};
      const Complex d = A.eval(x).determinant(), dr = R.eval(x).determinant();
      const double rel = std::abs(dr - d * d) / std::max(std::abs(d * d), 1e-300);
      // Near the curve both vanish; measure against the entry scale there.
      const double scale = std::pow(A.eval(x).cwiseAbs().maxCoeff(), 2 * A.n());
      const double res = std::min(rel, std::abs(dr - d * d) / scale);
      worst = std::max(worst, res);
      const double a = lambda_min(A.eval(x)), b = lambda_min(R.eval(x));
      const bool same = (a >= 0) == (b >= 0) || std::abs(a - b) <= 1e-12;
      psd_agree += same;
      ++psd_total;
    }
  }
  r.require(worst <= 1e-10, "det(realify A) = det(A)^2 within 1e-10");
  r.require(psd_agree == psd_total, "PSD region agreement");
  r.detail << pencils.size() << " pencils x 100 points: max relative det error " << worst << ", PSD agreement "
           << psd_agree << "/" << psd_total;
}

// 9. Membership through the Renegar derivatives.
void membership_suite(Result& r) {
  std::vector<Instance> cases{circle()};
  for (int m = 2; m <= 4; ++m)
    for (std::uint64_t s = 0; s < 2; ++s) cases.push_back(random_rz(m, s, CoeffMode::kFloat));
  int agree = 0, total = 0, inside = 0, excluded = 0, nested = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& in = cases[k];
    const auto p = pf(in);
    const auto A = in.pencil->cast<Complex>();
    const MembershipOracle<Complex> oracle(p, origin(2));
    // Box sized by the farthest boundary point over a fan of directions.
    double reach = 0;
    for (int t = 0; t < 64; ++t) {
      const double th = 2 * std::numbers::pi * t / 64;
      const Eigen::MatrixXcd B = A.eval({std::cos(th), std::sin(th)}) - A.eval({0.0, 0.0});
      const double top = hermitian_eigenvalues(-B).back();
      reach = std::max(reach, top > 1e-12 ? 1.0 / top : 0.0);
    }
    const double box = std::min(1.5 * reach, 50.0);
    std::mt19937_64 rng(k);
    std::uniform_real_distribution<double> u(-box, box);
    for (int i = 0; i < 500; ++i) {
      const std::vector<double> x{u(rng), u(rng)};
      const double lm = lambda_min(A.eval(x));
      const double band = 1e-6 * std::max(1.0, A.eval(x).cwiseAbs().maxCoeff());
      if (std::abs(lm) <= band) {
        ++excluded;
        continue;
      }
      const bool truth = lm > 0;
      const std::vector<Complex> xc{x[0], x[1]};
      const bool got = oracle.contains(xc, 1e-9);
      agree += got == truth;
      ++total;
      if (truth) {
        ++inside;
        r.require(p.evaluate_complex(xc).real() > 0, "p > 0 inside");
        const auto lv = oracle.levels(xc, 1e-9);
        bool mono = true;
        for (std::size_t j = 1; j < lv.size(); ++j) mono = mono && (!lv[j - 1] || lv[j]);
        mono = mono && std::all_of(lv.begin(), lv.end(), [](bool b) { return b; });
        nested += mono;
        r.require(mono, "Renegar levels nested at an interior point");
      }
    }
  }
  r.require(agree == total, "membership agrees with the component");
  r.detail << cases.size() << " instances: " << agree << "/" << total << " points agree (" << inside
           << " inside, " << excluded << " in the boundary band); nesting holds at " << nested << "/" << inside
           << " interior points";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Result&)>>> criteria{
      {"circle end to end (exact)", circle_end_to_end},
      {"round trip on generated pencils", round_trip},
      {"RZ classification of named examples", classification},
      {"Hermite PSD vs line sampling", hermite_agreement},
      {"interlacing suite", interlacing_suite},
      {"identity suite", identity_suite},
      {"cofactor interlacing vs definiteness", cofactor_cross_check},
      {"realification", realification},
      {"membership and Renegar nesting", membership_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu: %s  %s [%.2f s] %s\n", i + 1, r.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), r.detail.str().c_str());
    std::fflush(stdout);
    failed += !r.ok;
  }
  return failed == 0 ? 0 : 1;
}
