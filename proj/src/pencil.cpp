#include "rzlmi/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rzlmi/interlace.hpp"
#include "rzlmi/poly_io.hpp"
#include "rzlmi/rz.hpp"
#include "rzlmi/sampling.hpp"

namespace rzlmi {

std::string to_string(SymmetryClass c) { return c == SymmetryClass::kRealSymmetric ? "real-symmetric" : "hermitian"; }

// ---- MatrixPencil -------------------------------------------------------------

template <class K>
MatrixPencil<K>::MatrixPencil(std::vector<DenseMatrix<K>> matrices, SymmetryClass cls, double tol)
    : a_(std::move(matrices)), cls_(cls) {
  if (a_.empty()) throw std::invalid_argument("a pencil needs at least A_0");
  const int n = a_.front().rows();
  double big = 0;
  for (const auto& m : a_) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("pencil matrices must all be n x n");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) big = std::max(big, magnitude(m(i, j)));
  }
  for (std::size_t alpha = 0; alpha < a_.size(); ++alpha) {
    const auto& m = a_[alpha];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const K diff = m(i, j) - conj_of(m(j, i));
        const bool ok = kIsExact<K> ? is_zero(diff) : magnitude(diff) <= tol * std::max(big, 1.0);
        if (!ok)
          throw std::invalid_argument("A_" + std::to_string(alpha) + " is not hermitian at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        if (cls == SymmetryClass::kRealSymmetric) {
          const double im = std::abs(to_complex(m(i, j)).imag());
          if (kIsExact<K> ? im != 0.0 : im > tol * std::max(big, 1.0))
            throw std::invalid_argument("A_" + std::to_string(alpha) + " has imaginary entries in a real-symmetric pencil");
        }
      }
  }
}

template <class K>
MatrixPencil<K> MatrixPencil<K>::from_matrices(std::vector<DenseMatrix<K>> matrices, double tol) {
  bool real = true;
  for (const auto& m : matrices)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) real = real && to_complex(m(i, j)).imag() == 0.0;
  return MatrixPencil(std::move(matrices), real ? SymmetryClass::kRealSymmetric : SymmetryClass::kHermitian, tol);
}

template <class K>
DenseMatrix<K> MatrixPencil<K>::at(const std::vector<K>& x) const {
  if (static_cast<int>(x.size()) != d()) throw DimensionError("point has wrong dimension for the pencil");
  std::vector<K> X{ScalarTraits<K>::from_int(1)};
  X.insert(X.end(), x.begin(), x.end());
  return at_projective(X);
}

template <class K>
DenseMatrix<K> MatrixPencil<K>::at_projective(const std::vector<K>& X) const {
  if (static_cast<int>(X.size()) != d() + 1) throw DimensionError("point has wrong dimension for the pencil");
  DenseMatrix<K> out(n(), n());
  for (int alpha = 0; alpha <= d(); ++alpha) {
    if (is_zero(X[alpha])) continue;
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) out(i, j) += X[alpha] * a_[alpha](i, j);
  }
  return out;
}

template <class K>
Eigen::MatrixXcd MatrixPencil<K>::eval_projective(const std::vector<Complex>& X) const {
  if (static_cast<int>(X.size()) != d() + 1) throw DimensionError("point has wrong dimension for the pencil");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n(), n());
  for (int alpha = 0; alpha <= d(); ++alpha) out += X[alpha] * to_eigen(a_[alpha]);
  return out;
}

template <class K>
Eigen::MatrixXcd MatrixPencil<K>::eval(const std::vector<double>& x) const {
  std::vector<Complex> X{1.0};
  for (double v : x) X.emplace_back(v, 0.0);
  return eval_projective(X);
}

template <class K>
PolyMatrix<K> MatrixPencil<K>::symbolic_projective() const {
  PolyMatrix<K> out(n(), n(), d() + 1);
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) {
      Polynomial<K> e(d() + 1);
      for (int alpha = 0; alpha <= d(); ++alpha) {
        Exponent ex(d() + 1, 0);
        ex[alpha] = 1;
        e.add_term(ex, a_[alpha](i, j));
      }
      out.set(i, j, std::move(e));
    }
  return out;
}

template <class K>
PolyMatrix<K> MatrixPencil<K>::symbolic() const {
  PolyMatrix<K> out(n(), n(), d());
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) {
      Polynomial<K> e = Polynomial<K>::constant(d(), a_[0](i, j));
      for (int alpha = 1; alpha <= d(); ++alpha) {
        Exponent ex(d(), 0);
        ex[alpha - 1] = 1;
        e.add_term(ex, a_[alpha](i, j));
      }
      out.set(i, j, std::move(e));
    }
  return out;
}

// ---- determinant --------------------------------------------------------------

namespace {

Polynomial<Complex> interpolate_det(const MatrixPencil<Complex>& pencil, std::uint64_t seed) {
  const int d = pencil.d(), n = pencil.n();
  std::vector<Exponent> monos;
  for (int k = 0; k <= n; ++k)
    for (auto& e : monomials_of_degree(d, k)) monos.push_back(std::move(e));
  const int cols = static_cast<int>(monos.size());
  const int rows = 2 * cols;
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd b(rows);
  Rng rng = stream_rng(seed, 0);
  std::normal_distribution<double> g;
  for (int r = 0; r < rows; ++r) {
    std::vector<double> x(d);
    for (auto& v : x) v = g(rng);
    for (int c = 0; c < cols; ++c) {
      Complex t(1.0);
      for (int i = 0; i < d; ++i) t *= std::pow(x[i], monos[c][i]);
      A(r, c) = t;
    }
    b(r) = pencil.eval(x).determinant();
  }
  const Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
  Polynomial<Complex> out(d);
  for (int c = 0; c < cols; ++c) out.add_term(monos[c], Complex(coef(c).real(), 0.0));
  return out.pruned(1e-12);
}

// Cofactor adjugate of a numeric matrix (valid at singular points too).
Eigen::MatrixXcd numeric_adjugate(const Eigen::MatrixXcd& m) {
  DenseMatrix<Complex> dm = from_eigen(m);
  return to_eigen(adjugate(dm, Complex(0.0), Complex(1.0)));
}

template <class K>
HomogeneousPolynomial<Complex> projective_det(const MatrixPencil<K>& pencil) {
  const auto D = det_poly(pencil).template cast<Complex>();
  if (D.is_zero()) throw std::invalid_argument("pencil determinant is identically zero");
  return homogenize(D, pencil.n());
}

}  // namespace

template <class K>
Polynomial<K> det_poly(const MatrixPencil<K>& pencil, int symbolic_bound) {
  if (pencil.n() > symbolic_bound) {
    if constexpr (kIsExact<K>) {
      throw SizeBoundError("pencil too large for a symbolic determinant in exact mode");
    } else {
      return interpolate_det(pencil, 0);
    }
  }
  const auto S = pencil.symbolic();
  Polynomial<K> D = determinant(S);
  if constexpr (!kIsExact<K>) {
    if (pencil.symmetry() == SymmetryClass::kHermitian || pencil.symmetry() == SymmetryClass::kRealSymmetric)
      D = D.real_part().pruned(1e-14);
  }
  return D;
}

// ---- verification ------------------------------------------------------------

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["status"] = to_string(status);
  j["det_residual"] = det_residual;
  j["identity_error"] = identity_error;
  j["basepoint_spectrum"] = basepoint_spectrum;
  j["basepoint"] = to_string(basepoint);
  j["divisible"] = divisible;
  j["division_residual"] = division_residual;
  j["h"] = h;
  j["h_samples"] = h_samples.size();
  if (!h_samples.empty()) {
    j["h_min"] = *std::min_element(h_samples.begin(), h_samples.end());
    j["h_max"] = *std::max_element(h_samples.begin(), h_samples.end());
  }
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) checks_json.push_back(c.to_json());
  j["checks"] = std::move(checks_json);
  return j;
}

namespace {

Status combine(const std::vector<VerdictReport>& checks) {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == Status::kFail) return Status::kFail;
    if (c.status == Status::kInconclusive) inconclusive = true;
  }
  return inconclusive ? Status::kInconclusive : Status::kPass;
}

}  // namespace

template <class K>
VerificationReport verify_lmi(const MatrixPencil<K>& pencil, const Polynomial<K>& p, const std::vector<K>& x0,
                              double tol, int samples, std::uint64_t seed, double box) {
  if (p.num_vars() != pencil.d()) throw DimensionError("polynomial and pencil use different variable counts");
  if (static_cast<int>(x0.size()) != pencil.d()) throw DimensionError("base point has wrong dimension");
  VerificationReport rep;
  const int n = pencil.n(), d = pencil.d();
  const std::vector<double> x0d = to_doubles(x0);

  VerdictReport base;
  base.check = "basepoint-definite";
  base.tol = tol;
  base.tested = 1;
  const Eigen::MatrixXcd A0 = to_eigen(pencil.at(x0));
  rep.basepoint_spectrum = hermitian_eigenvalues(A0);
  rep.basepoint = classify_definiteness(A0, 1e-9);
  rep.identity_error = (A0 - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (rep.basepoint != Definiteness::kPositive) {
    base.status = rep.basepoint == Definiteness::kInconclusive ? Status::kInconclusive : Status::kFail;
    Witness w;
    w.point = x0d;
    w.detail = "pencil at the base point is " + to_string(rep.basepoint);
    w.value = rep.basepoint_spectrum.empty() ? 0.0 : rep.basepoint_spectrum.front();
    base.witness = w;
  }
  rep.checks.push_back(base);

  VerdictReport div;
  div.check = "det-divisible-by-p";
  div.tol = tol;
  const Polynomial<K> D = det_poly(pencil);
  Polynomial<K> h(d);
  if (D.is_zero()) {
    div.status = Status::kFail;
    div.message = "pencil determinant is identically zero";
  } else {
    const auto q = exact_divide(D, p, tol);
    rep.divisible = q.exact;
    rep.division_residual = q.residual;
    div.max_residual = q.residual;
    h = q.quotient;
    if (!q.exact) {
      div.status = Status::kFail;
      div.message = "det(A) is not divisible by p";
    } else {
      rep.h = polynomial_to_json(h);
    }
  }
  rep.checks.push_back(div);

  VerdictReport ident;
  ident.check = "det-identity";
  ident.tol = tol;
  VerdictReport hpos;
  hpos.check = "h-positive-on-interior";
  hpos.tol = tol;
  if (rep.divisible) {
    const auto pf = p.template cast<Complex>();
    const auto hf = h.template cast<Complex>();
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int worst = -1;
    std::vector<std::vector<double>> pts(samples);
    std::vector<double> res(samples, 0.0);
    for (int i = 0; i < samples; ++i) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      std::vector<double> x(d);
      for (int k = 0; k < d; ++k) x[k] = x0d[k] + box * unif(rng);
      std::vector<Complex> xc(x.begin(), x.end());
      const Complex det = pencil.eval(x).determinant();
      const Complex ph = pf.evaluate_complex(xc) * hf.evaluate_complex(xc);
      const double scale = std::max({pf.evaluation_scale(xc) * hf.evaluation_scale(xc), std::abs(det), 1e-300});
      res[i] = std::abs(det - ph) / scale;
      pts[i] = std::move(x);
      if (worst < 0 || res[i] > res[worst]) worst = i;
    }
    ident.tested = samples;
    if (worst >= 0) {
      ident.max_residual = res[worst];
      rep.det_residual = res[worst];
      if (res[worst] > tol) {
        ident.status = Status::kFail;
        Witness w;
        w.point = pts[worst];
        w.detail = "det A(x) differs from p(x) h(x)";
        w.value = res[worst];
        ident.witness = w;
      }
    }

    // h > 0 on points of the base point's component, found by rejection sampling.
    std::vector<Complex> x0c(x0d.begin(), x0d.end());
    const MembershipOracle<Complex> oracle(pf, x0c);
    Rng rng = stream_rng(seed ^ 0xa5a5a5a5ULL, 0);
    for (int tries = 0; tries < 20 * samples && static_cast<int>(rep.h_samples.size()) < samples; ++tries) {
      std::vector<Complex> x(d);
      for (int k = 0; k < d; ++k) x[k] = x0d[k] + box * unif(rng);
      if (!oracle.contains(x, 0.0)) continue;
      const double hv = hf.evaluate_complex(x).real();
      const double hs = std::max(hf.evaluation_scale(x), 1e-300);
      rep.h_samples.push_back(hv);
      if (hpos.status == Status::kPass && hv <= tol * hs) {
        hpos.status = hv < -tol * hs ? Status::kFail : Status::kInconclusive;
        Witness w;
        w.point = real_parts(x);
        w.detail = "h is not positive at an interior point";
        w.value = hv;
        hpos.witness = w;
      } else if (hpos.status == Status::kInconclusive && hv < -tol * hs) {
        hpos.status = Status::kFail;
      }
    }
    hpos.tested = static_cast<int>(rep.h_samples.size());
  } else {
    ident.status = Status::kInconclusive;
    ident.message = "skipped: no cofactor h";
    hpos.status = Status::kInconclusive;
    hpos.message = "skipped: no cofactor h";
  }
  rep.checks.push_back(ident);
  rep.checks.push_back(hpos);
  rep.status = combine(rep.checks);
  return rep;
}

// ---- identity checks -------------------------------------------------------------

template <class K>
VerdictReport pairing_check(const MatrixPencil<K>& pencil, const std::vector<K>& X0, int curve_samples, double tol,
                            std::uint64_t seed) {
  if (static_cast<int>(X0.size()) != pencil.d() + 1) throw DimensionError("X0 has wrong dimension");
  VerdictReport rep;
  rep.check = "pairing";
  rep.tol = tol;
  const int n = pencil.n(), d = pencil.d();
  const auto P = projective_det(pencil);
  std::vector<Complex> X0c;
  for (const auto& v : X0) X0c.push_back(to_complex(v));
  const auto dP = directional_derivative(P, X0c);
  const Eigen::MatrixXcd U0 = pencil.eval_projective(X0c);
  const double u0n = U0.operatorNorm();
  const auto Pd = dehomogenize(P);
  int line = 0, failures_to_separate = 0;
  while (rep.tested < curve_samples) {
    if (failures_to_separate > 20) throw std::runtime_error("could not locate distinct curve points (det not reduced?)");
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(line++));
    const auto u = sphere_direction(rng, d);
    // P((0, u) + s X0) as a polynomial in s.
    std::vector<Complex> base{0.0};
    for (double v : u) base.emplace_back(v, 0.0);
    const auto f = restrict_to_line(P.poly(), base, X0c);
    if (f.degree() < 1) {
      ++failures_to_separate;
      continue;
    }
    const auto roots = real_roots(f, 1e-10);
    std::vector<Complex> s;
    for (const auto& r : roots.roots) s.emplace_back(r.value, 0.0);
    s.insert(s.end(), roots.nonreal.begin(), roots.nonreal.end());
    bool multiple = false;
    for (const auto& r : roots.roots) multiple = multiple || r.multiplicity > 1;
    if (multiple || static_cast<int>(s.size()) != f.degree()) {
      ++failures_to_separate;
      continue;
    }
    for (const auto& sv : s) {
      if (rep.tested >= curve_samples) break;
      std::vector<Complex> X(d + 1);
      for (int a = 0; a <= d; ++a) X[a] = base[a] + sv * X0c[a];
      const Eigen::MatrixXcd V = numeric_adjugate(pencil.eval_projective(X));
      const Complex dp = dP.evaluate_complex(X);
      const Eigen::MatrixXcd lhs = V * U0 * V;
      const double vn = V.norm();
      const double denom = std::max(vn * vn * u0n, 1e-300);
      const double r = (lhs - dp * V).norm() / denom;
      ++rep.tested;
      if (r > rep.max_residual) {
        rep.max_residual = r;
        if (r > tol) {
          rep.status = Status::kFail;
          Witness w;
          w.point = real_parts(X);
          w.detail = "V U(X0) V differs from P'(X) V at a curve point";
          w.value = r;
          rep.witness = w;
        }
      }
    }
  }
  (void)n;
  (void)Pd;
  return rep;
}

template <class K>
VerdictReport eigenspace_orthogonality_check(const MatrixPencil<K>& pencil, const std::vector<K>& X0, double tol,
                                             std::uint64_t seed) {
  if (static_cast<int>(X0.size()) != pencil.d() + 1) throw DimensionError("X0 has wrong dimension");
  VerdictReport rep;
  rep.check = "eigenspace-orthogonality";
  rep.tol = tol;
  const int n = pencil.n(), d = pencil.d();
  std::vector<Complex> X0c;
  for (const auto& v : X0) X0c.push_back(to_complex(v));
  const Eigen::MatrixXcd U0 = pencil.eval_projective(X0c);
  const Definiteness def = classify_definiteness(U0, 1e-9);
  rep.extra["basepoint"] = to_string(def);
  if (n == 1) {
    rep.tested = 1;
    rep.extra["compressions"] = std::vector<double>{U0(0, 0).real()};
    rep.extra["compression_verdict"] = to_string(def);
    return rep;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(U0);
  if (!lu.isInvertible()) {
    rep.status = Status::kInconclusive;
    rep.message = "U(X0) is singular";
    return rep;
  }
  bool saw_nonreal = false;
  for (int attempt = 0; attempt < 20; ++attempt) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(attempt));
    const auto u = sphere_direction(rng, d);
    std::vector<Complex> X{0.0};
    for (double v : u) X.emplace_back(v, 0.0);
    const Eigen::MatrixXcd UX = pencil.eval_projective(X);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(lu.solve(UX));
    const auto& lam = es.eigenvalues();
    double scale = 1.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) scale = std::max(scale, std::abs(lam(i)));
    bool ok = true;
    for (Eigen::Index i = 0; i < lam.size() && ok; ++i) {
      if (std::abs(lam(i).imag()) > 1e-8 * scale) {
        ok = false;
        saw_nonreal = true;
      }
      for (Eigen::Index j = i + 1; j < lam.size() && ok; ++j)
        if (std::abs(lam(i) - lam(j)) < 1e-6 * scale) ok = false;
    }
    if (!ok) continue;
    const Eigen::MatrixXcd& V = es.eigenvectors();
    const Eigen::MatrixXcd G = V.adjoint() * U0 * V;
    std::vector<double> comp(n);
    double off = 0;
    for (int i = 0; i < n; ++i) comp[i] = G(i, i).real();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off = std::max(off, std::abs(G(i, j)) / std::sqrt(std::abs(comp[i] * comp[j])));
    const bool all_pos = std::all_of(comp.begin(), comp.end(), [](double c) { return c > 0; });
    const bool all_neg = std::all_of(comp.begin(), comp.end(), [](double c) { return c < 0; });
    const Definiteness from_comp =
        all_pos ? Definiteness::kPositive : all_neg ? Definiteness::kNegative : Definiteness::kIndefinite;
    rep.tested = 1;
    rep.max_residual = off;
    rep.extra["compressions"] = comp;
    rep.extra["compression_verdict"] = to_string(from_comp);
    Witness w;
    w.x0 = real_parts(X0c);
    w.dir = u;
    if (off > tol) {
      rep.status = Status::kFail;
      w.detail = "eigenvectors are not U(X0)-orthogonal";
      w.value = off;
      rep.witness = w;
    } else if (from_comp != def) {
      rep.status = def == Definiteness::kInconclusive ? Status::kInconclusive : Status::kFail;
      w.detail = "signs of the compressions disagree with the definiteness of U(X0)";
      rep.witness = w;
    }
    return rep;
  }
  // A definite U(X0) forces a real spectrum on every line, so a persistently
  // non-real spectrum certifies indefiniteness.
  if (saw_nonreal) {
    rep.tested = 1;
    rep.extra["compression_verdict"] = "indefinite (non-real spectrum)";
    rep.status = def == Definiteness::kIndefinite ? Status::kPass : Status::kFail;
    return rep;
  }
  throw std::runtime_error("no line through X0 met the curve in distinct points");
}

template <class K>
VerdictReport cauchy_cross_check(const MatrixPencil<K>& pencil, const std::vector<K>& x0, int num_lines, double tol,
                                 std::uint64_t seed, int only_j, int threads) {
  if (static_cast<int>(x0.size()) != pencil.d()) throw DimensionError("base point has wrong dimension");
  const int n = pencil.n();
  if (only_j >= n || only_j < -1) throw std::out_of_range("cofactor index out of range");
  VerdictReport rep;
  rep.check = "cauchy-cross-check";
  rep.tol = tol;
  const Polynomial<K> D = det_poly(pencil);
  if (D.is_zero()) throw std::invalid_argument("pencil determinant is identically zero");
  const auto P = homogenize(D, n);
  const auto adj = adjugate(pencil.symbolic_projective(), 6);
  const Definiteness def = classify_definiteness(to_eigen(pencil.at(x0)), 1e-9);
  rep.extra["basepoint"] = to_string(def);
  nlohmann::json per = nlohmann::json::array();
  bool any_fail = false, any_inconclusive = false;
  for (int j = 0; j < n; ++j) {
    if (only_j >= 0 && j != only_j) continue;
    if (adj(j, j).is_zero())
      throw std::invalid_argument("diagonal cofactor V_" + std::to_string(j + 1) + std::to_string(j + 1) +
                                  " vanishes identically (determinant not reduced or saturated)");
    const HomogeneousPolynomial<K> Vjj(adj(j, j), n - 1);
    nlohmann::json entry;
    entry["j"] = j + 1;
    try {
      const auto v = interlaces_sampled(P, Vjj, x0, num_lines, tol, seed, threads);
      entry["status"] = to_string(v.status);
      if (v.witness) entry["witness"] = v.witness->to_json();
      any_fail = any_fail || v.status == Status::kFail;
      any_inconclusive = any_inconclusive || v.status == Status::kInconclusive;
    } catch (const std::invalid_argument& e) {
      entry["status"] = "inconclusive";
      entry["message"] = e.what();
      any_inconclusive = true;
    }
    per.push_back(entry);
    ++rep.tested;
  }
  rep.extra["cofactors"] = per;
  const bool definite = def == Definiteness::kPositive || def == Definiteness::kNegative;
  if (def == Definiteness::kInconclusive || (any_inconclusive && !any_fail)) {
    rep.status = Status::kInconclusive;
  } else if (definite == !any_fail) {
    rep.status = Status::kPass;
  } else {
    rep.status = Status::kFail;
    Witness w;
    w.point = to_doubles(x0);
    w.detail = definite ? "a diagonal cofactor fails to interlace although U(X0) is definite"
                        : "every diagonal cofactor interlaces although U(X0) is indefinite";
    rep.witness = w;
  }
  return rep;
}

template <class K>
VerdictReport derdet_check(const MatrixPencil<K>& pencil, int samples, double tol, std::uint64_t seed) {
  VerdictReport rep;
  rep.check = "derdet";
  rep.tol = tol;
  const int d = pencil.d();
  const auto P = projective_det(pencil);
  std::vector<Polynomial<Complex>> dP;
  for (int a = 0; a <= d; ++a) dP.push_back(P.poly().partial(a));
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> g;
    std::vector<Complex> X(d + 1);
    for (auto& v : X) v = Complex(g(rng), 0.0);
    const Eigen::MatrixXcd adj = numeric_adjugate(pencil.eval_projective(X));
    for (int a = 0; a <= d; ++a) {
      const Eigen::MatrixXcd A = to_eigen(pencil[a]);
      const Complex rhs = (A * adj).trace();
      const Complex lhs = dP[a].evaluate_complex(X);
      double scale = 0;
      for (int k = 0; k < A.rows(); ++k)
        for (int l = 0; l < A.cols(); ++l) scale += std::abs(A(k, l)) * std::abs(adj(l, k));
      const double r = std::abs(lhs - rhs) / std::max(scale, 1e-300);
      if (r > rep.max_residual) {
        rep.max_residual = r;
        if (r > tol) {
          rep.status = Status::kFail;
          Witness w;
          w.point = real_parts(X);
          w.detail = "derivative of det differs from trace(A_alpha adj U) for alpha = " + std::to_string(a);
          w.value = r;
          rep.witness = w;
        }
      }
    }
    ++rep.tested;
  }
  return rep;
}

template <class K>
MatrixPencil<K> realify(const MatrixPencil<K>& pencil) {
  const int n = pencil.n();
  std::vector<DenseMatrix<K>> out;
  for (const auto& A : pencil.matrices()) {
    DenseMatrix<K> R(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        K b, c;
        if constexpr (kIsExact<K>) {
          b = K(A(i, j).re());
          c = K(A(i, j).im());
        } else {
          b = K(A(i, j).real(), 0.0);
          c = K(A(i, j).imag(), 0.0);
        }
        R(i, j) = b;
        R(i, j + n) = -c;
        R(i + n, j) = c;
        R(i + n, j + n) = b;
      }
    out.push_back(std::move(R));
  }
  return MatrixPencil<K>(std::move(out), SymmetryClass::kRealSymmetric, 1e-9);
}

// ---- JSON ---------------------------------------------------------------------

template <class K>
nlohmann::json pencil_to_json(const MatrixPencil<K>& pencil) {
  nlohmann::json j;
  j["d"] = pencil.d();
  j["n"] = pencil.n();
  j["class"] = to_string(pencil.symmetry());
  j["mode"] = kIsExact<K> ? "rational" : "float";
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& A : pencil.matrices()) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < A.rows(); ++i) {
      nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
      for (int k = 0; k < A.cols(); ++k) {
        if constexpr (kIsExact<K>) {
          rr.push_back(scalar_to_json_re(A(i, k)));
          ir.push_back(scalar_to_json_im(A(i, k)));
        } else {
          rr.push_back(A(i, k).real());
          ir.push_back(A(i, k).imag());
        }
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ir));
    }
    mats.push_back({{"re", std::move(re)}, {"im", std::move(im)}});
  }
  j["matrices"] = std::move(mats);
  return j;
}

PencilDocument pencil_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("$: pencil must be a JSON object");
  for (const char* key : {"d", "n"})
    if (!j.contains(key) || !j[key].is_number_integer()) throw ParseError(std::string("$.") + key + ": missing or not an integer");
  const int d = j["d"].get<int>(), n = j["n"].get<int>();
  if (d < 0 || n < 1) throw ParseError("$: need d >= 0 and n >= 1");
  if (!j.contains("matrices") || !j["matrices"].is_array()) throw ParseError("$.matrices: missing or not an array");
  if (static_cast<int>(j["matrices"].size()) != d + 1) throw ParseError("$.matrices: expected d+1 matrices");
  SymmetryClass cls = SymmetryClass::kHermitian;
  if (j.contains("class")) {
    const std::string c = j["class"].is_string() ? j["class"].get<std::string>() : "";
    if (c == "real-symmetric") {
      cls = SymmetryClass::kRealSymmetric;
    } else if (c != "hermitian") {
      throw ParseError("$.class: expected 'hermitian' or 'real-symmetric'");
    }
  }
  bool saw_float = false;
  std::vector<DenseMatrix<Exact>> mats;
  for (int a = 0; a <= d; ++a) {
    const auto& m = j["matrices"][a];
    const std::string where = "$.matrices[" + std::to_string(a) + "]";
    if (!m.is_object() || !m.contains("re")) throw ParseError(where + ".re: missing");
    DenseMatrix<Exact> A(n, n);
    for (const char* part : {"re", "im"}) {
      if (!m.contains(part)) continue;
      const auto& rows = m[part];
      if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw ParseError(where + "." + part + ": expected n rows");
      for (int i = 0; i < n; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
          throw ParseError(where + "." + part + "[" + std::to_string(i) + "]: expected n entries");
        for (int k = 0; k < n; ++k) {
          const auto& v = rows[i][k];
          saw_float = saw_float || v.is_number_float();
          const Rational r = rational_from_json(
              v, where + "." + part + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
          if (std::string(part) == "re") {
            A(i, k) = Exact(r, A(i, k).im());
          } else {
            A(i, k) = Exact(A(i, k).re(), r);
          }
        }
      }
    }
    mats.push_back(std::move(A));
  }
  PencilDocument doc;
  doc.mode = saw_float ? CoeffMode::kFloat : CoeffMode::kExact;
  if (j.contains("mode") && j["mode"].is_string()) {
    try {
      doc.mode = coeff_mode_from_string(j["mode"].get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("$.mode: ") + e.what());
    }
  }
  try {
    if (doc.mode == CoeffMode::kExact) {
      doc.pencil = MatrixPencil<Exact>(std::move(mats), cls);
    } else {
      // Float documents are validated with a tolerance after conversion.
      std::vector<DenseMatrix<Complex>> fm;
      for (const auto& A : mats) {
        DenseMatrix<Complex> F(n, n);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) F(i, k) = A(i, k).to_complex();
        fm.push_back(std::move(F));
      }
      MatrixPencil<Complex> check(fm, cls, 1e-9);
      (void)check;
      // Symmetrize exactly so the exact container accepts it.
      for (auto& A : mats)
        for (int i = 0; i < n; ++i)
          for (int k = i; k < n; ++k) {
            if (i == k) {
              A(i, i) = Exact(A(i, i).re());
            } else {
              A(k, i) = A(i, k).conj();
            }
          }
      doc.pencil = MatrixPencil<Exact>(std::move(mats), cls);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("$.matrices: ") + e.what());
  }
  return doc;
}

PencilDocument parse_pencil(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what());
  }
  // Reports that wrap a pencil (e.g. construct output) are accepted too.
  if (j.is_object() && j.contains("pencil") && j["pencil"].is_object()) return pencil_from_json(j["pencil"]);
  return pencil_from_json(j);
}

#define RZLMI_INSTANTIATE(K)                                                                                       \
  template class MatrixPencil<K>;                                                                                  \
  template Polynomial<K> det_poly(const MatrixPencil<K>&, int);                                                    \
  template VerificationReport verify_lmi(const MatrixPencil<K>&, const Polynomial<K>&, const std::vector<K>&,      \
                                         double, int, std::uint64_t, double);                                      \
  template VerdictReport pairing_check(const MatrixPencil<K>&, const std::vector<K>&, int, double, std::uint64_t); \
  template VerdictReport eigenspace_orthogonality_check(const MatrixPencil<K>&, const std::vector<K>&, double,      \
                                                        std::uint64_t);                                            \
  template VerdictReport cauchy_cross_check(const MatrixPencil<K>&, const std::vector<K>&, int, double,            \
                                            std::uint64_t, int, int);                                              \
  template VerdictReport derdet_check(const MatrixPencil<K>&, int, double, std::uint64_t);                         \
  template MatrixPencil<K> realify(const MatrixPencil<K>&);                                                        \
  template nlohmann::json pencil_to_json(const MatrixPencil<K>&);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
