#include "rzlmi/interlace.hpp"

#include <Eigen/SVD>

#include "rzlmi/rz.hpp"
#include "rzlmi/sampling.hpp"

namespace rzlmi {

template <class K>
DenseMatrix<K> bezout_matrix(const UnivariatePolynomial<K>& f, const UnivariatePolynomial<K>& g) {
  if (f.is_zero()) throw std::invalid_argument("bezout_matrix of the zero polynomial");
  if (f.degree() < 1) throw std::invalid_argument("bezout_matrix needs deg f >= 1");
  if (g.degree() > f.degree()) throw std::invalid_argument("bezout_matrix needs deg g <= deg f");
  std::vector<K> fc = f.coeffs(), gc = g.coeffs();
  gc.resize(fc.size());
  return bezout_coefficients(fc, gc, K{});
}

template <class K>
int common_zero_count(const UnivariatePolynomial<K>& f, const UnivariatePolynomial<K>& g, double rel_tol) {
  const auto b = bezout_matrix(f, g);
  return b.rows() - matrix_rank(b, rel_tol);
}

namespace {

template <class K>
std::vector<K> random_vector(Rng& rng, int n) {
  std::vector<K> v;
  if constexpr (kIsExact<K>) {
    std::uniform_int_distribution<int> pick(-97, 97);
    for (int i = 0; i < n; ++i) v.emplace_back(Rational(pick(rng), 13));
  } else {
    std::normal_distribution<double> g;
    for (int i = 0; i < n; ++i) v.emplace_back(g(rng), 0.0);
  }
  return v;
}

double sylvester_conditioning(const UnivariatePolynomial<Complex>& f, const UnivariatePolynomial<Complex>& g) {
  const int a = f.degree(), b = g.degree();
  if (a <= 0 || b <= 0) return 1.0;
  const int n = a + b;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  const double fs = f.max_abs_coeff(), gs = g.max_abs_coeff();
  for (int r = 0; r < b; ++r)
    for (int k = 0; k <= a; ++k) S(r, r + k) = f.coeff(a - k) / fs;
  for (int r = 0; r < a; ++r)
    for (int k = 0; k <= b; ++k) S(b + r, r + k) = g.coeff(b - k) / gs;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  const auto& s = svd.singularValues();
  return s(0) > 0 ? s(n - 1) / s(0) : 0.0;
}

// Checks degrees, lifts a degree m-2 interlacer by X0 and orients P, Q positive at X0.
template <class K>
std::pair<HomogeneousPolynomial<K>, HomogeneousPolynomial<K>> prepare_pair(const HomogeneousPolynomial<K>& P,
                                                                           const HomogeneousPolynomial<K>& Q,
                                                                           const std::vector<K>& x0) {
  if (P.num_vars() != Q.num_vars()) throw DimensionError("P and Q have different variable counts");
  if (static_cast<int>(x0.size()) + 1 != P.num_vars()) throw DimensionError("base point has wrong dimension");
  const int m = P.degree();
  if (m < 1) throw std::invalid_argument("P must have degree at least 1");
  if (Q.is_zero()) throw std::invalid_argument("Q is zero, so it is not relatively prime with P");
  HomogeneousPolynomial<K> Qm = Q;
  if (Q.degree() == m - 2) {
    Qm = HomogeneousPolynomial<K>(Q.poly() * Polynomial<K>::variable(Q.num_vars(), 0), m - 1);
  } else if (Q.degree() != m - 1) {
    throw std::invalid_argument("Q must have degree m-1 (or m-2)");
  }
  std::vector<K> X0{ScalarTraits<K>::from_int(1)};
  X0.insert(X0.end(), x0.begin(), x0.end());
  HomogeneousPolynomial<K> Pm = P;
  const K pv = P(X0);
  if (is_zero(pv)) throw std::invalid_argument("P vanishes at the base point");
  if (to_complex(pv).real() < 0) Pm = HomogeneousPolynomial<K>(-P.poly(), m);
  if (to_complex(Qm(X0)).real() < 0) Qm = HomogeneousPolynomial<K>(-Qm.poly(), m - 1);
  return {Pm, Qm};
}

}  // namespace

template <class K>
bool relatively_prime(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q, std::uint64_t seed) {
  if (P.is_zero() || Q.is_zero()) return false;
  if (Q.degree() == 0 || P.degree() == 0) return true;
  Rng rng = stream_rng(seed ^ 0x5bd1e995ULL, 0);
  const int n = P.num_vars();
  for (int attempt = 0; attempt < 4; ++attempt) {
    const auto U = random_vector<K>(rng, n);
    const auto V = random_vector<K>(rng, n);
    const auto f = restrict_to_line(P.poly(), U, V);
    const auto g = restrict_to_line(Q.poly(), U, V);
    // A generic line keeps both degrees; otherwise draw again.
    if (f.degree() != P.degree() || g.degree() != Q.degree()) continue;
    if constexpr (kIsExact<K>) {
      return univariate_gcd(f, g).degree() == 0;
    } else {
      return sylvester_conditioning(f, g) >= 1e-10;
    }
  }
  throw std::runtime_error("could not find a generic line for the coprimality test");
}

template <class K>
PolyMatrix<K> bezoutiant_field(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                               const std::vector<K>& x0, std::uint64_t seed) {
  const auto [Pm, Qm] = prepare_pair(P, Q, x0);
  if (!relatively_prime(Pm, Qm, seed)) throw std::invalid_argument("P and Q are not relatively prime");
  const int m = Pm.degree();
  const int d = static_cast<int>(x0.size());
  const auto p = dehomogenize(Pm);
  const auto q = dehomogenize(Qm);
  const auto cp = symbolic_line_coefficients(p, x0);
  const auto cq = symbolic_line_coefficients(q, x0);
  // Reversal: coefficient of t^j in ȟ is c_{m-j}; in q̌ it is c_{m-1-j}.
  std::vector<Polynomial<K>> f(m + 1, Polynomial<K>(d)), g(m + 1, Polynomial<K>(d));
  for (int j = 0; j <= m; ++j) {
    if (m - j < static_cast<int>(cp.size())) f[j] = cp[m - j];
    if (j <= m - 1 && m - 1 - j < static_cast<int>(cq.size())) g[j] = cq[m - 1 - j];
  }
  return PolyMatrix<K>(bezout_coefficients(f, g, Polynomial<K>(d)));
}

template <class K>
VerdictReport interlaces_sampled(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                 const std::vector<K>& x0, int num_lines, double tol, std::uint64_t seed,
                                 int threads) {
  const auto [Pm, Qm] = prepare_pair(P, Q, x0);
  if (!relatively_prime(Pm, Qm, seed)) throw std::invalid_argument("P and Q are not relatively prime");
  const int m = Pm.degree();
  const int d = static_cast<int>(x0.size());
  VerdictReport rep;
  rep.check = "interlace-sampled";
  rep.tol = tol;
  rep.tested = num_lines;
  std::vector<K> X0{ScalarTraits<K>::from_int(1)};
  X0.insert(X0.end(), x0.begin(), x0.end());
  if (is_zero(Qm(X0))) {
    rep.status = Status::kFail;
    Witness w;
    w.point = to_doubles(X0);
    w.detail = "Q vanishes at the base point, so it has fewer than m-1 roots on lines through it";
    rep.witness = w;
    return rep;
  }
  const auto p = dehomogenize(Pm);
  const auto q = dehomogenize(Qm);

  struct LineResult {
    Status status = Status::kPass;
    std::string detail;
    double violation = 0.0;
    std::vector<double> dir;
  };
  std::vector<LineResult> results(num_lines);
  parallel_for(num_lines, threads, [&](int i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    auto& res = results[i];
    res.dir = sphere_direction(rng, d);
    const auto u = direction_as<K>(res.dir);
    const auto h = reversed_restriction(p, x0, u, m);
    const auto g = reversed_restriction(q, x0, u, m - 1);
    const RootList rh = real_roots(h, tol);
    if (rh.complex_count > 0) {
      res.status = Status::kFail;
      res.detail = "P has non-real roots on this line";
      return;
    }
    if (m == 1) return;
    const RootList rg = real_roots(g, tol);
    if (rg.complex_count > 0) {
      res.status = Status::kFail;
      res.detail = "Q has non-real roots on this line";
      return;
    }
    const auto a = rh.expanded();
    const auto b = rg.expanded();
    double scale = 1.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (double v : b) scale = std::max(scale, std::abs(v));
    const double band = tol * scale;
    for (int k = 0; k < m - 1; ++k) {
      const double lo = a[k] - b[k];
      const double hi = b[k] - a[k + 1];
      if (lo > band || hi > band) {
        res.status = Status::kFail;
        res.violation = std::max(lo, hi) / scale;
        res.detail = lo > band ? "root " + std::to_string(k + 1) + " of P exceeds root " + std::to_string(k + 1) + " of Q"
                               : "root " + std::to_string(k + 1) + " of Q exceeds root " + std::to_string(k + 2) + " of P";
        return;
      }
    }
    if (rh.ambiguous || rg.ambiguous) res.status = Status::kInconclusive;
  });
  int first_fail = -1, first_inc = -1;
  for (int i = 0; i < num_lines; ++i) {
    if (results[i].status == Status::kFail && first_fail < 0) first_fail = i;
    if (results[i].status == Status::kInconclusive && first_inc < 0) first_inc = i;
    rep.max_residual = std::max(rep.max_residual, results[i].violation);
  }
  const int w = first_fail >= 0 ? first_fail : first_inc;
  if (w >= 0) {
    rep.status = results[w].status;
    Witness wit;
    wit.x0 = to_doubles(x0);
    wit.dir = results[w].dir;
    wit.detail = results[w].status == Status::kFail ? results[w].detail : "near-multiple root not resolvable";
    wit.value = results[w].violation;
    rep.witness = wit;
  }
  return rep;
}

template <class K>
VerdictReport psd_interlacing_check(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                    const std::vector<K>& x0, int num_samples, double tol, std::uint64_t seed,
                                    int threads) {
  const PolyMatrix<K> B = bezoutiant_field(P, Q, x0, seed);
  const int d = static_cast<int>(x0.size());
  VerdictReport rep;
  rep.check = "interlace-bezoutiant-psd";
  rep.tol = tol;
  rep.tested = num_samples;
  std::vector<double> lmin(num_samples, 0.0), scale(num_samples, 0.0);
  std::vector<std::vector<double>> pts(num_samples);
  parallel_for(num_samples, threads, [&](int i) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    pts[i] = sphere_direction(rng, d);
    std::vector<Complex> x(pts[i].begin(), pts[i].end());
    const auto ev = hermitian_eigenvalues(to_eigen(B.evaluate_complex(x)));
    if (ev.empty()) return;
    lmin[i] = ev.front();
    for (double v : ev) scale[i] = std::max(scale[i], std::abs(v));
  });
  int first = -1;
  for (int i = 0; i < num_samples; ++i) {
    const double rel = scale[i] > 0 ? -lmin[i] / scale[i] : 0.0;
    rep.max_residual = std::max(rep.max_residual, std::max(rel, 0.0));
    if (rel > tol && first < 0) first = i;
  }
  if (first >= 0) {
    rep.status = Status::kFail;
    Witness w;
    w.x0 = to_doubles(x0);
    w.dir = pts[first];
    w.detail = "Bezoutiant has a negative eigenvalue";
    w.value = lmin[first];
    rep.witness = w;
  }
  return rep;
}

#define RZLMI_INSTANTIATE(K)                                                                                        \
  template DenseMatrix<K> bezout_matrix(const UnivariatePolynomial<K>&, const UnivariatePolynomial<K>&);            \
  template int common_zero_count(const UnivariatePolynomial<K>&, const UnivariatePolynomial<K>&, double);          \
  template bool relatively_prime(const HomogeneousPolynomial<K>&, const HomogeneousPolynomial<K>&, std::uint64_t); \
  template PolyMatrix<K> bezoutiant_field(const HomogeneousPolynomial<K>&, const HomogeneousPolynomial<K>&,         \
                                          const std::vector<K>&, std::uint64_t);                                    \
  template VerdictReport interlaces_sampled(const HomogeneousPolynomial<K>&, const HomogeneousPolynomial<K>&,       \
                                            const std::vector<K>&, int, double, std::uint64_t, int);                \
  template VerdictReport psd_interlacing_check(const HomogeneousPolynomial<K>&, const HomogeneousPolynomial<K>&,    \
                                               const std::vector<K>&, int, double, std::uint64_t, int);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
