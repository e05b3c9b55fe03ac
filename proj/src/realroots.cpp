#include "rzlmi/realroots.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>

namespace rzlmi {

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::kTrue:
      return "true";
    case Tristate::kFalse:
      return "false";
    case Tristate::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

std::vector<double> RootList::expanded() const {
  std::vector<double> out;
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
  return out;
}

// ---- exact rational univariate helpers ---------------------------------------

namespace exact_univariate {

namespace {
void trim(RVec& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}
}  // namespace

RVec from_poly(const UnivariatePolynomial<Exact>& f) {
  RVec out;
  out.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    if (!c.is_real()) throw std::invalid_argument("exact real-root routines need real coefficients");
    out.push_back(c.re());
  }
  return out;
}

RVec derivative(const RVec& f) {
  RVec d;
  for (std::size_t k = 1; k < f.size(); ++k) d.push_back(f[k] * static_cast<long>(k));
  trim(d);
  return d;
}

namespace {
void divide(const RVec& a, const RVec& b, RVec* q, RVec* r) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  RVec rem = a;
  trim(rem);
  const int db = static_cast<int>(b.size()) - 1;
  RVec quo(std::max<int>(0, static_cast<int>(rem.size()) - db), Rational(0));
  while (!rem.empty() && static_cast<int>(rem.size()) - 1 >= db) {
    const int shift = static_cast<int>(rem.size()) - 1 - db;
    const Rational c = rem.back() / b.back();
    quo[shift] = c;
    for (int i = 0; i <= db; ++i) rem[shift + i] -= c * b[i];
    rem.pop_back();
    trim(rem);
  }
  trim(quo);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(rem);
}
}  // namespace

RVec remainder(const RVec& a, const RVec& b) {
  RVec r;
  divide(a, b, nullptr, &r);
  return r;
}

RVec quotient(const RVec& a, const RVec& b) {
  RVec q;
  divide(a, b, &q, nullptr);
  return q;
}

RVec gcd(RVec a, RVec b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RVec r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

Rational eval(const RVec& f, const Rational& x) {
  Rational acc(0);
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<RVec> squarefree_decomposition(const RVec& f) {
  std::vector<RVec> out;
  RVec a = f;
  trim(a);
  if (a.size() <= 1) return out;
  RVec a1 = derivative(a);
  RVec b = gcd(a, a1);
  RVec c = quotient(a, b);
  RVec d = quotient(a1, b);
  RVec cp = derivative(c);
  // Yun's algorithm.
  auto sub = [](const RVec& u, const RVec& v) {
    RVec w(std::max(u.size(), v.size()), Rational(0));
    for (std::size_t i = 0; i < u.size(); ++i) w[i] += u[i];
    for (std::size_t i = 0; i < v.size(); ++i) w[i] -= v[i];
    trim(w);
    return w;
  };
  RVec e = sub(d, cp);
  while (c.size() > 1) {
    RVec g = gcd(c, e);
    out.push_back(g);
    c = quotient(c, g);
    d = quotient(e, g);
    e = sub(d, derivative(c));
  }
  // Drop trailing constant factors so out.size() equals the top multiplicity.
  while (!out.empty() && out.back().size() <= 1) out.pop_back();
  return out;
}

std::vector<RVec> sturm_sequence(const RVec& f) {
  std::vector<RVec> seq;
  RVec a = f;
  trim(a);
  if (a.empty()) return seq;
  seq.push_back(a);
  RVec b = derivative(a);
  while (!b.empty()) {
    seq.push_back(b);
    RVec r = remainder(seq[seq.size() - 2], b);
    for (auto& c : r) c = -c;
    b = std::move(r);
  }
  return seq;
}

int sign_variations_at(const std::vector<RVec>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    const int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rational root_bound(const RVec& f) {
  Rational m(0);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    Rational q = abs(f[i] / f.back());
    if (q > m) m = q;
  }
  return m + 1;
}

}  // namespace exact_univariate

namespace eu = exact_univariate;

std::pair<UnivariatePolynomial<Exact>, UnivariatePolynomial<Exact>> divmod(const UnivariatePolynomial<Exact>& a,
                                                                           const UnivariatePolynomial<Exact>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Exact> rem = a.coeffs();
  const int db = b.degree();
  std::vector<Exact> quo(std::max(0, a.degree() - db + 1));
  for (int top = a.degree(); top >= db; --top) {
    const Exact c = rem[top] / b.leading();
    quo[top - db] = c;
    for (int i = 0; i <= db; ++i) rem[top - db + i] -= c * b.coeff(i);
  }
  rem.resize(std::max(0, db));
  return {UnivariatePolynomial<Exact>(std::move(quo)), UnivariatePolynomial<Exact>(std::move(rem))};
}

UnivariatePolynomial<Exact> univariate_gcd(UnivariatePolynomial<Exact> a, UnivariatePolynomial<Exact> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(Exact(1) / a.leading());
}

// ---- real roots ----------------------------------------------------------------

namespace {

// Isolates the roots of a squarefree g in (lo, hi] (g nonzero at both ends) and
// refines each to relative width tol.
void isolate(const eu::RVec& g, const std::vector<eu::RVec>& seq, Rational lo, Rational hi, double tol,
             std::vector<double>* out) {
  const int count = eu::sign_variations_at(seq, lo) - eu::sign_variations_at(seq, hi);
  if (count == 0) return;
  if (count == 1) {
    int slo = sgn(eu::eval(g, lo));
    for (int iter = 0; iter < 2000; ++iter) {
      const double width = Rational(hi - lo).get_d();
      const double mag = std::max(1.0, std::max(std::abs(lo.get_d()), std::abs(hi.get_d())));
      if (width <= tol * mag) break;
      Rational mid = (lo + hi) / 2;
      const int s = sgn(eu::eval(g, mid));
      if (s == 0) {
        out->push_back(mid.get_d());
        return;
      }
      if (s == slo) {
        lo = mid;
        slo = s;
      } else {
        hi = mid;
      }
    }
    out->push_back(Rational((lo + hi) / 2).get_d());
    return;
  }
  // Split at a point where g does not vanish.
  Rational mid = (lo + hi) / 2;
  for (int j = 1; sgn(eu::eval(g, mid)) == 0; ++j) mid = lo + (hi - lo) * Rational(j + 50, 2 * j + 99);
  isolate(g, seq, lo, mid, tol, out);
  isolate(g, seq, mid, hi, tol, out);
}

RootList exact_roots(const UnivariatePolynomial<Exact>& f, double tol) {
  RootList res;
  res.mode = CoeffMode::kExact;
  res.tol = tol;
  const eu::RVec a = eu::from_poly(f);
  const int deg = static_cast<int>(a.size()) - 1;
  const auto factors = eu::squarefree_decomposition(a);
  std::vector<RealRoot> roots;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& g = factors[i];
    if (g.size() <= 1) continue;
    const auto seq = eu::sturm_sequence(g);
    const Rational bound = eu::root_bound(g);
    std::vector<double> vals;
    isolate(g, seq, Rational(-bound), bound, tol, &vals);
    for (double v : vals) roots.push_back({v, static_cast<int>(i) + 1});
  }
  std::sort(roots.begin(), roots.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  res.roots = std::move(roots);
  res.complex_count = deg - res.real_count();
  return res;
}

RootList float_roots(const UnivariatePolynomial<Complex>& f, double tol) {
  RootList res;
  res.mode = CoeffMode::kFloat;
  res.tol = tol;
  std::vector<Complex> c = f.coeffs();
  const double cmax = f.max_abs_coeff();
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return res;

  std::vector<Complex> z;
  // Exact zeros at t = 0 are peeled off first.
  int zeros_at_origin = 0;
  while (zeros_at_origin < n && c[zeros_at_origin] == Complex(0.0)) ++zeros_at_origin;
  for (int k = 0; k < zeros_at_origin; ++k) z.emplace_back(0.0, 0.0);
  std::vector<Complex> g(c.begin() + zeros_at_origin, c.end());
  const int m = static_cast<int>(g.size()) - 1;
  if (m > 0) {
    // Scale t = sigma u so the roots have magnitude near one.
    const double geo = std::pow(std::abs(g[0]) / std::abs(g[m]), 1.0 / m);
    const double sigma = std::exp2(std::round(std::log2(geo > 0 && std::isfinite(geo) ? geo : 1.0)));
    std::vector<Complex> h(m + 1);
    double pw = 1.0;
    for (int k = 0; k <= m; ++k, pw *= sigma) h[k] = g[k] * pw;
    bool real_coeffs = true;
    for (const auto& v : h) real_coeffs = real_coeffs && v.imag() == 0.0;
    if (real_coeffs) {
      // Real companion matrix: eigenvalues come in exact conjugate pairs.
      Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
      for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
      for (int i = 0; i < m; ++i) comp(i, m - 1) = -h[i].real() / h[m].real();
      Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) z.push_back(sigma * es.eigenvalues()(i));
    } else {
      Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
      for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
      for (int i = 0; i < m; ++i) comp(i, m - 1) = -h[i] / h[m];
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) z.push_back(sigma * es.eigenvalues()(i));
    }
  }
  const UnivariatePolynomial<Complex> fp(c);
  const auto df = fp.derivative();
  // Single-link clustering within sqrt(tol) relative distance.
  const double radius = std::sqrt(tol);
  const int nz = static_cast<int>(z.size());
  std::vector<int> parent(nz);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < nz; ++i)
    for (int j = i + 1; j < nz; ++j) {
      const double s = 1.0 + std::max(std::abs(z[i]), std::abs(z[j]));
      if (std::abs(z[i] - z[j]) <= radius * s) parent[find(i)] = find(j);
    }
  std::map<int, std::vector<Complex>> clusters;
  for (int i = 0; i < nz; ++i) clusters[find(i)].push_back(z[i]);
  // Newton polish for isolated roots only; it would break the symmetry of a cluster.
  for (auto& [root, members] : clusters) {
    if (members.size() != 1) continue;
    Complex& r = members.front();
    for (int it = 0; it < 4; ++it) {
      const Complex fv = fp.evaluate(r);
      const Complex dv = df.evaluate(r);
      if (std::abs(dv) == 0.0) break;
      const Complex cand = r - fv / dv;
      if (std::abs(fp.evaluate(cand)) < std::abs(fv)) {
        r = cand;
      } else {
        break;
      }
    }
  }
  for (const auto& [root, members] : clusters) {
    Complex mean(0.0);
    for (const auto& v : members) mean += v;
    mean /= static_cast<double>(members.size());
    const double s = 1.0 + std::abs(mean);
    if (std::abs(mean.imag()) <= tol * s) {
      res.roots.push_back({mean.real(), static_cast<int>(members.size())});
      if (members.size() >= 2) {
        double spread = 0;
        for (const auto& v : members) spread = std::max(spread, std::abs(v.imag()));
        if (spread > 0.01 * radius * s) res.ambiguous = true;
      }
    } else {
      res.complex_count += static_cast<int>(members.size());
      res.nonreal.insert(res.nonreal.end(), members.begin(), members.end());
    }
  }
  std::sort(res.roots.begin(), res.roots.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  return res;
}

}  // namespace

template <class K>
RootList real_roots(const UnivariatePolynomial<K>& f, double tol) {
  if (f.is_zero()) throw std::invalid_argument("real_roots of the zero polynomial");
  if constexpr (kIsExact<K>) {
    return exact_roots(f, tol);
  } else {
    return float_roots(f, tol);
  }
}

template <class K>
Tristate all_real(const UnivariatePolynomial<K>& f, double tol) {
  const RootList r = real_roots(f, tol);
  if (r.complex_count > 0) return Tristate::kFalse;
  if (r.ambiguous) return Tristate::kInconclusive;
  return Tristate::kTrue;
}

template <class K>
int sturm_count(const UnivariatePolynomial<K>& f, const Rational& a, const Rational& b) {
  if constexpr (!kIsExact<K>) {
    (void)f;
    (void)a;
    (void)b;
    throw std::invalid_argument("sturm_count requires exact coefficients");
  } else {
    if (f.is_zero()) throw std::invalid_argument("sturm_count of the zero polynomial");
    const auto g = eu::from_poly(f);
    if (sgn(eu::eval(g, a)) == 0 || sgn(eu::eval(g, b)) == 0)
      throw std::invalid_argument("sturm_count endpoint is a root");
    const auto seq = eu::sturm_sequence(g);
    return eu::sign_variations_at(seq, a) - eu::sign_variations_at(seq, b);
  }
}

template <class K>
std::vector<K> power_sums(const UnivariatePolynomial<K>& f, int k_max) {
  if (f.is_zero()) throw std::invalid_argument("power_sums of the zero polynomial");
  const int m = f.degree();
  const K lead = f.leading();
  std::vector<K> a(m + 1);
  for (int k = 0; k <= m; ++k) a[k] = f.coeff(m - k) / lead;
  return newton_power_sums(a, k_max, [](long v) { return ScalarTraits<K>::from_int(v); });
}

#define RZLMI_INSTANTIATE(K)                                                               \
  template RootList real_roots(const UnivariatePolynomial<K>&, double);                    \
  template Tristate all_real(const UnivariatePolynomial<K>&, double);                      \
  template int sturm_count(const UnivariatePolynomial<K>&, const Rational&, const Rational&); \
  template std::vector<K> power_sums(const UnivariatePolynomial<K>&, int);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
