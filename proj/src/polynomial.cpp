#include "rzlmi/polynomial.hpp"

#include <Eigen/Dense>

namespace rzlmi {

std::vector<Exponent> monomials_of_degree(int num_vars, int deg) {
  std::vector<Exponent> out;
  if (deg < 0) return out;
  if (num_vars == 0) {
    if (deg == 0) out.emplace_back();
    return out;
  }
  Exponent e(num_vars, 0);
  // Enumerate compositions of deg into num_vars parts, first variable descending.
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == num_vars - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, deg);
  return out;
}

template <class K>
HomogeneousPolynomial<K> homogenize(const Polynomial<K>& p, int m) {
  if (!p.is_zero() && m < p.degree()) throw std::invalid_argument("homogenization degree below polynomial degree");
  if (m < 0) throw std::invalid_argument("negative homogenization degree");
  const int n = p.num_vars();
  Polynomial<K> P(n + 1);
  Exponent f(n + 1);
  for (const auto& [e, c] : p.terms()) {
    f[0] = m - total_degree(e);
    std::copy(e.begin(), e.end(), f.begin() + 1);
    P.add_term(f, c);
  }
  return HomogeneousPolynomial<K>(std::move(P), m);
}

template <class K>
Polynomial<K> dehomogenize(const HomogeneousPolynomial<K>& P) {
  const int n = P.num_vars();
  if (n == 0) throw DimensionError("cannot dehomogenize a polynomial without variables");
  Polynomial<K> p(n - 1);
  for (const auto& [e, c] : P.poly().terms()) p.add_term(Exponent(e.begin() + 1, e.end()), c);
  return p;
}

template <class K>
Polynomial<K> compose(const Polynomial<K>& p, const std::vector<Polynomial<K>>& subs) {
  if (static_cast<int>(subs.size()) != p.num_vars()) throw DimensionError("substitution list has wrong length");
  const int target_vars = subs.empty() ? 0 : subs.front().num_vars();
  for (const auto& s : subs)
    if (s.num_vars() != target_vars) throw DimensionError("substitutions use different variable counts");
  const K one = ScalarTraits<K>::from_int(1);
  std::vector<std::vector<Polynomial<K>>> powers(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const int top = p.degree_in(static_cast<int>(i));
    powers[i].push_back(Polynomial<K>::constant(target_vars, one));
    for (int k = 1; k <= top; ++k) powers[i].push_back(powers[i].back() * subs[i]);
  }
  Polynomial<K> out(target_vars);
  for (const auto& [e, c] : p.terms()) {
    Polynomial<K> t = Polynomial<K>::constant(target_vars, c);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (e[i]) t = t * powers[i][e[i]];
    out += t;
  }
  return out;
}

template <class K>
UnivariatePolynomial<K> restrict_to_line(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& dir) {
  const int n = p.num_vars();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(dir.size()) != n)
    throw DimensionError("line base point or direction has wrong dimension");
  const K one = ScalarTraits<K>::from_int(1);
  std::vector<std::vector<UnivariatePolynomial<K>>> powers(n);
  for (int i = 0; i < n; ++i) {
    const UnivariatePolynomial<K> lin(std::vector<K>{x0[i], dir[i]});
    const int top = p.degree_in(i);
    powers[i].push_back(UnivariatePolynomial<K>(std::vector<K>{one}));
    for (int k = 1; k <= top; ++k) powers[i].push_back(powers[i].back() * lin);
  }
  std::vector<K> acc(std::max(p.degree(), 0) + 1);
  for (const auto& [e, c] : p.terms()) {
    UnivariatePolynomial<K> t(std::vector<K>{c});
    for (int i = 0; i < n; ++i)
      if (e[i]) t = t * powers[i][e[i]];
    for (int k = 0; k <= t.degree(); ++k) acc[k] += t.coeff(k);
  }
  return UnivariatePolynomial<K>(std::move(acc));
}

template <class K>
UnivariatePolynomial<K> reversed_restriction(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& dir,
                                             int m) {
  if (!p.is_zero() && m < p.degree()) throw std::invalid_argument("reversal degree below polynomial degree");
  const auto f = restrict_to_line(p, x0, dir);
  return f.reversed(m + 1);
}

template <class K>
std::vector<Polynomial<K>> symbolic_line_coefficients(const Polynomial<K>& p, const std::vector<K>& x0) {
  const int n = p.num_vars();
  if (static_cast<int>(x0.size()) != n) throw DimensionError("base point has wrong dimension");
  // Variables of the substituted polynomial: x_1..x_n, t.
  std::vector<Polynomial<K>> subs;
  for (int i = 0; i < n; ++i) {
    Exponent xt(n + 1, 0);
    xt[i] = 1;
    xt[n] = 1;
    Polynomial<K> s = Polynomial<K>::constant(n + 1, x0[i]);
    s.add_term(xt, ScalarTraits<K>::from_int(1));
    subs.push_back(std::move(s));
  }
  const Polynomial<K> full = compose(p, subs);
  std::vector<Polynomial<K>> out(std::max(p.degree(), 0) + 1, Polynomial<K>(n));
  for (const auto& [e, c] : full.terms()) out[e[n]].add_term(Exponent(e.begin(), e.begin() + n), c);
  return out;
}

template <class K>
HomogeneousPolynomial<K> directional_derivative(const HomogeneousPolynomial<K>& P, const std::vector<K>& X0) {
  if (static_cast<int>(X0.size()) != P.num_vars()) throw DimensionError("direction has wrong dimension");
  if (std::all_of(X0.begin(), X0.end(), [](const K& v) { return rzlmi::is_zero(v); }))
    throw std::invalid_argument("direction is not a projective point (all coordinates zero)");
  Polynomial<K> out(P.num_vars());
  for (int a = 0; a < P.num_vars(); ++a)
    if (!rzlmi::is_zero(X0[a])) out += P.poly().partial(a).scaled(X0[a]);
  return HomogeneousPolynomial<K>(std::move(out), std::max(P.degree() - 1, 0));
}

namespace {

DivisionResult<Exact> divide_exact(const Polynomial<Exact>& p, const Polynomial<Exact>& q) {
  const int n = p.num_vars();
  DivisionResult<Exact> res{Polynomial<Exact>(n), false, 0.0};
  const auto& lt_q = *q.terms().rbegin();
  Polynomial<Exact> r = p;
  Exponent diff(n);
  while (!r.is_zero()) {
    const auto& lt_r = *r.terms().rbegin();
    for (int i = 0; i < n; ++i) {
      diff[i] = lt_r.first[i] - lt_q.first[i];
      if (diff[i] < 0) {
        res.residual = 1.0;
        return res;
      }
    }
    const Exact c = lt_r.second / lt_q.second;
    const auto step = Polynomial<Exact>::monomial(diff, c);
    res.quotient += step;
    r -= step * q;
  }
  res.exact = true;
  return res;
}

DivisionResult<Complex> divide_float(const Polynomial<Complex>& p, const Polynomial<Complex>& q, double tol) {
  const int n = p.num_vars();
  DivisionResult<Complex> res{Polynomial<Complex>(n), false, 0.0};
  if (p.is_zero()) {
    res.exact = true;
    return res;
  }
  const int hi = p.degree() - q.degree();
  const int lo = std::max(0, p.low_degree() - q.low_degree());
  if (hi < 0) {
    res.residual = 1.0;
    return res;
  }
  std::vector<int> cap(n);
  for (int i = 0; i < n; ++i) cap[i] = p.degree_in(i) - q.degree_in(i);
  std::vector<Exponent> support;
  for (int d = lo; d <= hi; ++d)
    for (auto& e : monomials_of_degree(n, d)) {
      bool ok = true;
      for (int i = 0; i < n; ++i) ok = ok && e[i] <= cap[i];
      if (ok) support.push_back(std::move(e));
    }
  if (support.empty()) {
    res.residual = 1.0;
    return res;
  }
  // Row index: monomials of p and of q * support.
  std::map<Exponent, int> rows;
  for (const auto& [e, c] : p.terms()) rows.emplace(e, 0);
  Exponent f(n);
  for (const auto& s : support)
    for (const auto& [e, c] : q.terms()) {
      for (int i = 0; i < n; ++i) f[i] = s[i] + e[i];
      rows.emplace(f, 0);
    }
  int idx = 0;
  for (auto& [e, r] : rows) r = idx++;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(idx, static_cast<Eigen::Index>(support.size()));
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(idx);
  for (std::size_t j = 0; j < support.size(); ++j)
    for (const auto& [e, c] : q.terms()) {
      for (int i = 0; i < n; ++i) f[i] = support[j][i] + e[i];
      A(rows.at(f), static_cast<Eigen::Index>(j)) += c;
    }
  for (const auto& [e, c] : p.terms()) b(rows.at(e)) = c;
  const Eigen::VectorXcd w = A.colPivHouseholderQr().solve(b);
  const double bn = b.norm();
  res.residual = bn > 0 ? (A * w - b).norm() / bn : 0.0;
  const double wmax = w.cwiseAbs().maxCoeff();
  for (std::size_t j = 0; j < support.size(); ++j)
    if (std::abs(w(static_cast<Eigen::Index>(j))) > 1e-15 * wmax) res.quotient.add_term(support[j], w(static_cast<Eigen::Index>(j)));
  res.exact = res.residual <= tol;
  return res;
}

}  // namespace

template <class K>
DivisionResult<K> exact_divide(const Polynomial<K>& p, const Polynomial<K>& q, double tol) {
  if (q.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (p.num_vars() != q.num_vars()) throw DimensionError("polynomials have different variable counts");
  if constexpr (kIsExact<K>) {
    (void)tol;
    return divide_exact(p, q);
  } else {
    return divide_float(p, q, tol);
  }
}

#define RZLMI_INSTANTIATE(K)                                                                                       \
  template HomogeneousPolynomial<K> homogenize(const Polynomial<K>&, int);                                         \
  template Polynomial<K> dehomogenize(const HomogeneousPolynomial<K>&);                                            \
  template Polynomial<K> compose(const Polynomial<K>&, const std::vector<Polynomial<K>>&);                         \
  template UnivariatePolynomial<K> restrict_to_line(const Polynomial<K>&, const std::vector<K>&,                   \
                                                    const std::vector<K>&);                                        \
  template UnivariatePolynomial<K> reversed_restriction(const Polynomial<K>&, const std::vector<K>&,               \
                                                        const std::vector<K>&, int);                               \
  template std::vector<Polynomial<K>> symbolic_line_coefficients(const Polynomial<K>&, const std::vector<K>&);     \
  template HomogeneousPolynomial<K> directional_derivative(const HomogeneousPolynomial<K>&, const std::vector<K>&); \
  template DivisionResult<K> exact_divide(const Polynomial<K>&, const Polynomial<K>&, double);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
