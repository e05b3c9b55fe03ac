#include "rzlmi/construct.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <numbers>

#include "rzlmi/poly_io.hpp"
#include "rzlmi/rz.hpp"
#include "rzlmi/sampling.hpp"

namespace rzlmi {

namespace {

using CPoly = Polynomial<Complex>;
using HPoly = HomogeneousPolynomial<Complex>;

struct RawPoint {
  std::vector<Complex> X;
  int multiplicity = 1;
};

// Divides by the coordinate of largest modulus (lowest index on near ties).
std::vector<Complex> normalize_point(std::vector<Complex> X) {
  double big = 0;
  for (const auto& v : X) big = std::max(big, std::abs(v));
  for (const auto& v : X)
    if (std::abs(v) >= big * (1 - 1e-9)) {
      const Complex piv = v;
      for (auto& w : X) w /= piv;
      break;
    }
  return X;
}

// |F(X)| relative to the coefficient norm and |X|_inf^deg. Unlike the
// termwise scale this stays meaningful at points where every monomial is tiny.
double form_residual(const CPoly& F, const std::vector<Complex>& X) {
  double big = 0;
  for (const auto& v : X) big = std::max(big, std::abs(v));
  const double scale = F.coeff_norm2() * std::pow(big, std::max(F.degree(), 0));
  return std::abs(F.evaluate_complex(X)) / std::max(scale, 1e-300);
}

std::vector<Complex> complex_roots(std::vector<Complex> c) {
  while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

// Coefficients in Y2 of F(1, y, Y2).
std::vector<Complex> slice(const CPoly& F, Complex y, int deg) {
  std::vector<Complex> c(deg + 1, 0.0);
  for (const auto& [e, v] : F.terms()) c[e[2]] += v * std::pow(y, e[1]);
  return c;
}

Complex sylvester_resultant(const std::vector<Complex>& f, const std::vector<Complex>& g) {
  const int a = static_cast<int>(f.size()) - 1, b = static_cast<int>(g.size()) - 1;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(a + b, a + b);
  for (int r = 0; r < b; ++r)
    for (int k = 0; k <= a; ++k) S(r, r + k) = f[a - k];
  for (int r = 0; r < a; ++r)
    for (int k = 0; k <= b; ++k) S(b + r, r + k) = g[b - k];
  return S.partialPivLu().determinant();
}

// Newton iteration in the chart Y0 = 1 for the system (E1, E2) = 0.
void newton_refine(const CPoly& E1, const CPoly& E2, Complex& y, Complex& z) {
  const CPoly d11 = E1.partial(1), d12 = E1.partial(2), d21 = E2.partial(1), d22 = E2.partial(2);
  auto resid = [&](Complex a, Complex b) {
    const std::vector<Complex> Y{1.0, a, b};
    return form_residual(E1, Y) + form_residual(E2, Y);
  };
  double best = resid(y, z);
  for (int it = 0; it < 40 && best > 0; ++it) {
    const std::vector<Complex> Y{1.0, y, z};
    const Complex f1 = E1.evaluate_complex(Y), f2 = E2.evaluate_complex(Y);
    const Complex a = d11.evaluate_complex(Y), b = d12.evaluate_complex(Y);
    const Complex c = d21.evaluate_complex(Y), d = d22.evaluate_complex(Y);
    const Complex det = a * d - b * c;
    if (std::abs(det) == 0.0) break;
    const Complex dy = (d * f1 - b * f2) / det, dz = (a * f2 - c * f1) / det;
    const Complex ny = y - dy, nz = z - dz;
    const double r = resid(ny, nz);
    if (!(r < best)) break;
    y = ny;
    z = nz;
    best = r;
  }
}

CPoly linear_subs_compose(const CPoly& F, const Eigen::Matrix3d& T) {
  std::vector<CPoly> subs;
  for (int i = 0; i < 3; ++i) {
    CPoly s(3);
    for (int j = 0; j < 3; ++j) {
      Exponent e(3, 0);
      e[j] = 1;
      s.add_term(e, Complex(T(i, j), 0.0));
    }
    subs.push_back(std::move(s));
  }
  return compose(F, subs);
}

// Common zeros of F and G with multiplicities, via the resultant in Y2 after a
// random orthogonal change of coordinates X = T Y.
std::vector<RawPoint> intersect_curves(const HPoly& F, const HPoly& G, std::uint64_t seed) {
  const int a = F.degree(), b = G.degree();
  if (a == 0 || b == 0) return {};
  Rng rng = stream_rng(seed, 0x51);
  std::normal_distribution<double> g;
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = g(rng);
  const Eigen::Matrix3d T = Eigen::HouseholderQR<Eigen::Matrix3d>(M).householderQ();
  const CPoly Ft = linear_subs_compose(F.poly(), T).pruned(1e-15);
  const CPoly Gt = linear_subs_compose(G.poly(), T).pruned(1e-15);
  if (Ft.degree_in(2) != a || Gt.degree_in(2) != b)
    throw ConstructionError("intersection", "coordinate change left a point at infinity", true);

  const int N = a * b + 1;
  std::vector<Complex> R(N);
  for (int k = 0; k < N; ++k) {
    const Complex w = std::polar(1.0, 2 * std::numbers::pi * k / N);
    R[k] = sylvester_resultant(slice(Ft, w, a), slice(Gt, w, b));
  }
  std::vector<Complex> coef(N, 0.0);
  double cmax = 0;
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) coef[j] += R[k] * std::polar(1.0, -2 * std::numbers::pi * j * k / N);
    coef[j] /= N;
    cmax = std::max(cmax, std::abs(coef[j]));
  }
  const double scale = std::pow(Ft.coeff_norm2(), b) * std::pow(Gt.coeff_norm2(), a);
  if (cmax <= 1e-11 * scale) throw ConstructionError("intersection", "the curves share a component");
  if (std::abs(coef[N - 1]) <= 1e-9 * cmax)
    throw ConstructionError("intersection", "resultant lost degree (point on Y0 = 0)", true);

  const auto ys = complex_roots(coef);

  // Single-link clusters: a contact point of order k shows up as k nearby roots.
  std::vector<int> label(ys.size(), -1);
  int nl = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = nl;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < ys.size(); ++v)
        if (label[v] < 0 && std::abs(ys[u] - ys[v]) <= 1e-4 * (1 + std::abs(ys[u]))) {
          label[v] = nl;
          stack.push_back(v);
        }
    }
    ++nl;
  }
  std::vector<RawPoint> out;
  for (int l = 0; l < nl; ++l) {
    Complex y(0.0);
    int k = 0;
    for (std::size_t i = 0; i < ys.size(); ++i)
      if (label[i] == l) {
        y += ys[i];
        ++k;
      }
    y /= static_cast<double>(k);
    Complex z(0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : complex_roots(slice(Ft, y, a))) {
      const std::vector<Complex> Y{1.0, y, cand};
      const double r = form_residual(Gt, Y);
      if (r < best) {
        best = r;
        z = cand;
      }
    }
    if (k == 1) {
      newton_refine(Ft, Gt, y, z);
    } else if (k == 2) {
      const CPoly tangency = Ft.partial(1) * Gt.partial(2) - Ft.partial(2) * Gt.partial(1);
      newton_refine(Ft, tangency, y, z);
    }
    const Eigen::Vector3cd Y(1.0, y, z);
    const Eigen::Vector3cd X = T.cast<Complex>() * Y;
    RawPoint pt;
    pt.X = normalize_point({X(0), X(1), X(2)});
    pt.multiplicity = k;
    const double rf = form_residual(F.poly(), pt.X);
    const double rg = form_residual(G.poly(), pt.X);
    if (rf > 1e-6 || rg > 1e-6)
      throw ConstructionError("intersection", "could not resolve an intersection point", true);
    out.push_back(std::move(pt));
  }
  return out;
}

template <class K>
std::vector<K> lift_point(const std::vector<Complex>& X) {
  std::vector<K> out;
  for (const auto& v : X) {
    if constexpr (kIsExact<K>) {
      out.emplace_back(rationalize(v.real(), 1L << 20), rationalize(v.imag(), 1L << 20));
    } else {
      out.push_back(v);
    }
  }
  return out;
}

template <class K>
std::vector<Complex> as_complex(const std::vector<K>& v) {
  std::vector<Complex> out;
  for (const auto& x : v) out.push_back(to_complex(x));
  return out;
}

template <class K>
std::vector<K> conj_vec(const std::vector<K>& v) {
  std::vector<K> out;
  for (const auto& x : v) out.push_back(conj_of(x));
  return out;
}

template <class K>
bool upper_member(const std::vector<K>& X) {
  for (const auto& v : X) {
    const double im = to_complex(v).imag();
    if (im != 0.0) return im > 0;
  }
  return true;
}

template <class K>
K monomial_value(const Exponent& e, const std::vector<K>& X) {
  K t = ScalarTraits<K>::from_int(1);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) t *= X[i];
  return t;
}

template <class K>
std::vector<K> coefficient_vector(const Polynomial<K>& p, const std::vector<Exponent>& monos) {
  std::vector<K> v;
  for (const auto& e : monos) v.push_back(p.coeff(e));
  return v;
}

template <class K>
Polynomial<K> from_coefficients(const std::vector<K>& v, const std::vector<Exponent>& monos, int vars) {
  Polynomial<K> p(vars);
  for (std::size_t i = 0; i < monos.size(); ++i) p.add_term(monos[i], v[i]);
  return p;
}

template <class K>
Polynomial<K> cleaned(const Polynomial<K>& p) {
  if constexpr (kIsExact<K>) {
    return p;
  } else {
    return p.pruned(1e-13);
  }
}

template <class K>
nlohmann::json scalar_json(const K& v) {
  if constexpr (kIsExact<K>) {
    return {{"re", scalar_to_json_re(v)}, {"im", scalar_to_json_im(v)}};
  } else {
    return {{"re", v.real()}, {"im", v.imag()}};
  }
}

template <class K>
nlohmann::json polymatrix_json(const PolyMatrix<K>& V) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < V.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int j = 0; j < V.cols(); ++j) r.push_back(polynomial_to_json(V(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

// ---- divisor ------------------------------------------------------------------

template <class K>
Divisor<K> Divisor<K>::conj() const {
  Divisor out = *this;
  for (auto& p : out.points) p.X = conj_vec(p.X);
  return out;
}

template <class K>
nlohmann::json Divisor<K>::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& v : p.X) coords.push_back(scalar_json(v));
    pts.push_back({{"X", coords}, {"multiplicity", p.multiplicity}, {"conjugate", p.conjugate}});
  }
  return {{"degree", degree()}, {"points", pts}};
}

template <class K>
bool is_smooth(const HomogeneousPolynomial<K>& P, std::uint64_t seed) {
  if (P.num_vars() != 3) throw DimensionError("smoothness check is for plane curves");
  const int m = P.degree();
  if (m <= 1) return !P.is_zero();
  const auto Pf = P.template cast<Complex>();
  std::vector<CPoly> grad;
  for (int i = 0; i < 3; ++i) grad.push_back(Pf.poly().partial(i));
  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng = stream_rng(seed + attempt, 0x5a);
    std::normal_distribution<double> g;
    std::array<CPoly, 3> comb{CPoly(3), CPoly(3), CPoly(3)};
    for (auto& c : comb)
      for (int i = 0; i < 3; ++i) c += grad[i].scaled(Complex(g(rng), 0.0));
    try {
      if (comb[0].is_zero() || comb[1].is_zero()) return false;
      const auto pts = intersect_curves(HPoly(comb[0], m - 1), HPoly(comb[1], m - 1), seed + attempt);
      for (const auto& pt : pts) {
        const double r = form_residual(comb[2], pt.X);
        const double rp = form_residual(Pf.poly(), pt.X);
        if (r <= 1e-7 && rp <= 1e-7) return false;
      }
      return true;
    } catch (const ConstructionError& e) {
      if (!e.retryable()) return false;  // a shared component of the partials: singular
    }
  }
  throw ConstructionError("smoothness", "no generic coordinate change found");
}

template <class K>
Divisor<K> intersection_divisor(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                std::uint64_t seed) {
  if (P.num_vars() != 3 || Q.num_vars() != 3) throw DimensionError("intersection divisor needs plane curves");
  const int m = P.degree();
  if (Q.degree() != m - 1) throw std::invalid_argument("Q must have degree deg P - 1");
  if (!is_smooth(P, seed)) throw ConstructionError("intersection", "P is singular or reducible");
  const auto raw = intersect_curves(P.template cast<Complex>(), Q.template cast<Complex>(), seed);
  int total = 0;
  for (const auto& r : raw) total += r.multiplicity;
  if (total != m * (m - 1))
    throw ConstructionError("intersection", "found " + std::to_string(total) + " points, expected " +
                                                std::to_string(m * (m - 1)), true);

  // Conjugate pairing by nearest match.
  const int n = static_cast<int>(raw.size());
  std::vector<int> partner(n, -1);
  for (int i = 0; i < n; ++i) {
    if (partner[i] >= 0) continue;
    const double tol = raw[i].multiplicity == 1 ? 1e-8 : 1e-6;
    auto dist = [&](int j) {
      double d = 0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(raw[i].X[k] - std::conj(raw[j].X[k])));
      return d;
    };
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = i; j < n; ++j)
      if (partner[j] < 0 && raw[j].multiplicity == raw[i].multiplicity && dist(j) < bd) {
        bd = dist(j);
        best = j;
      }
    if (best < 0 || bd > tol) throw ConstructionError("intersection", "a point has no conjugate partner", true);
    partner[i] = best;
    partner[best] = i;
  }
  Divisor<K> div;
  std::vector<int> index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (index[i] >= 0) continue;
    DivisorPoint<K> pt;
    pt.multiplicity = raw[i].multiplicity;
    if (partner[i] == i) {
      std::vector<Complex> X;
      for (const auto& v : raw[i].X) X.emplace_back(v.real(), 0.0);
      pt.X = lift_point<K>(X);
      pt.conjugate = static_cast<int>(div.points.size());
      index[i] = pt.conjugate;
      div.points.push_back(std::move(pt));
    } else {
      const int j = partner[i];
      pt.X = lift_point<K>(raw[i].X);
      DivisorPoint<K> qt = pt;
      qt.X = conj_vec(pt.X);
      const int a = static_cast<int>(div.points.size());
      pt.conjugate = a + 1;
      qt.conjugate = a;
      index[i] = a;
      index[j] = a + 1;
      div.points.push_back(std::move(pt));
      div.points.push_back(std::move(qt));
    }
  }
  if constexpr (kIsExact<K>) {
    for (const auto& pt : div.points)
      if (!is_zero(P(pt.X)) || !is_zero(Q(pt.X)))
        throw ConstructionError("intersection", "intersection points are not Gaussian-rational; use float mode");
  }
  return div;
}

template <class K>
std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>& div, const std::vector<bool>& take_first) {
  Divisor<K> D;
  int pair = 0;
  for (int i = 0; i < static_cast<int>(div.points.size()); ++i) {
    const auto& pt = div.points[i];
    if (pt.conjugate == i) {
      if (pt.multiplicity % 2 != 0)
        throw ConstructionError("split", "odd multiplicity at a real intersection point (Q does not interlace)");
      DivisorPoint<K> h = pt;
      h.multiplicity /= 2;
      h.conjugate = static_cast<int>(D.points.size());
      D.points.push_back(std::move(h));
    } else if (pt.conjugate > i) {
      if (pair >= static_cast<int>(take_first.size())) throw std::invalid_argument("selection vector too short");
      DivisorPoint<K> h = take_first[pair++] ? pt : div.points[pt.conjugate];
      h.conjugate = -1;  // the partner lives in Dtau
      D.points.push_back(std::move(h));
    }
  }
  Divisor<K> Dtau = D.conj();
  return {std::move(D), std::move(Dtau)};
}

template <class K>
std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>& div, std::uint64_t seed) {
  std::vector<bool> take;
  Rng rng = stream_rng(seed, 0x3);
  for (int i = 0; i < static_cast<int>(div.points.size()); ++i) {
    const auto& pt = div.points[i];
    if (pt.conjugate <= i) continue;
    take.push_back(seed == 0 ? upper_member(pt.X) : (rng() & 1) != 0);
  }
  return split_divisor(div, take);
}

// ---- linear algebra on forms --------------------------------------------------

template <class K>
std::vector<HomogeneousPolynomial<K>> vanishing_basis(const Divisor<K>& D, const HomogeneousPolynomial<K>& P) {
  const int m = P.degree();
  if (D.degree() != m * (m - 1) / 2)
    throw std::invalid_argument("divisor degree must be m(m-1)/2 = " + std::to_string(m * (m - 1) / 2));
  const auto monos = monomials_of_degree(3, m - 1);
  const int N = static_cast<int>(monos.size());
  DenseMatrix<K> A(std::max(D.degree(), 1), N);
  int row = 0;
  for (const auto& pt : D.points) {
    if (pt.multiplicity > 2) throw ConstructionError("vanishing-basis", "contact of order above 2 is not supported");
    for (int c = 0; c < N; ++c) A(row, c) = monomial_value(monos[c], pt.X);
    ++row;
    if (pt.multiplicity == 2) {
      std::vector<K> grad;
      for (int i = 0; i < 3; ++i) grad.push_back(P.poly().partial(i)(pt.X));
      const std::vector<K> T{grad[1] * pt.X[2] - grad[2] * pt.X[1], grad[2] * pt.X[0] - grad[0] * pt.X[2],
                             grad[0] * pt.X[1] - grad[1] * pt.X[0]};
      for (int c = 0; c < N; ++c) {
        K v{};
        for (int i = 0; i < 3; ++i) {
          if (monos[c][i] == 0) continue;
          Exponent e = monos[c];
          --e[i];
          v += ScalarTraits<K>::from_int(monos[c][i]) * monomial_value(e, pt.X) * T[i];
        }
        A(row, c) = v;
      }
      ++row;
    }
  }
  const auto ns = nullspace(A, 1e-8);
  if (static_cast<int>(ns.basis.size()) != m)
    throw ConstructionError("vanishing-basis",
                            "space of forms vanishing on D has dimension " + std::to_string(ns.basis.size()) +
                                ", expected " + std::to_string(m),
                            true);
  std::vector<HomogeneousPolynomial<K>> out;
  for (const auto& v : ns.basis) out.emplace_back(cleaned(from_coefficients(v, monos, 3)), m - 1);
  return out;
}

template <class K>
std::vector<HomogeneousPolynomial<K>> rotate_basis(const std::vector<HomogeneousPolynomial<K>>& basis,
                                                   const HomogeneousPolynomial<K>& Q) {
  const int deg = Q.degree();
  const auto monos = monomials_of_degree(3, deg);
  const int N = static_cast<int>(monos.size()), m = static_cast<int>(basis.size());
  DenseMatrix<K> A(N, m);
  for (int k = 0; k < m; ++k) {
    const auto v = coefficient_vector(basis[k].poly(), monos);
    for (int r = 0; r < N; ++r) A(r, k) = v[r];
  }
  const auto sol = solve_linear(A, coefficient_vector(Q.poly(), monos));
  if (!sol.consistent) throw ConstructionError("vanishing-basis", "Q is not in the span of the basis", true);
  int pick = 0;
  for (int k = 1; k < m; ++k)
    if (magnitude(sol.x[k]) > magnitude(sol.x[pick])) pick = k;
  std::vector<HomogeneousPolynomial<K>> out{Q};
  for (int k = 0; k < m; ++k)
    if (k != pick) out.push_back(basis[k]);
  return out;
}

template <class K>
PolyMatrix<K> fill_matrix(const HomogeneousPolynomial<K>& P, const std::vector<HomogeneousPolynomial<K>>& column) {
  const int m = P.degree();
  if (static_cast<int>(column.size()) != m) throw std::invalid_argument("column basis must have m elements");
  const auto& Q = column.front().poly();
  const auto vmonos = monomials_of_degree(3, m - 1);
  const auto wmonos = monomials_of_degree(3, m - 2);
  const auto rmonos = monomials_of_degree(3, 2 * m - 2);
  std::map<Exponent, int> rindex;
  for (std::size_t i = 0; i < rmonos.size(); ++i) rindex[rmonos[i]] = static_cast<int>(i);
  const int nv = static_cast<int>(vmonos.size()), nw = static_cast<int>(wmonos.size());
  DenseMatrix<K> A(static_cast<int>(rmonos.size()), nv + nw);
  auto put = [&](const Polynomial<K>& prod, int col) {
    for (const auto& [e, c] : prod.terms()) A(rindex.at(e), col) = c;
  };
  const auto one = ScalarTraits<K>::from_int(1);
  for (int c = 0; c < nv; ++c) put(Q * Polynomial<K>::monomial(vmonos[c], one), c);
  for (int c = 0; c < nw; ++c) put(P.poly() * Polynomial<K>::monomial(wmonos[c], one), nv + c);

  PolyMatrix<K> V(m, m, 3);
  for (int i = 0; i < m; ++i) {
    V.set(i, 0, column[i].poly());
    V.set(0, i, column[i].poly().conj_coeffs());
  }
  for (int i = 1; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Polynomial<K> rhs = column[i].poly() * column[j].poly().conj_coeffs();
      std::vector<K> b(rmonos.size());
      for (const auto& [e, c] : rhs.terms()) b[rindex.at(e)] = c;
      const auto sol = solve_linear(A, b);
      if (!sol.consistent || !sol.unique)
        throw ConstructionError("fill", "rank-one completion is not uniquely solvable", true);
      const std::vector<K> vcoef(sol.x.begin(), sol.x.begin() + nv);
      Polynomial<K> Vij = cleaned(from_coefficients(vcoef, vmonos, 3));
      if (i == j) {
        if constexpr (!kIsExact<K>) Vij = Vij.real_part();
        V.set(i, i, Vij);
      } else {
        V.set(j, i, Vij.conj_coeffs());
        V.set(i, j, std::move(Vij));
      }
    }
  return V;
}

template <class K>
Extraction<K> extract_pencil(const PolyMatrix<K>& V, const HomogeneousPolynomial<K>& P) {
  const int m = V.rows();
  if (m != P.degree()) throw DimensionError("V must be m x m for deg P = m");
  const auto detV = determinant(V);
  if (detV.is_zero()) throw ConstructionError("extract", "det V vanishes identically");
  Extraction<K> ex;
  const auto d1 = exact_divide(detV, P.poly().pow(m - 1), 1e-6);
  if (!d1.exact || d1.quotient.degree() > 0)
    throw ConstructionError("extract", "det V is not a constant multiple of P^(m-1)", true);
  ex.c = d1.quotient.constant_term();
  ex.det_residual = d1.residual;
  if (is_zero(ex.c)) throw ConstructionError("extract", "det V vanishes identically");
  std::vector<DenseMatrix<K>> mats(3, DenseMatrix<K>(m, m));
  if (m == 1) {
    throw std::invalid_argument("extract_pencil needs m >= 2");
  }
  const auto adj = adjugate(V, 6);
  const auto Pm2 = P.poly().pow(m - 2);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const auto q = exact_divide(adj(i, j), Pm2, 1e-6);
      if (!q.exact || q.quotient.degree() > 1)
        throw ConstructionError("extract", "adj V is not divisible by P^(m-2)", true);
      ex.adj_residual = std::max(ex.adj_residual, q.residual);
      for (int a = 0; a < 3; ++a) {
        Exponent e(3, 0);
        e[a] = 1;
        mats[a](i, j) = q.quotient.coeff(e);
      }
    }
  if constexpr (!kIsExact<K>) {
    for (auto& M : mats)
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          const Complex h = 0.5 * (M(i, j) + std::conj(M(j, i)));
          M(i, j) = i == j ? Complex(h.real(), 0.0) : h;
          M(j, i) = std::conj(M(i, j));
        }
  }
  ex.U = MatrixPencil<K>(std::move(mats), SymmetryClass::kHermitian, 1e-6);
  return ex;
}

template <class K>
Normalization<K> normalize_at_basepoint(const MatrixPencil<K>& U, const std::vector<K>& X0) {
  const int n = U.n();
  Normalization<K> out;
  DenseMatrix<K> M = U.at_projective(X0);
  const Definiteness def = classify_definiteness(to_eigen(M), 1e-9);
  if (def == Definiteness::kIndefinite || def == Definiteness::kInconclusive)
    throw ConstructionError("normalize", "U(X0) is " + to_string(def) + ": the interlacer is invalid");
  std::vector<DenseMatrix<K>> mats = U.matrices();
  if (def == Definiteness::kNegative) {
    out.flipped = true;
    for (auto& A : mats)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = -A(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = -M(i, j);
  }
  // M = R diag(d) R*, R unit upper triangular, filled from the last index.
  DenseMatrix<K> R = identity_matrix(n, K{}, ScalarTraits<K>::from_int(1));
  std::vector<K> d(n);
  for (int k = n - 1; k >= 0; --k) {
    K acc = M(k, k);
    for (int j = k + 1; j < n; ++j) acc -= R(k, j) * d[j] * conj_of(R(k, j));
    d[k] = acc;
    if (to_complex(d[k]).real() <= 0) throw ConstructionError("normalize", "U(X0) is not positive definite");
    for (int i = 0; i < k; ++i) {
      K s = M(i, k);
      for (int j = k + 1; j < n; ++j) s -= R(i, j) * d[j] * conj_of(R(k, j));
      R(i, k) = s / d[k];
    }
  }
  // Rinv by back substitution.
  DenseMatrix<K> Rinv = identity_matrix(n, K{}, ScalarTraits<K>::from_int(1));
  for (int col = 0; col < n; ++col)
    for (int i = col - 1; i >= 0; --i) {
      K s{};
      for (int j = i + 1; j <= col; ++j) s -= R(i, j) * Rinv(j, col);
      Rinv(i, col) = s;
    }
  DenseMatrix<K> RinvH(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) RinvH(i, j) = conj_of(Rinv(j, i));
  DenseMatrix<K> scale(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if constexpr (kIsExact<K>) {
        Rational r;
        if (!d[i].is_real() || !d[j].is_real() || !rational_sqrt(d[i].re() * d[j].re(), &r))
          throw ConstructionError("normalize", "normalization needs irrational square roots; use float mode");
        scale(i, j) = K(r);
      } else {
        scale(i, j) = Complex(std::sqrt(d[i].real() * d[j].real()), 0.0);
      }
    }
  std::vector<DenseMatrix<K>> out_mats;
  for (const auto& A : mats) {
    DenseMatrix<K> B = multiply(multiply(Rinv, A, K{}), RinvH, K{});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = B(i, j) / scale(i, j);
    if constexpr (!kIsExact<K>) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Complex h = 0.5 * (B(i, j) + std::conj(B(j, i)));
          B(i, j) = i == j ? Complex(h.real(), 0.0) : h;
          B(j, i) = std::conj(B(i, j));
        }
    }
    out_mats.push_back(std::move(B));
  }
  out.A = MatrixPencil<K>(std::move(out_mats), SymmetryClass::kHermitian, 1e-6);
  return out;
}

template <class K>
Extraction<K> representation_from_interlacer(const HomogeneousPolynomial<K>& P, const HomogeneousPolynomial<K>& Q,
                                             std::uint64_t seed, int max_attempts) {
  std::string last;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    try {
      const auto div = intersection_divisor(P, Q, s);
      const auto D = split_divisor(div, s).first;
      return extract_pencil(fill_matrix(P, rotate_basis(vanishing_basis(D, P), Q)), P);
    } catch (const ConstructionError& e) {
      if (!e.retryable()) throw;
      last = e.what();
    }
  }
  throw ConstructionError("construct", "all " + std::to_string(max_attempts) + " attempts failed; last: " + last);
}

// ---- end to end ---------------------------------------------------------------

template <class K>
ConstructionResult<K> construct(const Polynomial<K>& p_in, const std::vector<K>& x0,
                                const InterlacerSpec<K>& interlacer, std::uint64_t seed,
                                const ConstructOptions& options) {
  if (p_in.num_vars() != 2 || x0.size() != 2) throw DimensionError("construction is for d = 2");
  const K p0 = p_in(x0);
  if (to_complex(p0).imag() != 0.0 || to_complex(p0).real() <= 0)
    throw ConstructionError("precondition", "p(x0) must be positive");
  const Polynomial<K> p = p_in.scaled(ScalarTraits<K>::from_int(1) / p0);
  const int m = p.degree();
  if (m < 1) throw ConstructionError("precondition", "p must have degree at least 1");

  ConstructionResult<K> res;
  res.p = p;
  nlohmann::json& trace = res.trace;
  trace["seed"] = seed;
  trace["degree"] = m;
  trace["p_scale"] = scalar_json(ScalarTraits<K>::from_int(1) / p0);

  const auto rz = is_rz_sampled(p, x0, options.rz_lines, 1e-8, seed);
  trace["rz_precondition"] = rz.to_json();
  if (rz.status != RzStatus::kConfirmedSampled)
    throw ConstructionError("rz-precondition", "p is " + to_string(rz.status) + " at x0");

  std::vector<K> X0{ScalarTraits<K>::from_int(1), x0[0], x0[1]};
  if (m == 1) {
    std::vector<DenseMatrix<K>> mats(3, DenseMatrix<K>(1, 1));
    mats[0](0, 0) = p.constant_term();
    mats[1](0, 0) = p.coeff({1, 0});
    mats[2](0, 0) = p.coeff({0, 1});
    res.pencil = MatrixPencil<K>(std::move(mats), SymmetryClass::kRealSymmetric);
    trace["attempts"] = 1;
    return res;
  }

  const auto P = homogenize(p, m);
  HomogeneousPolynomial<K> Q;
  if (interlacer.q) {
    if (interlacer.q->num_vars() != 2 || interlacer.q->degree() > m - 1 || interlacer.q->degree() < m - 2)
      throw ConstructionError("precondition", "the interlacer must have degree m-1 or m-2 in x1, x2");
    Q = homogenize(*interlacer.q, m - 1);
    trace["interlacer"] = "explicit";
  } else {
    const auto& xp = interlacer.derivative_at ? *interlacer.derivative_at : x0;
    if (xp.size() != 2) throw DimensionError("derivative point must have 2 coordinates");
    Q = directional_derivative(P, std::vector<K>{ScalarTraits<K>::from_int(1), xp[0], xp[1]});
    trace["interlacer"] = "derivative";
    trace["derivative_at"] = to_doubles(xp);
  }
  const K q0 = Q(X0);
  if (is_zero(q0)) throw ConstructionError("precondition", "Q vanishes at the base point");
  trace["Q"] = polynomial_to_json(Q.poly());

  nlohmann::json failures = nlohmann::json::array();
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    try {
      const auto div = intersection_divisor(P, Q, s);
      const auto [D, Dtau] = split_divisor(div, s);
      const auto basis = rotate_basis(vanishing_basis(D, P), Q);
      const auto V = fill_matrix(P, basis);
      const auto ex = extract_pencil(V, P);
      const auto nm = normalize_at_basepoint(ex.U, X0);
      const auto& A = nm.A;

      // Verification: det A = p, A(x0) = I, first cofactor = Q / Q(X0).
      double det_res = 0, minor_res = 0;
      const std::vector<double> x0d = to_doubles(x0);
      const Eigen::MatrixXcd Ax0 = A.eval(x0d);
      const double id_err = (Ax0 - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
      const auto pf = p.template cast<Complex>();
      const auto qf = dehomogenize(Q).template cast<Complex>();
      const Complex q0c = to_complex(q0);
      std::uniform_real_distribution<double> unif(-2.0, 2.0);
      for (int i = 0; i < options.verify_samples; ++i) {
        Rng rng = stream_rng(s, 0x1000 + static_cast<std::uint64_t>(i));
        const std::vector<double> x{x0d[0] + unif(rng), x0d[1] + unif(rng)};
        const std::vector<Complex> xc(x.begin(), x.end());
        const Eigen::MatrixXcd Ax = A.eval(x);
        const Complex det = Ax.determinant();
        const Complex pv = pf.evaluate_complex(xc);
        det_res = std::max(det_res, std::abs(det - pv) / std::max({pf.evaluation_scale(xc), std::abs(det), 1e-300}));
        const Complex minor = Ax.bottomRightCorner(m - 1, m - 1).determinant();
        const Complex qv = qf.evaluate_complex(xc) / q0c;
        minor_res = std::max(minor_res, std::abs(minor - qv) / std::max({qf.evaluation_scale(xc) / std::abs(q0c),
                                                                          std::abs(minor), 1e-300}));
      }
      bool exact_ok = true;
      if constexpr (kIsExact<K>) exact_ok = det_poly(A) == p;
      trace["attempts"] = attempt + 1;
      trace["divisor"] = div.to_json();
      trace["split"] = {{"D", D.to_json()}, {"Dtau", Dtau.to_json()}};
      trace["V"] = polymatrix_json(V);
      trace["c"] = scalar_json(ex.c);
      trace["raw_pencil"] = pencil_to_json(ex.U);
      trace["flipped"] = nm.flipped;
      trace["first_minor_scale"] = scalar_json(ScalarTraits<K>::from_int(1) / q0);
      trace["residuals"] = {{"det_over_P", ex.det_residual},
                            {"adj_over_P", ex.adj_residual},
                            {"det_identity", det_res},
                            {"basepoint_identity", id_err},
                            {"first_minor", minor_res},
                            {"exact_det_match", exact_ok}};
      if (det_res > options.tol || id_err > 1e-8 || minor_res > options.tol || !exact_ok)
        throw ConstructionError("verify", "constructed pencil failed verification", true);
      trace["failures"] = failures;
      res.pencil = A;
      return res;
    } catch (const ConstructionError& e) {
      if (!e.retryable()) {
        throw ConstructionError(e.stage(), std::string(e.what()).substr(e.stage().size() + 2) + " (attempt " +
                                               std::to_string(attempt + 1) + ")");
      }
      failures.push_back(e.what());
    }
  }
  std::string last = failures.empty() ? "" : failures.back().get<std::string>();
  throw ConstructionError("construct", "all " + std::to_string(options.max_attempts) + " attempts failed; last: " + last);
}

#define RZLMI_INSTANTIATE(K)                                                                                        \
  template struct Divisor<K>;                                                                                       \
  template bool is_smooth(const HomogeneousPolynomial<K>&, std::uint64_t);                                          \
  template Divisor<K> intersection_divisor(const HomogeneousPolynomial<K>&, const HomogeneousPolynomial<K>&,        \
                                           std::uint64_t);                                                          \
  template std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>&, std::uint64_t);                       \
  template std::pair<Divisor<K>, Divisor<K>> split_divisor(const Divisor<K>&, const std::vector<bool>&);            \
  template std::vector<HomogeneousPolynomial<K>> vanishing_basis(const Divisor<K>&, const HomogeneousPolynomial<K>&); \
  template std::vector<HomogeneousPolynomial<K>> rotate_basis(const std::vector<HomogeneousPolynomial<K>>&,         \
                                                              const HomogeneousPolynomial<K>&);                     \
  template PolyMatrix<K> fill_matrix(const HomogeneousPolynomial<K>&, const std::vector<HomogeneousPolynomial<K>>&); \
  template Extraction<K> extract_pencil(const PolyMatrix<K>&, const HomogeneousPolynomial<K>&);                     \
  template Extraction<K> representation_from_interlacer(const HomogeneousPolynomial<K>&,                          \
                                                        const HomogeneousPolynomial<K>&, std::uint64_t, int);      \
  template Normalization<K> normalize_at_basepoint(const MatrixPencil<K>&, const std::vector<K>&);                  \
  template ConstructionResult<K> construct(const Polynomial<K>&, const std::vector<K>&, const InterlacerSpec<K>&,   \
                                           std::uint64_t, const ConstructOptions&);

RZLMI_INSTANTIATE(Exact)
RZLMI_INSTANTIATE(Complex)
#undef RZLMI_INSTANTIATE

}  // namespace rzlmi
