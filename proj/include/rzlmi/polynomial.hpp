#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rzlmi/scalar.hpp"

namespace rzlmi {

using Exponent = std::vector<int>;

// Degree reported by the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Sparse multivariate polynomial; terms keyed by exponent vector (lex order).
template <class K>
class Polynomial {
 public:
  using Scalar = K;
  using TermMap = std::map<Exponent, K>;

  Polynomial() = default;
  explicit Polynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 0) throw DimensionError("negative variable count");
  }

  static Polynomial constant(int num_vars, const K& c) {
    Polynomial p(num_vars);
    p.add_term(Exponent(num_vars, 0), c);
    return p;
  }
  static Polynomial variable(int num_vars, int index) {
    if (index < 0 || index >= num_vars) throw DimensionError("variable index out of range");
    Exponent e(num_vars, 0);
    e[index] = 1;
    Polynomial p(num_vars);
    p.add_term(e, ScalarTraits<K>::from_int(1));
    return p;
  }
  static Polynomial monomial(const Exponent& e, const K& c) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  int num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    if (terms_.empty()) return kZeroDegree;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }
  int low_degree() const {
    if (terms_.empty()) return kZeroDegree;
    int d = std::numeric_limits<int>::max();
    for (const auto& [e, c] : terms_) d = std::min(d, total_degree(e));
    return d;
  }
  // Largest exponent of variable i over the stored terms.
  int degree_in(int i) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
  }
  bool is_homogeneous() const { return terms_.empty() || degree() == low_degree(); }
  bool is_constant() const { return terms_.empty() || degree() == 0; }

  K coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? K{} : it->second;
  }
  K constant_term() const { return coeff(Exponent(num_vars_, 0)); }

  void add_term(const Exponent& e, const K& c) {
    if (static_cast<int>(e.size()) != num_vars_) throw DimensionError("exponent length does not match variable count");
    for (int v : e)
      if (v < 0) throw std::invalid_argument("negative exponent");
    if (is_zero_scalar(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_scalar(it->second)) terms_.erase(it);
    }
  }

  template <class V>
  V evaluate(std::span<const V> x) const {
    if (static_cast<int>(x.size()) != num_vars_) throw DimensionError("evaluation point has wrong dimension");
    std::vector<std::vector<V>> powers(num_vars_);
    for (int i = 0; i < num_vars_; ++i) {
      const int top = degree_in(i);
      powers[i].resize(top + 1, V(1));
      for (int k = 1; k <= top; ++k) powers[i][k] = powers[i][k - 1] * x[i];
    }
    V acc(0);
    for (const auto& [e, c] : terms_) {
      V t = lift<V>(c);
      for (int i = 0; i < num_vars_; ++i)
        if (e[i]) t *= powers[i][e[i]];
      acc += t;
    }
    return acc;
  }
  K operator()(std::span<const K> x) const { return evaluate<K>(x); }
  K operator()(const std::vector<K>& x) const { return evaluate<K>(std::span<const K>(x)); }
  Complex evaluate_complex(std::span<const Complex> x) const { return evaluate<Complex>(x); }
  Complex evaluate_complex(const std::vector<Complex>& x) const {
    return evaluate<Complex>(std::span<const Complex>(x));
  }
  // Sum of |c| |x|^e over terms: the natural magnitude scale of an evaluation.
  double evaluation_scale(std::span<const Complex> x) const {
    double s = 0;
    for (const auto& [e, c] : terms_) {
      double t = magnitude(c);
      for (int i = 0; i < num_vars_; ++i) t *= std::pow(std::abs(x[i]), e[i]);
      s += t;
    }
    return s;
  }

  Polynomial operator-() const {
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial& operator*=(const K& s) { return *this = scaled(s); }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.num_vars_);
    Exponent e(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.num_vars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend Polynomial operator*(const K& s, const Polynomial& p) { return p.scaled(s); }
  friend Polynomial operator*(const Polynomial& p, const K& s) { return p.scaled(s); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial scaled(const K& s) const {
    Polynomial r(num_vars_);
    if (is_zero_scalar(s)) return r;
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  Polynomial pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power");
    Polynomial result = constant(num_vars_, ScalarTraits<K>::from_int(1));
    Polynomial base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  Polynomial partial(int var) const {
    if (var < 0 || var >= num_vars_) throw DimensionError("derivative variable out of range");
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent f = e;
      f[var] -= 1;
      r.add_term(f, c * ScalarTraits<K>::from_int(e[var]));
    }
    return r;
  }

  Polynomial conj_coeffs() const {
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, conj_of(c));
    return r;
  }

  Polynomial homogeneous_part(int deg) const {
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == deg) r.terms_.emplace(e, c);
    return r;
  }

  // Drops coefficients with |c| <= tol * max|c| (float-mode cleanup).
  Polynomial pruned(double rel_tol) const {
    const double cut = rel_tol * max_abs_coeff();
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_)
      if (magnitude(c) > cut) r.terms_.emplace(e, c);
    return r;
  }
  // Keeps only the real parts of the coefficients.
  Polynomial real_part() const {
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) {
      if constexpr (kIsExact<K>) {
        r.add_term(e, K(c.re()));
      } else {
        r.add_term(e, K(c.real(), 0.0));
      }
    }
    return r;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
    return m;
  }
  double coeff_norm2() const {
    double s = 0;
    for (const auto& [e, c] : terms_) s += std::norm(to_complex(c));
    return std::sqrt(s);
  }

  template <class To>
  Polynomial<To> cast() const {
    Polynomial<To> r(num_vars_);
    for (const auto& [e, c] : terms_) r.add_term(e, convert_scalar<To>(c));
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << scalar_text(it->second);
      for (int i = 0; i < num_vars_; ++i) {
        if (it->first[i] == 0) continue;
        os << "*x" << (i + 1);
        if (it->first[i] > 1) os << "^" << it->first[i];
      }
    }
    return os.str();
  }

 private:
  static bool is_zero_scalar(const K& c) { return rzlmi::is_zero(c); }
  static std::string scalar_text(const K& c) {
    if constexpr (kIsExact<K>) {
      return c.to_string();
    } else {
      std::ostringstream os;
      os.precision(17);
      if (c.imag() == 0.0) {
        os << c.real();
      } else {
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
      }
      return os.str();
    }
  }
  template <class V>
  static V lift(const K& c) {
    if constexpr (std::is_same_v<V, K>) {
      return c;
    } else {
      return V(to_complex(c));
    }
  }
  void check_compatible(const Polynomial& o) const {
    if (num_vars_ != o.num_vars_) throw DimensionError("polynomials have different variable counts");
  }

  int num_vars_ = 0;
  TermMap terms_;
};

template <class K>
std::ostream& operator<<(std::ostream& os, const Polynomial<K>& p) {
  return os << p.to_string();
}

// A polynomial in X0..Xd whose terms all have total degree exactly degree().
template <class K>
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial() = default;
  HomogeneousPolynomial(Polynomial<K> p, int degree) : poly_(std::move(p)), degree_(degree) {
    if (degree < 0) throw std::invalid_argument("homogeneous degree must be nonnegative");
    for (const auto& [e, c] : poly_.terms())
      if (total_degree(e) != degree) throw std::invalid_argument("polynomial is not homogeneous of the stated degree");
  }
  // Degree taken from the terms; the zero polynomial is rejected.
  static HomogeneousPolynomial from(Polynomial<K> p) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial has no homogeneous degree");
    const int d = p.degree();
    return HomogeneousPolynomial(std::move(p), d);
  }

  const Polynomial<K>& poly() const { return poly_; }
  int degree() const { return degree_; }
  int num_vars() const { return poly_.num_vars(); }
  bool is_zero() const { return poly_.is_zero(); }
  K operator()(const std::vector<K>& x) const { return poly_(x); }
  Complex evaluate_complex(const std::vector<Complex>& x) const { return poly_.evaluate_complex(x); }

  template <class To>
  HomogeneousPolynomial<To> cast() const {
    return HomogeneousPolynomial<To>(poly_.template cast<To>(), degree_);
  }
  friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a.degree_ == b.degree_ && a.poly_ == b.poly_;
  }

 private:
  Polynomial<K> poly_;
  int degree_ = 0;
};

// Dense univariate polynomial, ascending coefficients, no trailing zeros.
template <class K>
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UnivariatePolynomial monomial(int k, const K& c) {
    std::vector<K> v(k + 1);
    v[k] = c;
    return UnivariatePolynomial(std::move(v));
  }

  const std::vector<K>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  K coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : K{}; }
  K leading() const { return c_.empty() ? K{} : c_.back(); }

  template <class V>
  V evaluate(const V& t) const {
    V acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= t;
      if constexpr (std::is_same_v<V, K>) {
        acc += *it;
      } else {
        acc += V(to_complex(*it));
      }
    }
    return acc;
  }
  K operator()(const K& t) const { return evaluate<K>(t); }

  UnivariatePolynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<K> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * ScalarTraits<K>::from_int(static_cast<long>(k));
    return UnivariatePolynomial(std::move(d));
  }

  UnivariatePolynomial operator-() const {
    std::vector<K> v = c_;
    for (auto& x : v) x = -x;
    return UnivariatePolynomial(std::move(v));
  }
  friend UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    std::vector<K> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return UnivariatePolynomial(std::move(v));
  }
  friend UnivariatePolynomial operator-(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    return a + (-b);
  }
  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<K> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return UnivariatePolynomial(std::move(v));
  }
  UnivariatePolynomial scaled(const K& s) const {
    std::vector<K> v = c_;
    for (auto& x : v) x *= s;
    return UnivariatePolynomial(std::move(v));
  }
  friend bool operator==(const UnivariatePolynomial& a, const UnivariatePolynomial& b) { return a.c_ == b.c_; }

  // Coefficients reversed within a window of length len (t^{len-1} f(1/t)).
  UnivariatePolynomial reversed(int len) const {
    if (len < static_cast<int>(c_.size())) throw std::invalid_argument("reversal window shorter than polynomial");
    std::vector<K> v(len);
    for (std::size_t k = 0; k < c_.size(); ++k) v[len - 1 - k] = c_[k];
    return UnivariatePolynomial(std::move(v));
  }

  template <class To>
  UnivariatePolynomial<To> cast() const {
    std::vector<To> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.push_back(convert_scalar<To>(x));
    return UnivariatePolynomial<To>(std::move(v));
  }
  double max_abs_coeff() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, magnitude(x));
    return m;
  }

 private:
  void trim() {
    while (!c_.empty() && rzlmi::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

// Point of projective space with the first nonzero coordinate scaled to one.
template <class K>
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(std::vector<K> coords, double zero_tol = 0.0) : x_(std::move(coords)) {
    double big = 0;
    for (const auto& v : x_) big = std::max(big, magnitude(v));
    std::size_t lead = x_.size();
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!rzlmi::is_zero(x_[i]) && magnitude(x_[i]) > zero_tol * big) {
        lead = i;
        break;
      }
    }
    if (lead == x_.size()) throw std::invalid_argument("projective point needs a nonzero coordinate");
    const K s = x_[lead];
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (i < lead) {
        x_[i] = K{};
      } else {
        x_[i] = x_[i] / s;
      }
    }
  }
  const std::vector<K>& coords() const { return x_; }
  std::size_t size() const { return x_.size(); }
  const K& operator[](std::size_t i) const { return x_[i]; }
  ProjectivePoint conj() const {
    std::vector<K> v = x_;
    for (auto& c : v) c = conj_of(c);
    return ProjectivePoint(std::move(v));
  }

 private:
  std::vector<K> x_;
};

// ---- core operations --------------------------------------------------------

template <class K>
K evaluate(const Polynomial<K>& p, const std::vector<K>& x) {
  return p(x);
}

template <class K>
HomogeneousPolynomial<K> homogenize(const Polynomial<K>& p, int m);

template <class K>
Polynomial<K> dehomogenize(const HomogeneousPolynomial<K>& P);

// Substitutes x_i -> subs[i] (each a polynomial in a common variable set).
template <class K>
Polynomial<K> compose(const Polynomial<K>& p, const std::vector<Polynomial<K>>& subs);

// t -> p(x0 + t dir), coefficients extracted by expansion.
template <class K>
UnivariatePolynomial<K> restrict_to_line(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& dir);

// t -> t^m p(x0 + dir / t).
template <class K>
UnivariatePolynomial<K> reversed_restriction(const Polynomial<K>& p, const std::vector<K>& x0, const std::vector<K>& dir,
                                             int m);

// Coefficients c_k(x) of p(x0 + t x) = sum_k c_k(x) t^k, each homogeneous of degree k in x.
template <class K>
std::vector<Polynomial<K>> symbolic_line_coefficients(const Polynomial<K>& p, const std::vector<K>& x0);

// sum_a X0_a dP/dX_a. The zero result is returned as the zero polynomial of degree m-1.
template <class K>
HomogeneousPolynomial<K> directional_derivative(const HomogeneousPolynomial<K>& P, const std::vector<K>& X0);

template <class K>
struct DivisionResult {
  Polynomial<K> quotient;
  bool exact = false;
  double residual = 0.0;  // relative coefficient residual (0 in exact mode on success)
};

// Exact mode: multivariate division with the lex leading term. Float mode:
// least-squares quotient with a relative residual test against tol.
template <class K>
DivisionResult<K> exact_divide(const Polynomial<K>& p, const Polynomial<K>& q, double tol = 1e-9);

// All exponent vectors in num_vars variables of total degree exactly deg.
std::vector<Exponent> monomials_of_degree(int num_vars, int deg);

}  // namespace rzlmi
