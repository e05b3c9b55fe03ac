#include "rzlmi/scalar.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rzlmi {

std::string to_string(CoeffMode mode) { return mode == CoeffMode::kExact ? "rational" : "float"; }

CoeffMode coeff_mode_from_string(const std::string& s) {
  if (s == "rational" || s == "exact") return CoeffMode::kExact;
  if (s == "float") return CoeffMode::kFloat;
  throw std::invalid_argument("unknown coefficient mode '" + s + "'");
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ /= o.re_;
    return *this;
  }
  const Rational n = o.norm();
  Rational r = (re_ * o.re_ + im_ * o.im_) / n;
  Rational i = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::ostringstream os;
  os << "(" << re_.get_str() << (sgn(im_) < 0 ? "-" : "+") << Rational(abs(im_)).get_str() << "i)";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
  Rational r(v);  // mpq assignment from double is exact
  r.canonicalize();
  return r;
}

Exact ScalarTraits<Exact>::from_complex(const Complex& z) {
  return Exact(rational_from_double(z.real()), rational_from_double(z.imag()));
}

Rational rationalize(double v, long max_den) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot rationalize non-finite value");
  const bool neg = v < 0;
  double x = std::fabs(v);
  // Convergents h/k of the continued fraction of x.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
  mpz_class k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    x = 1.0 / frac;
    const double a_d = std::floor(x);
    if (a_d > 1e15) break;
    const mpz_class a = static_cast<long>(a_d);
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = x - a_d;
  }
  Rational r(h, k);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  bool looks_integer_fraction = true;
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) looks_integer_fraction = false;
  if (looks_integer_fraction) {
    if (s[0] == '+') s.erase(0, 1);
    const auto slash = s.find('/');
    if (slash != std::string::npos && slash + 1 < s.size() && s[slash + 1] == '-')
      throw std::invalid_argument("malformed rational '" + text + "'");
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
    if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
  }
  // Decimal literal such as 0.25 or 1e-3: take its exact decimal value.
  std::size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(epos + 1), &used);
      if (used != s.size() - epos - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number '" + text + "'");
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  const auto dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + text + "'");
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("malformed number '" + text + "'");
  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational r = exp10 >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

bool rational_sqrt(const Rational& r, Rational* out) {
  if (sgn(r) < 0) return false;
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  *out = Rational(sn, sd);
  out->canonicalize();
  return true;
}

}  // namespace rzlmi
