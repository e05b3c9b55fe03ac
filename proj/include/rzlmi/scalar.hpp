#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

namespace rzlmi {

using Rational = mpq_class;
using Complex = std::complex<double>;

enum class CoeffMode { kExact, kFloat };

std::string to_string(CoeffMode mode);
CoeffMode coeff_mode_from_string(const std::string& s);

// a + b i with a, b rational.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT(runtime/explicit)
  GaussianRational(Rational re) : re_(std::move(re)), im_(0) {  // NOLINT
    re_.canonicalize();
  }
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string to_string() const;

 private:
  Rational re_;
  Rational im_;
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

using Exact = GaussianRational;

// Uniform scalar vocabulary shared by the exact and floating coefficient modes.
inline bool is_zero(const Exact& a) { return a.is_zero(); }
inline bool is_zero(const Complex& a) { return a == Complex(0.0, 0.0); }
inline Exact conj_of(const Exact& a) { return a.conj(); }
inline Complex conj_of(const Complex& a) { return std::conj(a); }
inline Complex to_complex(const Exact& a) { return a.to_complex(); }
inline Complex to_complex(const Complex& a) { return a; }
inline double magnitude(const Exact& a) { return std::abs(a.to_complex()); }
inline double magnitude(const Complex& a) { return std::abs(a); }

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Exact> {
  static constexpr CoeffMode kMode = CoeffMode::kExact;
  static Exact from_int(long v) { return Exact(v); }
  static Exact from_complex(const Complex& z);  // exact binary expansion of the doubles
  static Exact from_rational(const Rational& r) { return Exact(r); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr CoeffMode kMode = CoeffMode::kFloat;
  static Complex from_int(long v) { return Complex(static_cast<double>(v), 0.0); }
  static Complex from_complex(const Complex& z) { return z; }
  static Complex from_rational(const Rational& r) { return Complex(r.get_d(), 0.0); }
};

template <class K>
inline constexpr bool kIsExact = ScalarTraits<K>::kMode == CoeffMode::kExact;

// Converts between coefficient domains (exact -> float rounds; float -> exact is binary-exact).
template <class To, class From>
To convert_scalar(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else {
    return ScalarTraits<To>::from_complex(to_complex(v));
  }
}

Rational rational_from_double(double v);

// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double v, long max_den);

Rational parse_rational(const std::string& text);

// Exact square root of a nonnegative rational, if it is a perfect square.
bool rational_sqrt(const Rational& r, Rational* out);

}  // namespace rzlmi
