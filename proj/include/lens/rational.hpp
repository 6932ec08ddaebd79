#ifndef LENS_RATIONAL_HPP
#define LENS_RATIONAL_HPP

#include <complex>
#include <string>

#include <gmpxx.h>

namespace lens {

using Rational = mpq_class;

/// Exact value of a double (every finite double is a dyadic rational).
Rational to_rational(double x);

/// Integer power, negative exponents allowed for non-zero bases.
Rational pow(const Rational& base, int exponent);

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

/// Exact complex number over arbitrary-precision rationals.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(Rational re, Rational im = 0);
  ComplexRational(long re, long im = 0) : ComplexRational(Rational(re), Rational(im)) {}
  ComplexRational(int re, int im = 0) : ComplexRational(Rational(re), Rational(im)) {}

  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  /// |z|^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  ComplexRational conj() const { return {re_, -im_}; }
  /// Multiplicative inverse; throws std::domain_error on zero.
  ComplexRational inverse() const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_ = 0;
  Rational im_ = 0;
};

/// "(re, im)" with exact fractions.
std::string to_string(const ComplexRational& z);

}  // namespace lens

#endif  // LENS_RATIONAL_HPP
