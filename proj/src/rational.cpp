#include "lens/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "lens/errors.hpp"

namespace lens {

ParseError::ParseError(std::size_t offset, std::string expected, std::string found)
    : ParseError(offset, expected, found,
                 "parse error at offset " + std::to_string(offset) + ": expected " + expected +
                     ", found " + found) {}

ParseError::ParseError(std::size_t offset, std::string expected, std::string found,
                       const std::string& message)
    : Error(message), offset_(offset), expected_(std::move(expected)), found_(std::move(found)) {}

UnknownVariable::UnknownVariable(std::size_t offset, std::string name, int dims)
    : ParseError(offset, "variable index in 1.." + std::to_string(dims), name,
                 "unknown variable '" + name + "' at offset " + std::to_string(offset) +
                     " (dimension is " + std::to_string(dims) + ")") {}

namespace {

std::string format_point(const std::vector<std::complex<double>>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i].real()) + (p[i].imag() < 0 ? "" : "+") + std::to_string(p[i].imag()) + "i";
  }
  return s + ")";
}

}  // namespace

DivisionNearZero::DivisionNearZero(std::vector<std::complex<double>> point)
    : PreconditionError("division by a value near zero at " + format_point(point)),
      point_(std::move(point)) {}

NotLaurent::NotLaurent(std::string subtree)
    : PreconditionError("not a Laurent polynomial: " + subtree), subtree_(std::move(subtree)) {}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("to_rational: non-finite value");
  Rational q(x);  // exact: mpq_set_d does not round
  q.canonicalize();
  return q;
}

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw std::domain_error("pow: zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result(1);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  result.canonicalize();
  return result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

ComplexRational::ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

ComplexRational ComplexRational::inverse() const {
  const Rational n = norm();
  if (sgn(n) == 0) throw std::domain_error("ComplexRational::inverse of zero");
  return {re_ / n, -im_ / n};
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string to_string(const ComplexRational& z) {
  return "(" + to_string(z.re()) + ", " + to_string(z.im()) + ")";
}

}  // namespace lens
