#ifndef LENS_LAURENT_HPP
#define LENS_LAURENT_HPP

// Exact multivariate Laurent polynomials with pole order at most one per
// coordinate. This is the symbolic ground truth every numerical routine in
// the library is checked against.

#include <complex>
#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lens/rational.hpp"

namespace lens {

/// Exponent vector of a monomial w^a = w1^a1 * ... * wn^an, every entry >= -1.
class MultiIndex {
 public:
  /// Throws AdmissibilityViolation if an entry is below -1 and
  /// std::invalid_argument if the vector is empty.
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)); }
  /// The unit vector e_j scaled by `power` (power is -1 or positive).
  static MultiIndex unit(int n, int j, int power = 1);

  int dims() const noexcept { return static_cast<int>(exponents_.size()); }
  int operator[](int j) const { return exponents_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }

  /// Sum of exponents.
  int degree() const;
  bool is_zero() const;
  bool has_pole() const;
  /// Exactly one entry equals -1 and the rest are zero.
  bool is_pure_pole() const;
  /// All entries >= 0.
  bool is_analytic() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
};

std::string to_string(const MultiIndex& a);

using CoefficientVector = std::vector<ComplexRational>;

/// Exact k x n complex matrix (residue and Jacobian matrices of the oracle).
class ExactMatrix {
 public:
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  ComplexRational& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const ComplexRational& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  /// Tr(M* M): sum of squared moduli of all entries.
  Rational trace_norm() const;
  Eigen::MatrixXcd to_numeric() const;

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  int rows_;
  int cols_;
  std::vector<ComplexRational> data_;
};

/// Vector-valued Laurent polynomial f: C^n -> C^k in normal form (no stored
/// all-zero coefficient vectors). Values are immutable; arithmetic returns
/// new polynomials.
class LaurentPoly {
 public:
  using Terms = std::map<MultiIndex, CoefficientVector>;

  /// The zero polynomial.
  LaurentPoly(int n, int k);
  /// Validates dimensions and drops zero coefficient vectors.
  LaurentPoly(int n, int k, Terms terms);

  static LaurentPoly constant(int n, CoefficientVector values);
  /// c * w^a placed in `component` of a k-vector.
  static LaurentPoly monomial(const MultiIndex& a, const ComplexRational& c, int k = 1, int component = 0);

  int dims() const noexcept { return n_; }
  int codims() const noexcept { return k_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient vector at `a` (zeros when absent).
  CoefficientVector coefficient(const MultiIndex& a) const;
  /// Maximum total degree over analytic terms, 0 if none.
  int max_degree() const;

  std::vector<std::complex<double>> evaluate(std::span<const std::complex<double>> point) const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  int n_;
  int k_;
  Terms terms_;
};

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a);
/// Scalar multiple.
LaurentPoly operator*(const ComplexRational& c, const LaurentPoly& a);
/// Componentwise product; a codimension-1 factor broadcasts. Throws
/// AdmissibilityViolation when an exponent would drop below -1.
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

enum class ArithOp { add, sub, scale, mul };

/// Dispatching form of the arithmetic above; `c` is used only by `scale`
/// (which ignores `b`).
LaurentPoly lp_arith(const LaurentPoly& a, const LaurentPoly& b, ArithOp op,
                     const ComplexRational& c = ComplexRational(1));

/// Canonical textual form: one line per term in increasing exponent order,
/// "[a1, ..., an] -> (re, im), (re, im)".
std::string serialize(const LaurentPoly& f);

/// Normalised torus integral (2 pi i)^-n * oint F(w) prod_j w_j^{s_j} dw over
/// |w_j| = lambda, where F = f or conj(f). Closed form: the Laurent
/// coefficient c_{-s-1} of f, or conj(c_{s+1}) * lambda^{2 sum(s+1)}.
CoefficientVector exterior_integral(const LaurentPoly& f, std::span<const int> s, bool conjugate,
                                    const Rational& lambda);
std::vector<std::complex<double>> exterior_integral(const LaurentPoly& f, std::span<const int> s,
                                                    bool conjugate, double lambda);

/// <f, g> = sum_alpha sum_a conj(c^f_a) c^g_a lambda^{2|a|}.
ComplexRational inner_product_exact(const LaurentPoly& f, const LaurentPoly& g, const Rational& lambda);
std::complex<double> inner_product_exact(const LaurentPoly& f, const LaurentPoly& g, double lambda);

struct Decomposition {
  CoefficientVector core;
  LaurentPoly principal;  // sum_beta eta_beta / w_beta
  LaurentPoly analytic;   // f - core - principal
  LaurentPoly tail;       // analytic terms of total degree >= 2
  ExactMatrix residues;   // k x n
  ExactMatrix jacobian;   // k x n
};

/// Splits f into core, principal and analytic parts. Throws MixedPoleTerm
/// for terms like w2/w1.
Decomposition decompose(const LaurentPoly& f);

/// Exact variance sum_{a != 0} |c_a|^2 lambda^{2|a|}; equals <f,f> - |E f|^2.
Rational variance_exact(const LaurentPoly& f, const Rational& lambda);
/// Approximate convenience form: lambda is taken exactly, the result rounded.
double variance_exact(const LaurentPoly& f, double lambda);

/// Tr(eta* eta) / lambda^2 + lambda^2 Tr(D* D).
Rational variance_paper(const ExactMatrix& residues, const ExactMatrix& jacobian, const Rational& lambda);
double variance_paper(const Eigen::MatrixXcd& residues, const Eigen::MatrixXcd& jacobian, double lambda);

/// Parseval energy of the degree >= 2 analytic tail at scale lambda.
Rational tail_energy_exact(const LaurentPoly& f, const Rational& lambda);

}  // namespace lens

#endif  // LENS_LAURENT_HPP
