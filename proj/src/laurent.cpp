#include "lens/laurent.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lens/errors.hpp"

namespace lens {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  for (int e : exponents_) {
    if (e < -1) {
      throw AdmissibilityViolation("exponent " + std::to_string(e) +
                                   " below -1: pole order above one is not admissible");
    }
  }
}

MultiIndex MultiIndex::unit(int n, int j, int power) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  e.at(static_cast<std::size_t>(j)) = power;
  return MultiIndex(std::move(e));
}

int MultiIndex::degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

bool MultiIndex::is_zero() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](int e) { return e == 0; });
}

bool MultiIndex::has_pole() const {
  return std::any_of(exponents_.begin(), exponents_.end(), [](int e) { return e < 0; });
}

bool MultiIndex::is_pure_pole() const {
  int poles = 0;
  for (int e : exponents_) {
    if (e == -1) {
      ++poles;
    } else if (e != 0) {
      return false;
    }
  }
  return poles == 1;
}

bool MultiIndex::is_analytic() const { return !has_pole(); }

std::string to_string(const MultiIndex& a) {
  std::string s = "[";
  for (int j = 0; j < a.dims(); ++j) {
    if (j) s += ", ";
    s += std::to_string(a[j]);
  }
  return s + "]";
}

Rational ExactMatrix::trace_norm() const {
  Rational sum = 0;
  for (const auto& z : data_) sum += z.norm();
  return sum;
}

Eigen::MatrixXcd ExactMatrix::to_numeric() const {
  Eigen::MatrixXcd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).to_complex();
  return m;
}

namespace {

bool all_zero(const CoefficientVector& v) {
  return std::all_of(v.begin(), v.end(), [](const ComplexRational& z) { return z.is_zero(); });
}

void require_same_shape(const LaurentPoly& a, const LaurentPoly& b, const char* what) {
  if (a.dims() != b.dims() || a.codims() != b.codims()) {
    throw DimensionMismatch(std::string(what) + ": operands have shapes (n=" + std::to_string(a.dims()) +
                            ", k=" + std::to_string(a.codims()) + ") and (n=" + std::to_string(b.dims()) +
                            ", k=" + std::to_string(b.codims()) + ")");
  }
}

LaurentPoly add_scaled(const LaurentPoly& a, const LaurentPoly& b, int sign) {
  require_same_shape(a, b, sign > 0 ? "add" : "sub");
  LaurentPoly::Terms terms = a.terms();
  for (const auto& [idx, coeffs] : b.terms()) {
    auto [it, inserted] = terms.try_emplace(idx, CoefficientVector(static_cast<std::size_t>(a.codims())));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (sign > 0) {
        it->second[i] += coeffs[i];
      } else {
        it->second[i] -= coeffs[i];
      }
    }
  }
  return LaurentPoly(a.dims(), a.codims(), std::move(terms));
}

}  // namespace

LaurentPoly::LaurentPoly(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1) throw std::invalid_argument("LaurentPoly: n and k must be >= 1");
}

LaurentPoly::LaurentPoly(int n, int k, Terms terms) : LaurentPoly(n, k) {
  for (auto& [idx, coeffs] : terms) {
    if (idx.dims() != n) {
      throw DimensionMismatch("LaurentPoly: term " + to_string(idx) + " does not have dimension " +
                              std::to_string(n));
    }
    if (static_cast<int>(coeffs.size()) != k) {
      throw DimensionMismatch("LaurentPoly: coefficient vector of length " + std::to_string(coeffs.size()) +
                              ", expected " + std::to_string(k));
    }
    if (!all_zero(coeffs)) terms_.emplace(idx, std::move(coeffs));
  }
}

LaurentPoly LaurentPoly::constant(int n, CoefficientVector values) {
  const int k = static_cast<int>(values.size());
  Terms t;
  t.emplace(MultiIndex::zero(n), std::move(values));
  return LaurentPoly(n, k, std::move(t));
}

LaurentPoly LaurentPoly::monomial(const MultiIndex& a, const ComplexRational& c, int k, int component) {
  if (component < 0 || component >= k) throw std::out_of_range("LaurentPoly::monomial: component");
  CoefficientVector v(static_cast<std::size_t>(k));
  v[static_cast<std::size_t>(component)] = c;
  Terms t;
  t.emplace(a, std::move(v));
  return LaurentPoly(a.dims(), k, std::move(t));
}

CoefficientVector LaurentPoly::coefficient(const MultiIndex& a) const {
  auto it = terms_.find(a);
  if (it == terms_.end()) return CoefficientVector(static_cast<std::size_t>(k_));
  return it->second;
}

int LaurentPoly::max_degree() const {
  int d = 0;
  for (const auto& [idx, _] : terms_)
    if (idx.is_analytic()) d = std::max(d, idx.degree());
  return d;
}

std::vector<std::complex<double>> LaurentPoly::evaluate(std::span<const std::complex<double>> point) const {
  if (static_cast<int>(point.size()) != n_) throw DimensionMismatch("LaurentPoly::evaluate: point dimension");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(k_));
  for (const auto& [idx, coeffs] : terms_) {
    std::complex<double> m = 1.0;
    for (int j = 0; j < n_; ++j) {
      const int e = idx[j];
      if (e == -1) {
        m /= point[static_cast<std::size_t>(j)];
      } else {
        for (int p = 0; p < e; ++p) m *= point[static_cast<std::size_t>(j)];
      }
    }
    for (std::size_t a = 0; a < coeffs.size(); ++a) out[a] += coeffs[a].to_complex() * m;
  }
  return out;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return add_scaled(a, b, +1); }
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return add_scaled(a, b, -1); }
LaurentPoly operator-(const LaurentPoly& a) { return ComplexRational(-1) * a; }

LaurentPoly operator*(const ComplexRational& c, const LaurentPoly& a) {
  LaurentPoly::Terms terms;
  for (const auto& [idx, coeffs] : a.terms()) {
    CoefficientVector v = coeffs;
    for (auto& z : v) z *= c;
    terms.emplace(idx, std::move(v));
  }
  return LaurentPoly(a.dims(), a.codims(), std::move(terms));
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.dims() != b.dims()) throw DimensionMismatch("mul: operands live in different dimensions");
  if (a.codims() != b.codims() && a.codims() != 1 && b.codims() != 1) {
    throw DimensionMismatch("mul: codimensions " + std::to_string(a.codims()) + " and " +
                            std::to_string(b.codims()) + " do not broadcast");
  }
  const int n = a.dims();
  const int k = std::max(a.codims(), b.codims());
  LaurentPoly::Terms terms;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      std::vector<int> e(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(j)] = ia[j] + ib[j];
      MultiIndex idx(std::move(e));  // throws AdmissibilityViolation below -1
      auto [it, inserted] = terms.try_emplace(idx, CoefficientVector(static_cast<std::size_t>(k)));
      for (int c = 0; c < k; ++c) {
        const auto& x = ca[static_cast<std::size_t>(a.codims() == 1 ? 0 : c)];
        const auto& y = cb[static_cast<std::size_t>(b.codims() == 1 ? 0 : c)];
        it->second[static_cast<std::size_t>(c)] += x * y;
      }
    }
  }
  return LaurentPoly(n, k, std::move(terms));
}

LaurentPoly lp_arith(const LaurentPoly& a, const LaurentPoly& b, ArithOp op, const ComplexRational& c) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::scale:
      return c * a;
    case ArithOp::mul:
      return a * b;
  }
  throw std::invalid_argument("lp_arith: unknown operation");
}

std::string serialize(const LaurentPoly& f) {
  std::string out;
  for (const auto& [idx, coeffs] : f.terms()) {
    out += to_string(idx) + " ->";
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      out += (i ? ", " : " ") + to_string(coeffs[i]);
    }
    out += '\n';
  }
  return out;
}

CoefficientVector exterior_integral(const LaurentPoly& f, std::span<const int> s, bool conjugate,
                                    const Rational& lambda) {
  if (sgn(lambda) <= 0) throw std::invalid_argument("exterior_integral: lambda must be positive");
  if (static_cast<int>(s.size()) != f.dims()) throw DimensionMismatch("exterior_integral: shape vector dimension");
  const int n = f.dims();
  std::vector<int> target(static_cast<std::size_t>(n));
  int weight = 0;
  for (int j = 0; j < n; ++j) {
    const int sj = s[static_cast<std::size_t>(j)];
    target[static_cast<std::size_t>(j)] = conjugate ? sj + 1 : -sj - 1;
    weight += sj + 1;
  }
  // Exponents outside the admissible range have zero coefficient.
  if (std::any_of(target.begin(), target.end(), [](int e) { return e < -1; })) {
    return CoefficientVector(static_cast<std::size_t>(f.codims()));
  }
  CoefficientVector c = f.coefficient(MultiIndex(target));
  if (!conjugate) return c;
  const ComplexRational scale(pow(lambda, 2 * weight));
  for (auto& z : c) z = z.conj() * scale;
  return c;
}

std::vector<std::complex<double>> exterior_integral(const LaurentPoly& f, std::span<const int> s,
                                                    bool conjugate, double lambda) {
  const auto exact = exterior_integral(f, s, conjugate, to_rational(lambda));
  std::vector<std::complex<double>> out;
  out.reserve(exact.size());
  for (const auto& z : exact) out.push_back(z.to_complex());
  return out;
}

ComplexRational inner_product_exact(const LaurentPoly& f, const LaurentPoly& g, const Rational& lambda) {
  require_same_shape(f, g, "inner_product_exact");
  if (sgn(lambda) <= 0) throw std::invalid_argument("inner_product_exact: lambda must be positive");
  ComplexRational sum;
  for (const auto& [idx, cf] : f.terms()) {
    auto it = g.terms().find(idx);
    if (it == g.terms().end()) continue;
    ComplexRational term;
    for (std::size_t a = 0; a < cf.size(); ++a) term += cf[a].conj() * it->second[a];
    sum += term * ComplexRational(pow(lambda, 2 * idx.degree()));
  }
  return sum;
}

std::complex<double> inner_product_exact(const LaurentPoly& f, const LaurentPoly& g, double lambda) {
  return inner_product_exact(f, g, to_rational(lambda)).to_complex();
}

Decomposition decompose(const LaurentPoly& f) {
  const int n = f.dims();
  const int k = f.codims();
  Decomposition d{CoefficientVector(static_cast<std::size_t>(k)),
                  LaurentPoly(n, k),
                  LaurentPoly(n, k),
                  LaurentPoly(n, k),
                  ExactMatrix(k, n),
                  ExactMatrix(k, n)};
  LaurentPoly::Terms principal, analytic, tail;
  for (const auto& [idx, coeffs] : f.terms()) {
    if (idx.is_zero()) {
      d.core = coeffs;
    } else if (idx.is_pure_pole()) {
      const int beta = static_cast<int>(std::find(idx.exponents().begin(), idx.exponents().end(), -1) -
                                        idx.exponents().begin());
      for (int a = 0; a < k; ++a) d.residues(a, beta) = coeffs[static_cast<std::size_t>(a)];
      principal.emplace(idx, coeffs);
    } else if (idx.has_pole()) {
      throw MixedPoleTerm("term " + to_string(idx) +
                          " mixes a simple pole with other variables; not decomposable into core, "
                          "principal and analytic parts");
    } else {
      if (idx.degree() == 1) {
        const int beta = static_cast<int>(std::find(idx.exponents().begin(), idx.exponents().end(), 1) -
                                          idx.exponents().begin());
        for (int a = 0; a < k; ++a) d.jacobian(a, beta) = coeffs[static_cast<std::size_t>(a)];
      } else {
        tail.emplace(idx, coeffs);
      }
      analytic.emplace(idx, coeffs);
    }
  }
  d.principal = LaurentPoly(n, k, std::move(principal));
  d.analytic = LaurentPoly(n, k, std::move(analytic));
  d.tail = LaurentPoly(n, k, std::move(tail));
  return d;
}

Rational variance_exact(const LaurentPoly& f, const Rational& lambda) {
  if (sgn(lambda) <= 0) throw std::invalid_argument("variance_exact: lambda must be positive");
  decompose(f);  // rejects mixed pole terms
  Rational v = 0;
  for (const auto& [idx, coeffs] : f.terms()) {
    if (idx.is_zero()) continue;
    Rational energy = 0;
    for (const auto& z : coeffs) energy += z.norm();
    v += energy * pow(lambda, 2 * idx.degree());
  }
  return v;
}

double variance_exact(const LaurentPoly& f, double lambda) {
  return variance_exact(f, to_rational(lambda)).get_d();
}

Rational variance_paper(const ExactMatrix& residues, const ExactMatrix& jacobian, const Rational& lambda) {
  if (sgn(lambda) <= 0) throw std::invalid_argument("variance_paper: lambda must be positive");
  const Rational l2 = lambda * lambda;
  return residues.trace_norm() / l2 + l2 * jacobian.trace_norm();
}

double variance_paper(const Eigen::MatrixXcd& residues, const Eigen::MatrixXcd& jacobian, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("variance_paper: lambda must be positive");
  const double l2 = lambda * lambda;
  return residues.squaredNorm() / l2 + l2 * jacobian.squaredNorm();
}

Rational tail_energy_exact(const LaurentPoly& f, const Rational& lambda) {
  const Decomposition d = decompose(f);
  return variance_exact(d.tail, lambda);
}

}  // namespace lens
