#include "lens/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "lens/errors.hpp"
#include "lens/expr.hpp"
#include "lens/lens_analysis.hpp"
#include "lens/morphs.hpp"
#include "lens/slices.hpp"
#include "lens/torus.hpp"

namespace lens {

namespace {

constexpr double kPi = std::numbers::pi;

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }

  void check(bool ok, double err = 0, std::string_view what = {}) {
    ++r_.cases;
    if (std::isfinite(err)) r_.worst = std::max(r_.worst, err);
    if (!ok) {
      if (r_.failures == 0) r_.detail = std::string(what);
      ++r_.failures;
    }
  }
  void note(std::string text) { r_.detail = std::move(text); }
  PropertyResult& result() { return r_; }
  PropertyResult done() { return std::move(r_); }

 private:
  PropertyResult r_;
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// |a - b| / max(1, |b|)
double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double max_rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  double e = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) e = std::max(e, rel_err(a(i), b(i)));
  return e;
}

AngularInterval random_interval(Rng& rng) {
  double a = uniform(rng, -kPi, kPi);
  double b = uniform(rng, -kPi, kPi);
  if (a > b) std::swap(a, b);
  return AngularInterval::make(a, b, true, false);
}

/// Disjoint pieces of (-pi, pi]: 1..max_pieces consecutive intervals between sorted cut points.
std::vector<AngularInterval> random_partition(Rng& rng, int max_cuts) {
  const int cuts = uniform_int(rng, 0, max_cuts);
  std::vector<double> pts{-kPi};
  for (int i = 0; i < cuts; ++i) pts.push_back(uniform(rng, -kPi, kPi));
  pts.push_back(kPi);
  std::sort(pts.begin(), pts.end());
  std::vector<AngularInterval> pieces;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) pieces.push_back(AngularInterval::make(pts[i], pts[i + 1], true, false));
  return pieces;
}

Rational random_scale_exact(Rng& rng) {
  static const int nums[] = {1, 1, 3, 1, 3, 2, 5};
  static const int dens[] = {4, 2, 4, 1, 2, 1, 2};
  const int i = uniform_int(rng, 0, 6);
  return Rational(nums[i], dens[i]);
}

std::vector<int> shape_exponent(int n, int delta, int delta_value) {
  std::vector<int> s(static_cast<std::size_t>(n), -1);
  if (delta >= 0) s[static_cast<std::size_t>(delta)] = delta_value;
  return s;
}

/// The exponent vectors s of oint F prod w^s for the three integral shapes,
/// each taken with F = P and F = conj(P): s = -1, s = -1 except s_delta = 0,
/// s = -1 except s_delta = -2.
std::vector<std::vector<int>> integral_shapes(int n) {
  std::vector<std::vector<int>> out{shape_exponent(n, -1, 0)};
  for (int d = 0; d < n; ++d) {
    out.push_back(shape_exponent(n, d, 0));
    out.push_back(shape_exponent(n, d, -2));
  }
  return out;
}

Eigen::MatrixXcd numeric(const ExactMatrix& m) { return m.to_numeric(); }

cplx trace(const Eigen::MatrixXcd& m) { return m.trace(); }

}  // namespace

namespace props {

PropertyResult full_disc_measure() {
  Tally t("full_disc_measure");
  for (double lambda : {0.1, 1.0, 7.5}) {
    const double m = slice_measure({lambda, AngularInterval::full_circle()});
    t.check(m == 1.0, std::abs(m - 1.0), "full disc does not have measure 1");
    const double p = SliceSet(lambda, {AngularInterval::full_circle()}).measure();
    t.check(p == 1.0, std::abs(p - 1.0), "full disc slice set does not have measure 1");
  }
  return t.done();
}

PropertyResult partition_additivity(Rng& rng, int cases, double tol) {
  Tally t("partition_additivity");
  for (int c = 0; c < cases; ++c) {
    const double lambda = uniform(rng, 0.1, 3.0);
    const auto pieces = random_partition(rng, 15);
    double sum = 0;
    for (const auto& p : pieces) sum += slice_measure({lambda, p});
    const SliceSet merged(lambda, pieces);
    const double err = std::max(std::abs(sum - 1.0), std::abs(merged.measure() - 1.0));
    t.check(err <= tol && merged.components().size() == 1, err,
            fmt::format("partition into {} pieces sums to {:.17g}", pieces.size(), sum));
  }
  return t.done();
}

PropertyResult product_multiplicativity(Rng& rng, int cases, double tol) {
  Tally t("product_multiplicativity");
  for (int c = 0; c < cases; ++c) {
    const int factors = uniform_int(rng, 2, 3);
    std::vector<SliceSet> sets;
    double via_arcs = 1;
    for (int f = 0; f < factors; ++f) {
      const double lambda = uniform(rng, 0.1, 3.0);
      auto pieces = random_partition(rng, 5);
      std::vector<AngularInterval> kept;
      for (std::size_t i = 0; i < pieces.size(); ++i)
        if (uniform_int(rng, 0, 1) == 1 || (i + 1 == pieces.size() && kept.empty())) kept.push_back(pieces[i]);
      double arc_sum = 0;
      for (const auto& p : kept) arc_sum += arc_integral_check({lambda, p}, 64).real();
      via_arcs *= arc_sum;
      sets.emplace_back(lambda, kept);
    }
    const double product = product_measure(sets);

    // split one component of the first factor and check additivity of the rectangle
    const AngularInterval first = sets[0].components().front();
    const double cut = uniform(rng, first.lo, first.hi);
    std::vector<SliceSet> left = sets, right = sets;
    std::vector<AngularInterval> lpieces = sets[0].components(), rpieces;
    lpieces.front() = AngularInterval::make(first.lo, cut, first.lo_open, false);
    rpieces.push_back(AngularInterval::make(cut, first.hi, true, first.hi_open));
    left[0] = SliceSet(sets[0].lambda(), lpieces);
    right[0] = SliceSet(sets[0].lambda(), rpieces);
    const double split = product_measure(left) + product_measure(right);

    const double err = std::max(std::abs(product - via_arcs), std::abs(product - split));
    t.check(err <= tol, err, fmt::format("{}-factor product {:.17g} vs {:.17g}", factors, product, via_arcs));
  }
  return t.done();
}

PropertyResult measure_monotonicity(Rng& rng, int cases) {
  Tally t("measure_monotonicity");
  for (int c = 0; c < cases; ++c) {
    const AngularInterval outer = random_interval(rng);
    double a = uniform(rng, outer.lo, outer.hi);
    double b = uniform(rng, outer.lo, outer.hi);
    if (a > b) std::swap(a, b);
    const AngularInterval inner = AngularInterval::make(a, b, true, false);
    const double lambda = uniform(rng, 0.1, 3.0);
    t.check(outer.contains(inner) && slice_measure({lambda, inner}) <= slice_measure({lambda, outer}), 0,
            "sub-interval has larger measure");
  }
  return t.done();
}

PropertyResult measure_scale_invariance(Rng& rng, int cases) {
  Tally t("measure_scale_invariance");
  for (int c = 0; c < cases; ++c) {
    const AngularInterval i = random_interval(rng);
    const double a = slice_measure({uniform(rng, 0.01, 1.0), i});
    const double b = slice_measure({uniform(rng, 1.0, 100.0), i});
    t.check(a == b, std::abs(a - b), "measure depends on the radius");
  }
  return t.done();
}

PropertyResult arc_integral_agreement(Rng& rng, int cases, double tol) {
  Tally t("arc_integral_agreement");
  for (int c = 0; c < cases; ++c) {
    const Slice s{uniform(rng, 0.1, 3.0), random_interval(rng)};
    const cplx v = arc_integral_check(s, uniform_int(rng, 8, 256));
    const double err = std::max(std::abs(v.imag()), std::abs(v.real() - slice_measure(s)));
    t.check(err <= tol, err, "contour integral of dw/w disagrees with |I|/2pi");
  }
  return t.done();
}

PropertyResult semiring_closure(Rng& rng, int cases, double tol) {
  Tally t("semiring_closure");
  for (int c = 0; c < cases; ++c) {
    const double lambda = uniform(rng, 0.1, 3.0);
    const Slice a{lambda, random_interval(rng)};
    const Slice b{lambda, random_interval(rng)};
    const SliceSet both = slice_algebra(a, b, SliceOp::intersect);
    const SliceSet diff = slice_algebra(a, b, SliceOp::subtract);
    const double err = std::abs(slice_measure(a) - both.measure() - diff.measure());
    t.check(both.components().size() <= 1 && diff.components().size() <= 2 && err <= tol, err,
            "intersection / difference leaves the semi-ring or breaks additivity");
  }
  bool threw = false;
  try {
    slice_algebra({1.0, AngularInterval::full_circle()}, {2.0, AngularInterval::full_circle()}, SliceOp::intersect);
  } catch (const ScaleMismatch&) {
    threw = true;
  }
  t.check(threw, 0, "slices of different radii were combined");
  return t.done();
}

PropertyResult tail_shapes_exact(Rng& rng, int cases) {
  Tally t("tail_shapes_exact");
  for (int c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const LaurentPoly tail = random_tail(rng, n, uniform_int(rng, 1, 2), 2, 4, 4, 3);
    const Rational lambda = random_scale_exact(rng);
    bool ok = true;
    for (const auto& s : integral_shapes(n))
      for (bool conj : {false, true})
        for (const auto& v : exterior_integral(tail, s, conj, lambda)) ok = ok && v.is_zero();
    t.check(ok, 0, "nonzero shape integral for tail\n" + serialize(tail));
  }
  return t.done();
}

PropertyResult tail_shapes_quadrature(Rng& rng, int cases, double tol) {
  Tally t("tail_shapes_quadrature");
  for (int c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const LaurentPoly tail = random_tail(rng, n, uniform_int(rng, 1, 2), 2, 4, 4, 3);
    const double lambda = uniform(rng, 0.3, 1.7);
    const VectorFunction f = make_function(tail);
    double err = 0;
    for (const auto& s : integral_shapes(n))
      for (bool conj : {false, true})
        for (const auto& v : exterior_integral_numeric(f, s, conj, lambda)) err = std::max(err, std::abs(v));
    t.check(err <= tol, err, "quadrature shape integral above tolerance for tail\n" + serialize(tail));
  }
  return t.done();
}

PropertyResult tail_self_pairing_erratum(Rng& rng, int cases, double tol) {
  Tally t("erratum_tail_self_pairing");
  // sum_a c_a oint conj(P) w^{a-1}: each term is conj(c_a) lambda^{2|a|}.
  auto self_pairing = [](const LaurentPoly& p, const Rational& lambda, std::size_t alpha) {
    ComplexRational sum;
    for (const auto& [idx, coeffs] : p.terms()) {
      std::vector<int> s = idx.exponents();
      for (auto& e : s) e -= 1;
      sum += coeffs[alpha] * exterior_integral(p, s, true, lambda)[alpha];
    }
    return sum;
  };
  for (int c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const int k = uniform_int(rng, 1, 2);
    const LaurentPoly tail = random_tail(rng, n, k, 2, 4, 4, 3);
    const Rational lambda = random_scale_exact(rng);
    bool ok = true;
    double total = 0;
    for (int alpha = 0; alpha < k; ++alpha) {
      const auto a = static_cast<std::size_t>(alpha);
      Rational parseval = 0;
      bool nonzero = false;
      for (const auto& [idx, coeffs] : tail.terms()) {
        parseval += coeffs[a].norm() * pow(lambda, 2 * idx.degree());
        nonzero = nonzero || !coeffs[a].is_zero();
      }
      const ComplexRational oracle = self_pairing(tail, lambda, a);
      ok = ok && oracle == ComplexRational(parseval) && (oracle.is_zero() != nonzero);
      total += parseval.get_d();
    }
    const double quad = inner_product_numeric(make_function(tail), make_function(tail), lambda.get_d()).real();
    const double err = std::abs(quad - total) / std::max(1.0, total);
    t.check(ok && err <= tol, err, "self-pairing of tail differs from the Parseval sum\n" + serialize(tail));
  }
  const LaurentPoly w2 = LaurentPoly::monomial(MultiIndex({2}), ComplexRational(1));
  for (const Rational& lambda : {Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(7, 3)}) {
    const ComplexRational v = self_pairing(w2, lambda, 0);
    t.check(v == ComplexRational(pow(lambda, 4)), 0, "P = w^2 does not give lambda^4");
  }
  t.note("not 0: the oracle gives sum |c_a|^2 lambda^(2|a|), e.g. lambda^4 for P = w^2");
  return t.done();
}

PropertyResult component_expectations(Rng& rng, int cases) {
  Tally t("component_expectations");
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const Decomposition d = decompose(f);
    const std::vector<int> s(static_cast<std::size_t>(f.dims()), -1);
    const Rational lambda = random_scale_exact(rng);
    bool ok = true;
    for (const LaurentPoly* part : {&d.principal, &d.analytic})
      for (bool conj : {false, true})
        for (const auto& v : exterior_integral(*part, s, conj, lambda)) ok = ok && v.is_zero();
    t.check(ok, 0, "principal or analytic part has nonzero expectation\n" + serialize(f));
  }
  return t.done();
}

PropertyResult component_orthogonality(Rng& rng, int cases) {
  Tally t("component_orthogonality");
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const Decomposition d = decompose(f);
    const Rational lambda = random_scale_exact(rng);
    const bool ok = inner_product_exact(d.principal, d.analytic, lambda).is_zero() &&
                    inner_product_exact(d.analytic, d.principal, lambda).is_zero();
    t.check(ok, 0, "principal and analytic parts are not orthogonal\n" + serialize(f));
  }
  return t.done();
}

PropertyResult component_norms(Rng& rng, int cases) {
  Tally t("component_norms");
  for (int c = 0; c < cases; ++c) {
    RandomPolyOptions opts;
    opts.max_tail_terms = uniform_int(rng, 0, 1) * 3;
    const LaurentPoly f = random_decomposable(rng, opts);
    const Decomposition d = decompose(f);
    const Rational lambda = random_scale_exact(rng);
    const Rational l2 = lambda * lambda;
    Rational tail = 0;
    for (const auto& [idx, coeffs] : d.tail.terms())
      for (const auto& z : coeffs) tail += z.norm() * pow(lambda, 2 * idx.degree());
    const bool principal_ok =
        inner_product_exact(d.principal, d.principal, lambda) == ComplexRational(d.residues.trace_norm() / l2);
    const bool analytic_ok =
        inner_product_exact(d.analytic, d.analytic, lambda) == ComplexRational(l2 * d.jacobian.trace_norm() + tail);
    const bool tail_ok = tail_energy_exact(f, lambda) == tail && (d.tail.is_zero() == (tail == 0));
    t.check(principal_ok && analytic_ok && tail_ok, 0, "component norm mismatch\n" + serialize(f));
  }
  return t.done();
}

PropertyResult expectation_scale_independence(Rng& rng, int cases, double tol) {
  Tally t("expectation_scale_independence");
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const VectorFunction fn = make_function(f);
    const auto e1 = spectral_summary(fn, uniform(rng, 0.2, 0.8)).core;
    const auto e2 = spectral_summary(fn, uniform(rng, 1.2, 2.0)).core;
    const auto exact = f.coefficient(MultiIndex::zero(f.dims()));
    double err = 0;
    for (std::size_t a = 0; a < e1.size(); ++a)
      err = std::max({err, rel_err(e1[a], e2[a]), rel_err(e1[a], exact[a].to_complex())});
    t.check(err <= tol, err, "expectation depends on the scale\n" + serialize(f));
  }
  return t.done();
}

PropertyResult variance_exact_subclass(Rng& rng, int cases, double tol) {
  Tally t("variance_exact_subclass");
  RandomPolyOptions opts;
  opts.max_tail_terms = 0;
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng, opts);
    const Decomposition d = decompose(f);
    const VectorFunction fn = make_function(f);
    double err = 0;
    for (double lambda : {0.3, 1.0, 1.7}) {
      const double formula = variance_paper(numeric(d.residues), numeric(d.jacobian), lambda);
      const double measured = spectral_summary(fn, lambda).variance;
      err = std::max(err, std::abs(measured - formula) / std::max(1.0, formula));
    }
    t.check(err <= tol, err, "measured variance differs from the closed form\n" + serialize(f));
  }
  return t.done();
}

PropertyResult parseval_consistency(Rng& rng, int cases) {
  Tally t("parseval_consistency");
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const Rational lambda = random_scale_exact(rng);
    Rational core = 0;
    for (const auto& z : f.coefficient(MultiIndex::zero(f.dims()))) core += z.norm();
    const ComplexRational expected = inner_product_exact(f, f, lambda) - ComplexRational(core);
    t.check(ComplexRational(variance_exact(f, lambda)) == expected, 0, "variance is not <f,f> - |E f|^2\n" + serialize(f));
  }
  return t.done();
}

PropertyResult variance_tail_gap_erratum(Rng& rng, int cases) {
  Tally t("erratum_variance_tail_gap");
  long strict = 0;
  for (int c = 0; c < cases; ++c) {
    RandomPolyOptions opts;
    opts.max_tail_terms = uniform_int(rng, 0, 3);
    const LaurentPoly f = random_decomposable(rng, opts);
    const Decomposition d = decompose(f);
    const Rational lambda = random_scale_exact(rng);
    const Rational exact = variance_exact(f, lambda);
    const Rational paper = variance_paper(d.residues, d.jacobian, lambda);
    const Rational gap = exact - paper;
    const bool ok = gap == tail_energy_exact(f, lambda) && gap >= 0 && ((gap == 0) == d.tail.is_zero());
    if (gap > 0) ++strict;
    t.check(ok, 0, "variance gap is not the tail energy\n" + serialize(f));
  }
  if (t.result().failures == 0)
    t.note(fmt::format("closed form is a lower bound; strictly below the variance in {} of {} cases (nonzero tail)",
                       strict, cases));
  return t.done();
}

PropertyResult uncertainty_bound_sweep(Rng& rng, int cases, int steps, double tol) {
  Tally t("uncertainty_bound_sweep");
  const auto grid = geometric_grid(0.25, 4.0, steps);
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const VectorFunction fn = make_function(f);
    const double tr_eta = decompose(f).residues.trace_norm().get_d();
    double worst = 0;
    for (double lambda : grid) {
      const SpectralSummary s = spectral_summary(fn, lambda);
      worst = std::max(worst, (tr_eta - lambda * lambda * s.variance) / std::max(1.0, tr_eta));
    }
    t.check(worst <= tol, std::max(0.0, worst), "lambda^2 V fell below Tr(eta* eta)\n" + serialize(f));
  }
  return t.done();
}

PropertyResult oracle_quadrature_agreement(Rng& rng, int cases, double tol) {
  Tally t("oracle_quadrature_agreement");
  for (int c = 0; c < cases; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const Decomposition d = decompose(f);
    const double lambda = std::array{0.3, 1.0, 1.7}[static_cast<std::size_t>(c % 3)];
    const Rational lq = to_rational(lambda);
    const SpectralSummary s = spectral_summary(make_function(f), lambda);
    double err = 0;
    for (std::size_t a = 0; a < s.core.size(); ++a) err = std::max(err, rel_err(s.core[a], d.core[a].to_complex()));
    err = std::max(err, max_rel_err(s.residues, numeric(d.residues)));
    err = std::max(err, max_rel_err(s.jacobian, numeric(d.jacobian)));
    err = std::max(err, rel_err(s.variance, variance_exact(f, lq).get_d()));
    err = std::max(err, rel_err(s.tail_energy, tail_energy_exact(f, lq).get_d()));
    t.check(err <= tol, err, "spectral summary differs from the exact oracle\n" + serialize(f));
  }
  return t.done();
}

PropertyResult dft_coefficients_exact(Rng& rng, int cases, double tol) {
  Tally t("dft_coefficients_exact");
  for (int c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const int top = uniform_int(rng, 1, 5);
    LaurentPoly::Terms terms;
    const int count = uniform_int(rng, 1, 6);
    for (int i = 0; i < count; ++i) {
      std::vector<int> e(static_cast<std::size_t>(n));
      for (auto& x : e) x = uniform_int(rng, -1, top);
      terms[MultiIndex(e)] = {random_coefficient(rng, 3)};
    }
    const LaurentPoly f(n, 1, std::move(terms));
    const double lambda = uniform(rng, 0.7, 1.4);
    const int points = 16;  // wider than any exponent span [-1, 5]
    const TorusGrid grid = sample_torus(make_function(f), lambda, points);
    double err = 0;
    std::vector<int> e(static_cast<std::size_t>(n), -1);
    for (;;) {
      const MultiIndex a(e);
      err = std::max(err, rel_err(laurent_coefficient(grid, a)[0], f.coefficient(a)[0].to_complex()));
      int j = n - 1;
      for (; j >= 0; --j) {
        if (++e[static_cast<std::size_t>(j)] <= top + 1) break;
        e[static_cast<std::size_t>(j)] = -1;
      }
      if (j < 0) break;
    }
    t.check(err <= tol, err, "DFT coefficient differs from the exact coefficient\n" + serialize(f));
  }
  return t.done();
}

PropertyResult optimal_scale_reproduction(Rng& rng, int cases, double tol) {
  Tally t("optimal_scale_reproduction");
  RandomPolyOptions opts;
  opts.max_tail_terms = 0;
  const auto grid = geometric_grid(0.1, 10.0, 33);
  for (int c = 0; c < cases; ++c) {
    LaurentPoly f = random_decomposable(rng, opts);
    Decomposition d = decompose(f);
    while (d.residues.trace_norm() == 0 || d.jacobian.trace_norm() == 0) {
      f = random_decomposable(rng, opts);
      d = decompose(f);
    }
    const LensSweep sweep = variance_sweep(make_function(f), grid);
    const double closed = optimal_scale(numeric(d.residues), numeric(d.jacobian)).value;
    const double err = sweep.empirical ? std::abs(*sweep.empirical - closed) : INFINITY;
    t.check(err <= tol, err, "empirical minimiser differs from the closed form\n" + serialize(f));
  }
  return t.done();
}

PropertyResult trace_identities(Rng& rng, int cases, double tol) {
  Tally t("trace_identities");
  auto coordinate = [](int n, int kind) {
    return VectorFunction{n, n, [kind](std::span<const cplx> w, std::span<cplx> out) {
                            for (std::size_t j = 0; j < w.size(); ++j) {
                              switch (kind) {
                                case 0: out[j] = std::conj(w[j]); break;
                                case 1: out[j] = 1.0 / w[j]; break;
                                case 2: out[j] = w[j]; break;
                                default: out[j] = 1.0 / std::conj(w[j]); break;
                              }
                            }
                          }};
  };
  long unscaled_misses = 0;
  long unscaled_cases = 0;
  for (int c = 0; c < cases; ++c) {
    const int n = uniform_int(rng, 1, 3);
    const LaurentPoly f = random_decomposable(rng, n, n);
    const Decomposition d = decompose(f);
    const VectorFunction fn = make_function(f);
    const double lambda = uniform(rng, 0.5, 1.5);
    const double l2 = lambda * lambda;
    const cplx tr_eta = trace(numeric(d.residues));
    const cplx tr_jac = trace(numeric(d.jacobian));
    const cplx zbar_f = inner_product_numeric(coordinate(n, 0), fn, lambda);
    const cplx inv_z_f = l2 * inner_product_numeric(coordinate(n, 1), fn, lambda);
    const cplx z_f = inner_product_numeric(coordinate(n, 2), fn, lambda);
    const cplx inv_zbar_f = l2 * inner_product_numeric(coordinate(n, 3), fn, lambda);
    const double err = std::max({rel_err(zbar_f, tr_eta), rel_err(inv_z_f, tr_eta), rel_err(z_f, l2 * tr_jac),
                                 rel_err(inv_zbar_f, l2 * tr_jac)});
    if (std::abs(tr_jac) > 0 && std::abs(lambda - 1) > 1e-3) {
      ++unscaled_cases;
      if (rel_err(z_f, tr_jac) > tol) ++unscaled_misses;
    }
    t.check(err <= tol, err, "trace identity fails\n" + serialize(f));
  }
  t.note(fmt::format("<z, f> carries lambda^2 Tr(D), not Tr(D): the unscaled form misses in {} of {} cases",
                     unscaled_misses, unscaled_cases));
  return t.done();
}

namespace {

struct Quadratic1d {
  std::string text;
  cplx c;
  cplx a;
};

std::vector<Quadratic1d> family_1d() {
  const std::pair<std::string, cplx> cs[] = {{"0.5", 0.5}, {"1", 1.0}, {"2", 2.0}, {"i", cplx(0, 1)}};
  const std::pair<std::string, cplx> as[] = {{"", 0.0}, {" + 0.25*w1^2", 0.25}, {" - 0.25i*w1^2", cplx(0, -0.25)}};
  std::vector<Quadratic1d> out;
  for (const auto& [ct, c] : cs)
    for (const auto& [at, a] : as) out.push_back({ct + "*w1" + at, c, a});
  return out;
}

const char* const kFunctions1d[] = {"1/u", "2/u + 3*u", "(1+i)/u - u + 0.5*u^2"};
constexpr double kLambda1d = 0.25;

const char* const kMorphs2d[] = {
    "2*w1, 0.5*w2",
    "w1*(1 + w2), w2",
    "w1 + w1*w2/2, i*w2 - w2*w1",
    "0.5*w1*(1 + w1/2 + w2/2), 2*w2*(1 - w1*w2)",
    "(1+i)*w1 + w1^2, w2 + w1*w2/4",
    "w1*(1 + 0.25i*w2^2), -w2*(1 + w1^2)",
};
const char* const kFunctions2d[] = {"1/u1 + 2/u2 + u1 - u2", "3*u1 + i/u2 + u1*u2, 1/u1 - 2*u2"};
constexpr double kLambda2d = 0.25;

void check_transform(Tally& t, const std::string& psi, int n, const std::string& morph, double lambda, double tol) {
  const Expr p = parse(psi, n, 'u');
  const Morph g = morph_validate(parse(morph, n), lambda);
  const TransformReport r = verify_transform(p, g, lambda, tol);
  t.check(r.passed, std::max(r.residue_residual, r.jacobian_residual),
          fmt::format("psi = {}, g = {}: residuals {:.3g} / {:.3g}", psi, morph, r.residue_residual, r.jacobian_residual));
}

}  // namespace

PropertyResult morph_family_1d(double tol) {
  Tally t("morph_family_1d");
  for (const auto& g : family_1d())
    for (const char* psi : kFunctions1d) check_transform(t, psi, 1, g.text, kLambda1d, tol);
  return t.done();
}

PropertyResult morph_family_2d(double tol) {
  Tally t("morph_family_2d");
  for (const char* g : kMorphs2d)
    for (const char* psi : kFunctions2d) check_transform(t, psi, 2, g, kLambda2d, tol);
  return t.done();
}

PropertyResult morph_full_pullback_erratum(double tol) {
  Tally t("erratum_full_pullback_jacobian");
  for (const auto& g : family_1d()) {
    for (const char* psi : kFunctions1d) {
      const Expr p = parse(psi, 1, 'u');
      const Morph m = morph_validate(parse(g.text, 1), kLambda1d);
      const TransformReport r = verify_transform(p, m, kLambda1d, tol);
      const cplx eta = r.residues_predicted(0, 0) * g.c;  // eta'
      const cplx expected = eta * g.a * g.a / (g.c * g.c * g.c);
      const cplx deviation = r.jacobian_full(0, 0) - r.jacobian_predicted(0, 0);
      const double err = std::abs(deviation - expected);
      t.check(err <= tol, err, fmt::format("psi = {}, g = {}", psi, g.text));
    }
  }
  t.note("with a pole, D' J holds for the pulled-back analytic part only; the full pullback adds eta' a^2 / c^3");
  return t.done();
}

PropertyResult morph_composition(double tol) {
  Tally t("morph_composition");
  const char* const morphs[] = {"2*w1 + 0.25*w1^2", "i*w1", "w1 - 0.25i*w1^2", "0.5*w1"};
  for (const char* outer_text : morphs) {
    for (const char* inner_text : morphs) {
      const Morph outer = morph_validate(parse(outer_text, 1), kLambda1d);
      const Morph inner = morph_validate(parse(inner_text, 1), kLambda1d);
      const Morph both = compose(outer, inner, kLambda1d);
      const Eigen::MatrixXcd chain = outer.jacobian * inner.jacobian;
      const Expr psi = parse("2/u + 3*u", 1, 'u');
      const TransformReport r = verify_transform(psi, both, kLambda1d, tol);
      const Eigen::MatrixXcd eta_primed = r.residues_predicted * both.jacobian;
      const Eigen::MatrixXcd eta_seq = eta_primed * outer.inverse * inner.inverse;
      const double err = std::max(max_rel_err(both.jacobian, chain), max_rel_err(r.residues_direct, eta_seq));
      t.check(err <= tol, err, fmt::format("outer = {}, inner = {}", outer_text, inner_text));
    }
  }
  return t.done();
}

PropertyResult morph_identity(double tol) {
  Tally t("morph_identity");
  for (const char* psi : kFunctions1d) check_transform(t, psi, 1, "w1", kLambda1d, tol);
  for (const char* psi : kFunctions2d) check_transform(t, psi, 2, "w1, w2", kLambda2d, tol);
  return t.done();
}

}  // namespace props

bool SuiteReport::passed() const {
  return !properties.empty() &&
         std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"measure", "prop1", "lemma", "theorem", "morph"};
  return names;
}

bool is_suite_name(std::string_view name) {
  return name == "all" || std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end();
}

SuiteReport run_suite(std::string_view name, std::uint64_t seed) {
  const auto it = std::find(suite_names().begin(), suite_names().end(), name);
  if (it == suite_names().end()) throw std::invalid_argument("unknown suite: " + std::string(name));
  std::seed_seq seq{seed, static_cast<std::uint64_t>(it - suite_names().begin())};
  Rng rng(seq);
  SuiteReport r{std::string(name), {}};
  auto& p = r.properties;
  using namespace props;
  if (name == "measure") {
    p.push_back(full_disc_measure());
    p.push_back(partition_additivity(rng, 1000, 1e-12));
    p.push_back(product_multiplicativity(rng, 100, 1e-12));
    p.push_back(measure_monotonicity(rng, 200));
    p.push_back(measure_scale_invariance(rng, 200));
    p.push_back(arc_integral_agreement(rng, 200, 1e-12));
    p.push_back(semiring_closure(rng, 200, 1e-12));
  } else if (name == "prop1") {
    p.push_back(tail_shapes_exact(rng, 100));
    p.push_back(tail_shapes_quadrature(rng, 30, 1e-9));
    p.push_back(tail_self_pairing_erratum(rng, 50, 1e-9));
  } else if (name == "lemma") {
    p.push_back(component_expectations(rng, 100));
    p.push_back(component_orthogonality(rng, 100));
    p.push_back(component_norms(rng, 100));
    p.push_back(expectation_scale_independence(rng, 30, 1e-9));
  } else if (name == "theorem") {
    p.push_back(variance_exact_subclass(rng, 40, 1e-9));
    p.push_back(parseval_consistency(rng, 100));
    p.push_back(variance_tail_gap_erratum(rng, 100));
    p.push_back(uncertainty_bound_sweep(rng, 20, 17, 1e-9));
    p.push_back(oracle_quadrature_agreement(rng, 40, 1e-9));
    p.push_back(dft_coefficients_exact(rng, 40, 1e-12));
    p.push_back(optimal_scale_reproduction(rng, 5, 1e-3));
    p.push_back(trace_identities(rng, 20, 1e-9));
  } else {
    p.push_back(morph_family_1d(1e-8));
    p.push_back(morph_family_2d(1e-8));
    p.push_back(morph_full_pullback_erratum(1e-8));
    p.push_back(morph_composition(1e-8));
    p.push_back(morph_identity(1e-8));
  }
  return r;
}

std::string render(const SuiteReport& report) {
  std::string out;
  for (const auto& p : report.properties) {
    out += fmt::format("[{}] {:<34} cases={:<5} failures={:<3} worst={:<10.3g} {}\n", report.name, p.name, p.cases,
                       p.failures, p.worst, p.passed() ? "pass" : "FAIL");
    if (!p.detail.empty()) {
      std::string detail = p.detail;
      std::replace(detail.begin(), detail.end(), '\n', ' ');
      out += fmt::format("    {}\n", detail);
    }
  }
  out += fmt::format("[{}] {}\n", report.name, report.passed() ? "pass" : "FAIL");
  return out;
}

}  // namespace lens
