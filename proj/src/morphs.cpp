#include "lens/morphs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lens/errors.hpp"

namespace lens {

namespace {

int samples_per_dim(int dims, long long budget) {
  const double n = std::floor(std::pow(static_cast<double>(budget), 1.0 / dims) + 1e-9);
  return static_cast<int>(std::clamp(n, 8.0, 4096.0));
}

/// Minimum over the torus of min_j |values_j| and maximum of max_j |values_j|.
struct TorusExtent {
  double min_modulus = INFINITY;
  double max_modulus = 0;
};

TorusExtent torus_extent(const Evaluator& ev, double lambda, int points) {
  const int n = ev.dims();
  std::vector<cplx> w(static_cast<std::size_t>(points));
  for (int m = 0; m < points; ++m) w[static_cast<std::size_t>(m)] = std::polar(lambda, 2 * std::numbers::pi * m / points);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<cplx> point(static_cast<std::size_t>(n));
  std::vector<cplx> out(static_cast<std::size_t>(ev.codims()));
  TorusExtent ext;
  for (;;) {
    for (int j = 0; j < n; ++j) point[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    ev.eval_into(point, out);
    for (const auto& v : out) {
      ext.min_modulus = std::min(ext.min_modulus, std::abs(v));
      ext.max_modulus = std::max(ext.max_modulus, std::abs(v));
    }
    int j = n - 1;
    for (; j >= 0; --j) {
      if (++idx[static_cast<std::size_t>(j)] < points) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j < 0) break;
  }
  return ext;
}

/// sup over the poly-disc of |h_j| where g_j = c_j w_j (1 + h_j); the
/// maximum principle puts it on the distinguished torus.
double dominance_bound(const Expr& g, double lambda, int points) {
  LaurentPoly poly(g.dims(), g.codims());
  try {
    poly = to_laurent(g);
  } catch (const NotLaurent& e) {
    throw NotDiagonallyDominant(std::string("cannot certify a non-polynomial morph: ") + e.what());
  }
  const int n = g.dims();
  double sup = 0;
  for (int j = 0; j < n; ++j) {
    const ComplexRational c = poly.coefficient(MultiIndex::unit(n, j))[static_cast<std::size_t>(j)];
    if (c.is_zero()) throw NotDiagonallyDominant("component " + std::to_string(j + 1) + " has no linear term in its own variable");
    LaurentPoly::Terms h_terms;
    for (const auto& [idx, coeffs] : poly.terms()) {
      const ComplexRational& a = coeffs[static_cast<std::size_t>(j)];
      if (a.is_zero()) continue;
      if (idx[j] < 1 || idx.has_pole()) {
        throw NotDiagonallyDominant("component " + std::to_string(j + 1) + " is not divisible by its own variable");
      }
      std::vector<int> e = idx.exponents();
      e[static_cast<std::size_t>(j)] -= 1;
      h_terms.emplace(MultiIndex(e), CoefficientVector{a * c.inverse()});
    }
    const LaurentPoly h = LaurentPoly(n, 1, std::move(h_terms)) - LaurentPoly::constant(n, {ComplexRational(1)});
    if (h.is_zero()) continue;
    const Evaluator ev(parse(to_dsl(h), n));
    sup = std::max(sup, torus_extent(ev, lambda, points).max_modulus);
  }
  if (!(sup < 0.5)) {
    throw NotDiagonallyDominant("sup |h_j| = " + std::to_string(sup) + " on the poly-disc is not below 1/2");
  }
  return sup;
}

double max_abs_delta(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

Morph morph_validate(const Expr& g, double lambda, const MorphOptions& opts) {
  const int n = g.dims();
  if (g.codims() != n) {
    throw DimensionMismatch("a morph of C^" + std::to_string(n) + " needs " + std::to_string(n) + " components, got " +
                            std::to_string(g.codims()));
  }
  if (!(lambda > 0)) throw std::invalid_argument("morph_validate: lambda must be positive");

  const Evaluator ev(g);
  const std::vector<cplx> origin(static_cast<std::size_t>(n), 0.0);
  std::vector<cplx> g0;
  try {
    g0 = ev(origin);
  } catch (const DivisionNearZero&) {
    throw NotFixingOrigin("morph is not defined at the origin");
  }
  for (const auto& v : g0) {
    if (std::abs(v) > opts.origin_tol) throw NotFixingOrigin("morph does not map 0 to 0 (|g(0)| = " + std::to_string(std::abs(v)) + ")");
  }

  const SpectralSummary s = spectral_summary(make_function(g), lambda, opts.quadrature);
  Morph m{g, s.jacobian, {}, lambda, 0};
  const cplx det = m.jacobian.determinant();
  if (!(std::abs(det) > opts.det_tol)) {
    throw SingularJacobian("Jacobian at the origin is singular (|det J| = " + std::to_string(std::abs(det)) + ")");
  }
  m.inverse = m.jacobian.inverse();

  const int points = samples_per_dim(n, opts.sample_budget);
  const TorusExtent ext = torus_extent(ev, lambda, points);
  if (!(ext.min_modulus > opts.zero_tol)) {
    throw VanishesOnTorus("a morph component vanishes on the torus |w| = " + std::to_string(lambda));
  }
  if (n >= 2) m.dominance = dominance_bound(g, lambda, points);
  return m;
}

Expr pullback(const Expr& psi, const Morph& g) {
  if (psi.dims() != g.dims()) {
    throw DimensionMismatch("function has " + std::to_string(psi.dims()) + " variables, morph has " +
                            std::to_string(g.dims()));
  }
  return substitute(psi, g.map);
}

Morph compose(const Morph& outer, const Morph& inner, double lambda, const MorphOptions& opts) {
  if (outer.dims() != inner.dims()) throw DimensionMismatch("compose: morphs of different dimension");
  return morph_validate(substitute(outer.map, inner.map), lambda, opts);
}

TransformReport verify_transform(const Expr& psi, const Morph& g, double lambda, double tol,
                                 const QuadratureOptions& opts) {
  const Expr pulled = pullback(psi, g);
  const SpectralSummary primed = spectral_summary(make_function(psi), lambda, opts);
  require_in_class(primed);

  SpectralSummary direct;
  try {
    direct = spectral_summary(make_function(pulled), lambda, opts);
  } catch (const PoleOnTorus& e) {
    throw VanishesOnTorus(std::string("pulled-back function is singular on the torus: ") + e.what());
  }

  // (psi' - psi'_0 - sum_b eta'_b / u_b) o g
  auto psi_ev = std::make_shared<const Evaluator>(psi);
  auto g_ev = std::make_shared<const Evaluator>(g.map);
  const std::vector<cplx> core = primed.core;
  const Eigen::MatrixXcd eta = primed.residues;
  VectorFunction analytic_pullback{
      g.dims(), psi.codims(), [psi_ev, g_ev, core, eta](std::span<const cplx> w, std::span<cplx> out) {
        std::vector<cplx> u(w.size());
        g_ev->eval_into(w, u);
        psi_ev->eval_into(u, out);
        for (std::size_t a = 0; a < out.size(); ++a) {
          out[a] -= core[a];
          for (std::size_t b = 0; b < u.size(); ++b)
            out[a] -= eta(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / u[b];
        }
      }};
  const SpectralSummary analytic = spectral_summary(analytic_pullback, lambda, opts);

  TransformReport r;
  r.residues_direct = direct.residues;
  r.residues_predicted = primed.residues * g.inverse;
  r.jacobian_direct = analytic.jacobian;
  r.jacobian_predicted = primed.jacobian * g.jacobian;
  r.jacobian_full = direct.jacobian;
  r.residue_residual = max_abs_delta(r.residues_direct, r.residues_predicted);
  r.jacobian_residual = max_abs_delta(r.jacobian_direct, r.jacobian_predicted);
  r.jacobian_full_deviation = max_abs_delta(r.jacobian_full, r.jacobian_predicted);
  r.passed = r.residue_residual <= tol && r.jacobian_residual <= tol;
  return r;
}

}  // namespace lens
