#ifndef LENS_MORPHS_HPP
#define LENS_MORPHS_HPP

// Holomorphic coordinate changes u = g(w) with g(0) = 0 on a single chart,
// and numerical checks of how the residue matrix (contravariant) and the
// Jacobian matrix (covariant) of a function transform under them.

#include <string>

#include <Eigen/Dense>

#include "lens/expr.hpp"
#include "lens/torus.hpp"

namespace lens {

struct MorphOptions {
  /// Total number of torus samples used for the non-vanishing and dominance
  /// checks; the per-dimension count is min(4096, budget^{1/n}).
  long long sample_budget = 1LL << 22;
  double origin_tol = 1e-12;
  double det_tol = 1e-9;
  double zero_tol = 1e-9;
  QuadratureOptions quadrature;
};

/// A validated coordinate change. For n >= 2 every component has the form
/// g_j(w) = c_j w_j (1 + h_j(w)) with sup |h_j| < 1/2 on the poly-disc,
/// which makes J diagonal.
struct Morph {
  Expr map;                   // n components in w_1..w_n
  Eigen::MatrixXcd jacobian;  // J(gamma, beta) = d g_gamma / d w_beta at 0
  Eigen::MatrixXcd inverse;   // H = J^-1
  double lambda = 0;          // scale the morph was validated at
  /// max_j sup |h_j| for n >= 2, 0 for n = 1.
  double dominance = 0;

  int dims() const { return map.dims(); }
};

/// Throws NotFixingOrigin, SingularJacobian, VanishesOnTorus and, for
/// n >= 2, NotDiagonallyDominant.
Morph morph_validate(const Expr& g, double lambda, const MorphOptions& opts = {});

/// psi'(g(w)): every u_j of psi' replaced by g_j(w).
Expr pullback(const Expr& psi, const Morph& g);

/// The morph w -> outer(inner(w)).
Morph compose(const Morph& outer, const Morph& inner, double lambda, const MorphOptions& opts = {});

struct TransformReport {
  Eigen::MatrixXcd residues_direct;     // eta of psi' o g
  Eigen::MatrixXcd residues_predicted;  // eta' H
  /// Jacobian of (analytic part of psi') o g.
  Eigen::MatrixXcd jacobian_direct;
  Eigen::MatrixXcd jacobian_predicted;  // D' J
  /// Jacobian of the full pullback psi' o g. Differs from the prediction by
  /// the linear terms the pulled-back principal part picks up when g is
  /// nonlinear (eta' a^2 / c^3 for g = c w + a w^2, n = 1).
  Eigen::MatrixXcd jacobian_full;
  double residue_residual = 0;
  double jacobian_residual = 0;
  double jacobian_full_deviation = 0;
  bool passed = false;
};

TransformReport verify_transform(const Expr& psi, const Morph& g, double lambda, double tol,
                                 const QuadratureOptions& opts = {});

}  // namespace lens

#endif  // LENS_MORPHS_HPP
