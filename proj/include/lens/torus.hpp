#ifndef LENS_TORUS_HPP
#define LENS_TORUS_HPP

// Uniform sampling of the distinguished torus |w_1| = ... = |w_n| = lambda.
// Integrals against the exterior probability are torus means, so the
// trapezoidal rule gives Laurent coefficients as rescaled DFT coefficients,
// exact for Laurent polynomials narrower than the grid.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lens/expr.hpp"
#include "lens/laurent.hpp"

namespace lens {

using cplx = std::complex<double>;

/// Black-box f: C^n -> C^k. `eval` must be re-entrant.
struct VectorFunction {
  int dims = 1;
  int codims = 1;
  std::function<void(std::span<const cplx>, std::span<cplx>)> eval;
};

VectorFunction make_function(const Expr& e, double pole_epsilon = kDefaultPoleEpsilon);
VectorFunction make_function(const LaurentPoly& f);

struct QuadratureOptions {
  double tol = 1e-10;
  int start_points = 16;
  /// Cap on points per dimension.
  int max_points = 4096;
  /// Cap on total grid size N^n.
  long long max_grid = 1LL << 24;
  int max_dims = 4;
  /// |f| above this on the torus counts as a pole.
  double blowup = 1e12;
};

/// Reads LENS_MAX_GRID (points per dimension) from the environment, if set.
QuadratureOptions options_from_environment(QuadratureOptions base = {});

/// f sampled at w_j = lambda exp(2 pi i m_j / N). Values are stored
/// component-major, grid points in row-major order (m_1 slowest).
class TorusGrid {
 public:
  TorusGrid(int dims, int codims, double lambda, int points, std::vector<cplx> values);

  int dims() const noexcept { return dims_; }
  int codims() const noexcept { return codims_; }
  double lambda() const noexcept { return lambda_; }
  int points() const noexcept { return points_; }
  std::size_t size() const noexcept { return size_; }
  /// Value of component `alpha` at flat grid index `flat`.
  cplx value(int alpha, std::size_t flat) const { return values_[static_cast<std::size_t>(alpha) * size_ + flat]; }
  std::span<const cplx> component(int alpha) const {
    return {values_.data() + static_cast<std::size_t>(alpha) * size_, size_};
  }

 private:
  int dims_;
  int codims_;
  double lambda_;
  int points_;
  std::size_t size_;
  std::vector<cplx> values_;
};

/// Throws PoleOnTorus (non-finite value, |f| above the blow-up threshold or a
/// near-zero divisor) and GridTooLarge.
TorusGrid sample_torus(const VectorFunction& f, double lambda, int points, const QuadratureOptions& opts = {});

/// c_a = lambda^{-|a|} N^{-n} sum_m f(w_m) exp(-2 pi i a.m / N). Throws
/// AliasingRisk unless every |a_j| <= N/2 - 1.
std::vector<cplx> laurent_coefficient(const TorusGrid& grid, std::span<const int> exponent);
std::vector<cplx> laurent_coefficient(const TorusGrid& grid, const MultiIndex& a);

struct SpectralSummary {
  std::vector<cplx> core;     // f_0, length k
  Eigen::MatrixXcd residues;  // eta, k x n
  Eigen::MatrixXcd jacobian;  // D, k x n
  double variance = 0;        // <f,f> - |E f|^2
  double tail_energy = 0;     // variance - variance_paper
  double lambda = 0;
  int grid_points = 0;        // N per dimension of the accepted grid
  double est_error = 0;       // change between the last two refinements
  /// Energy in coefficients with a pole order above one or a pole mixed
  /// with other variables; zero for functions of the decomposable class.
  double out_of_class_energy = 0;

  double variance_model() const;
};

/// Summary from a single grid, no refinement.
SpectralSummary summarize_grid(const TorusGrid& grid);

/// Doubles N from opts.start_points until two successive summaries agree
/// within opts.tol (relative to max(1, |value|)). Throws NonConvergent when
/// the grid caps are reached first.
SpectralSummary spectral_summary(const VectorFunction& f, double lambda, const QuadratureOptions& opts = {});

/// Throws NotInClass when the summary carries non-negligible energy outside
/// the core / simple-pole / analytic class.
void require_in_class(const SpectralSummary& s, double relative_tol = 1e-8);

/// <f, g> = torus mean of sum_alpha conj(f^alpha) g^alpha, adaptively refined.
cplx inner_product_numeric(const VectorFunction& f, const VectorFunction& g, double lambda,
                           const QuadratureOptions& opts = {});

/// Numeric counterpart of exterior_integral: torus mean of F(w) prod_j
/// w_j^{s_j + 1}, F = f or conj(f).
std::vector<cplx> exterior_integral_numeric(const VectorFunction& f, std::span<const int> s, bool conjugate,
                                            double lambda, const QuadratureOptions& opts = {});

}  // namespace lens

#endif  // LENS_TORUS_HPP
