#ifndef LENS_LENS_ANALYSIS_HPP
#define LENS_LENS_ANALYSIS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lens/torus.hpp"

namespace lens {

enum class Degeneracy {
  none,
  zero_jacobian,  // Tr(D* D) = 0: variance decreases monotonically in lambda
  zero_residue,   // Tr(eta* eta) = 0: variance increases monotonically, optimum at 0
};

std::string to_string(Degeneracy d);

/// Closed-form optimal scale [Tr(eta* eta) / Tr(D* D)]^{1/4}, or the reason
/// it does not exist. A trace at or below relative_zero times the sum of both
/// traces counts as zero, so quadrature noise does not hide a degeneracy.
struct OptimalScale {
  double value = 0;
  Degeneracy degeneracy = Degeneracy::none;

  bool degenerate() const { return degeneracy != Degeneracy::none; }
};

OptimalScale optimal_scale(const Eigen::MatrixXcd& residues, const Eigen::MatrixXcd& jacobian,
                           double relative_zero = 1e-24);

struct SweepPoint {
  double lambda = 0;
  double variance = 0;
  double variance_model = 0;
  double bound_gap = 0;  // lambda^2 V - Tr(eta* eta)
  double est_error = 0;
};

struct LensSweep {
  std::vector<SweepPoint> points;
  Eigen::MatrixXcd residues;  // taken at the smallest lambda
  Eigen::MatrixXcd jacobian;
  /// Largest change of eta or D across the sweep.
  double coefficient_drift = 0;
  OptimalScale closed;
  std::optional<double> empirical;  // set for sweeps of three or more points
};

struct AnalysisOptions {
  QuadratureOptions quadrature;
  /// Allowed change of eta and D between scales.
  double drift_tol = 1e-9;
  /// Relative energy allowed outside the decomposable class.
  double class_tol = 1e-8;
  /// Relative width of the final golden-section bracket.
  double scale_rel_tol = 1e-5;
};

/// lambda_min * (lambda_max / lambda_min)^{i / (steps - 1)}.
std::vector<double> geometric_grid(double lambda_min, double lambda_max, int steps);

/// Spectral summary at every scale. Throws NotInClass when the function has
/// energy outside the decomposable class or when eta / D drift across scales.
LensSweep variance_sweep(const VectorFunction& f, std::span<const double> lambdas, const AnalysisOptions& opts = {});

/// Golden-section search on log(lambda) for the minimiser of the measured
/// variance, bracketed by the sweep neighbours of the best sweep point.
double empirical_optimal_scale(const VectorFunction& f, const LensSweep& sweep, const AnalysisOptions& opts = {});

struct DetectabilityReport {
  bool is_detectable = false;
  double expectation_drift = 0;  // max pairwise |E_lambda - E_lambda'|
  double max_variance = 0;
  std::vector<cplx> expectation;  // at the first probe
};

DetectabilityReport detectability_check(const VectorFunction& f, std::span<const double> probes, double tol,
                                        const AnalysisOptions& opts = {});

}  // namespace lens

#endif  // LENS_LENS_ANALYSIS_HPP
