#include "lens/lens_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lens/errors.hpp"

namespace lens {

std::string to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::none:
      return "None";
    case Degeneracy::zero_jacobian:
      return "Degenerate(ZeroJacobian)";
    case Degeneracy::zero_residue:
      return "Degenerate(ZeroResidue)";
  }
  return "?";
}

OptimalScale optimal_scale(const Eigen::MatrixXcd& residues, const Eigen::MatrixXcd& jacobian, double relative_zero) {
  const double tr_eta = residues.squaredNorm();
  const double tr_jac = jacobian.squaredNorm();
  const double zero = relative_zero * (tr_eta + tr_jac);
  if (tr_eta <= zero) return {0, Degeneracy::zero_residue};
  if (tr_jac <= zero) return {0, Degeneracy::zero_jacobian};
  return {std::pow(tr_eta / tr_jac, 0.25), Degeneracy::none};
}

std::vector<double> geometric_grid(double lambda_min, double lambda_max, int steps) {
  if (!(lambda_min > 0) || !(lambda_max > lambda_min) || steps < 2)
    throw std::invalid_argument("geometric_grid: need 0 < min < max and at least two steps");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  const double ratio = lambda_max / lambda_min;
  for (int i = 0; i < steps; ++i)
    grid[static_cast<std::size_t>(i)] = lambda_min * std::pow(ratio, static_cast<double>(i) / (steps - 1));
  grid.back() = lambda_max;
  return grid;
}

namespace {

double max_entry_delta(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  double d = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a(i) - b(i)) / std::max(1.0, std::abs(b(i))));
  return d;
}

}  // namespace

LensSweep variance_sweep(const VectorFunction& f, std::span<const double> lambdas, const AnalysisOptions& opts) {
  if (lambdas.empty()) throw std::invalid_argument("variance_sweep: empty scale grid");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0) || (i > 0 && !(lambdas[i] > lambdas[i - 1])))
      throw std::invalid_argument("variance_sweep: scales must be positive and increasing");
  }
  LensSweep sweep;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const SpectralSummary s = spectral_summary(f, lambdas[i], opts.quadrature);
    require_in_class(s, opts.class_tol);
    if (i == 0) {
      sweep.residues = s.residues;
      sweep.jacobian = s.jacobian;
    } else {
      sweep.coefficient_drift = std::max({sweep.coefficient_drift, max_entry_delta(s.residues, sweep.residues),
                                          max_entry_delta(s.jacobian, sweep.jacobian)});
    }
    const double l2 = s.lambda * s.lambda;
    sweep.points.push_back({s.lambda, s.variance, s.variance_model(),
                            l2 * s.variance - s.residues.squaredNorm(), s.est_error});
  }
  if (sweep.coefficient_drift > opts.drift_tol) {
    throw NotInClass("residue or Jacobian matrix changes across scales (drift " +
                     std::to_string(sweep.coefficient_drift) + ")");
  }
  sweep.closed = optimal_scale(sweep.residues, sweep.jacobian);
  if (sweep.points.size() >= 3) sweep.empirical = empirical_optimal_scale(f, sweep, opts);
  return sweep;
}

double empirical_optimal_scale(const VectorFunction& f, const LensSweep& sweep, const AnalysisOptions& opts) {
  const auto& pts = sweep.points;
  if (pts.size() < 3) throw std::invalid_argument("empirical_optimal_scale: need at least three sweep points");
  const auto best = static_cast<std::size_t>(
      std::min_element(pts.begin(), pts.end(),
                       [](const SweepPoint& a, const SweepPoint& b) { return a.variance < b.variance; }) -
      pts.begin());
  double a = std::log(pts[best == 0 ? 0 : best - 1].lambda);
  double b = std::log(pts[std::min(best + 1, pts.size() - 1)].lambda);
  auto variance_at = [&](double t) { return spectral_summary(f, std::exp(t), opts.quadrature).variance; };

  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double vc = variance_at(c);
  double vd = variance_at(d);
  while (b - a > opts.scale_rel_tol) {
    if (vc <= vd) {
      b = d;
      d = c;
      vd = vc;
      c = b - inv_phi * (b - a);
      vc = variance_at(c);
    } else {
      a = c;
      c = d;
      vc = vd;
      d = a + inv_phi * (b - a);
      vd = variance_at(d);
    }
  }
  return std::exp((a + b) / 2);
}

DetectabilityReport detectability_check(const VectorFunction& f, std::span<const double> probes, double tol,
                                        const AnalysisOptions& opts) {
  if (probes.size() < 2) throw std::invalid_argument("detectability_check: at least two probe scales required");
  DetectabilityReport report;
  std::vector<std::vector<cplx>> expectations;
  bool finite = true;
  for (double lambda : probes) {
    const SpectralSummary s = spectral_summary(f, lambda, opts.quadrature);
    require_in_class(s, opts.class_tol);
    expectations.push_back(s.core);
    report.max_variance = std::max(report.max_variance, s.variance);
    finite = finite && std::isfinite(s.variance);
  }
  for (std::size_t i = 0; i < expectations.size(); ++i)
    for (std::size_t j = i + 1; j < expectations.size(); ++j)
      for (std::size_t a = 0; a < expectations[i].size(); ++a)
        report.expectation_drift = std::max(report.expectation_drift, std::abs(expectations[i][a] - expectations[j][a]));
  report.expectation = expectations.front();
  report.is_detectable = finite && report.expectation_drift <= tol;
  return report;
}

}  // namespace lens
