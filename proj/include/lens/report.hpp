#ifndef LENS_REPORT_HPP
#define LENS_REPORT_HPP

// Text, JSON and CSV renderings used by the command-line tool. Numbers are
// written with 17 significant digits; values below kSnapToZero print as 0 so
// rounding noise does not leak into golden files.

#include <string>

#include "lens/lens_analysis.hpp"
#include "lens/morphs.hpp"
#include "lens/torus.hpp"

namespace lens {

inline constexpr double kSnapToZero = 1e-14;

std::string format_number(double x);
std::string format_complex_json(cplx z);  // [re, im]
std::string format_complex_text(cplx z);  // (re, im)

/// sqrt(Tr(eta* eta)) / lambda, the lower bound on the standard error.
double standard_error_bound(const SpectralSummary& s);

/// Object with fields lambda, core, eta, jacobian, variance, tail_energy,
/// est_error, grid_n. eta and jacobian are arrays of k rows of n [re, im].
std::string summary_json(const SpectralSummary& s);
std::string summary_text(const SpectralSummary& s);

/// Header lambda,variance,variance_model,bound_gap,est_error, one row per
/// point, then "# lambda_star_closed=..." and "# lambda_star_empirical=...".
std::string sweep_csv(const LensSweep& sweep);

std::string transform_text(const TransformReport& r, double tol);

}  // namespace lens

#endif  // LENS_REPORT_HPP
