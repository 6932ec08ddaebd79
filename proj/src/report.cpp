#include "lens/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace lens {

namespace {

double snap(double x) { return std::abs(x) < kSnapToZero ? 0.0 : x; }

template <class Fmt>
std::string join_vector(const std::vector<cplx>& v, Fmt fmt_one) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_one(v[i]);
  }
  return out + "]";
}

template <class Fmt>
std::string join_matrix(const Eigen::MatrixXcd& m, Fmt fmt_one) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ", ";
    out += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += fmt_one(m(r, c));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", snap(x)); }

std::string format_complex_json(cplx z) {
  return "[" + format_number(z.real()) + ", " + format_number(z.imag()) + "]";
}

std::string format_complex_text(cplx z) {
  return "(" + format_number(z.real()) + ", " + format_number(z.imag()) + ")";
}

double standard_error_bound(const SpectralSummary& s) { return std::sqrt(s.residues.squaredNorm()) / s.lambda; }

std::string summary_json(const SpectralSummary& s) {
  std::string out = "{\n";
  out += fmt::format("  \"lambda\": {},\n", format_number(s.lambda));
  out += fmt::format("  \"core\": {},\n", join_vector(s.core, format_complex_json));
  out += fmt::format("  \"eta\": {},\n", join_matrix(s.residues, format_complex_json));
  out += fmt::format("  \"jacobian\": {},\n", join_matrix(s.jacobian, format_complex_json));
  out += fmt::format("  \"variance\": {},\n", format_number(s.variance));
  out += fmt::format("  \"tail_energy\": {},\n", format_number(s.tail_energy));
  out += fmt::format("  \"est_error\": {},\n", format_number(s.est_error));
  out += fmt::format("  \"grid_n\": {}\n", s.grid_points);
  return out + "}\n";
}

std::string summary_text(const SpectralSummary& s) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{:<16}{}\n", key, value); };
  line("lambda", format_number(s.lambda));
  line("grid_n", std::to_string(s.grid_points));
  line("core", join_vector(s.core, format_complex_text));
  line("eta", join_matrix(s.residues, format_complex_text));
  line("jacobian", join_matrix(s.jacobian, format_complex_text));
  line("variance", format_number(s.variance));
  line("variance_model", format_number(s.variance_model()));
  line("tail_energy", format_number(s.tail_energy));
  line("stderr_bound", format_number(standard_error_bound(s)));
  line("est_error", format_number(s.est_error));
  return out;
}

std::string sweep_csv(const LensSweep& sweep) {
  std::string out = "lambda,variance,variance_model,bound_gap,est_error\n";
  for (const auto& p : sweep.points) {
    out += fmt::format("{},{},{},{},{}\n", format_number(p.lambda), format_number(p.variance),
                       format_number(p.variance_model), format_number(p.bound_gap), format_number(p.est_error));
  }
  out += "# lambda_star_closed=";
  out += sweep.closed.degenerate() ? to_string(sweep.closed.degeneracy) : format_number(sweep.closed.value);
  out += "\n# lambda_star_empirical=";
  out += sweep.empirical ? format_number(*sweep.empirical) : std::string("none");
  return out + "\n";
}

std::string transform_text(const TransformReport& r, double tol) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{:<20}{}\n", key, value); };
  line("eta_direct", join_matrix(r.residues_direct, format_complex_text));
  line("eta_predicted", join_matrix(r.residues_predicted, format_complex_text));
  line("eta_residual", format_number(r.residue_residual));
  line("jacobian_direct", join_matrix(r.jacobian_direct, format_complex_text));
  line("jacobian_predicted", join_matrix(r.jacobian_predicted, format_complex_text));
  line("jacobian_residual", format_number(r.jacobian_residual));
  line("jacobian_full", join_matrix(r.jacobian_full, format_complex_text));
  line("full_deviation", format_number(r.jacobian_full_deviation));
  line("tolerance", format_number(tol));
  line("result", r.passed ? "pass" : "FAIL");
  return out;
}

}  // namespace lens
