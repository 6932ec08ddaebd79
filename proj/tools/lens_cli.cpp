#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lens/errors.hpp"
#include "lens/expr.hpp"
#include "lens/lens_analysis.hpp"
#include "lens/morphs.hpp"
#include "lens/report.hpp"
#include "lens/slices.hpp"
#include "lens/torus.hpp"
#include "lens/verification.hpp"

namespace {

enum Exit { ok = 0, usage = 1, parse_failure = 2, precondition = 3, verification_failure = 4 };

struct Config {
  double tol = 1e-10;
  int max_points = 4096;
  int max_dims = 4;

  lens::QuadratureOptions quadrature() const {
    lens::QuadratureOptions q;
    q.tol = tol;
    q.max_points = max_points;
    q.max_dims = max_dims;
    return q;
  }
};

template <class T>
bool is(const std::exception& e) {
  return dynamic_cast<const T*>(&e) != nullptr;
}

std::string error_name(const std::exception& e) {
  using namespace lens;
  if (is<UnknownVariable>(e)) return "UnknownVariable";
  if (is<ParseError>(e)) return "ParseError";
  if (is<DimensionMismatch>(e)) return "DimensionMismatch";
  if (is<AdmissibilityViolation>(e)) return "AdmissibilityViolation";
  if (is<MixedPoleTerm>(e)) return "MixedPoleTerm";
  if (is<DivisionNearZero>(e)) return "DivisionNearZero";
  if (is<NotLaurent>(e)) return "NotLaurent";
  if (is<PoleOnTorus>(e)) return "PoleOnTorus";
  if (is<GridTooLarge>(e)) return "GridTooLarge";
  if (is<AliasingRisk>(e)) return "AliasingRisk";
  if (is<NonConvergent>(e)) return "NonConvergent";
  if (is<NotInClass>(e)) return "NotInClass";
  if (is<ScaleMismatch>(e)) return "ScaleMismatch";
  if (is<InvalidInterval>(e)) return "InvalidInterval";
  if (is<NotFixingOrigin>(e)) return "NotFixingOrigin";
  if (is<SingularJacobian>(e)) return "SingularJacobian";
  if (is<VanishesOnTorus>(e)) return "VanishesOnTorus";
  if (is<NotDiagonallyDominant>(e)) return "NotDiagonallyDominant";
  return "Error";
}

lens::SpectralSummary analyze_at(const lens::Expr& e, double lambda, const Config& cfg) {
  if (e.dims() > cfg.max_dims)
    throw lens::GridTooLarge(fmt::format("dimension {} exceeds the cap of {}", e.dims(), cfg.max_dims));
  const lens::SpectralSummary s = lens::spectral_summary(lens::make_function(e), lambda, cfg.quadrature());
  lens::require_in_class(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior probability and variance analysis of meromorphic functions on poly-discs"};
  app.require_subcommand(1);

  Config cfg;
  cfg.max_points = lens::options_from_environment().max_points;
  app.add_option("--tol", cfg.tol, "Quadrature convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-grid", cfg.max_points, "Cap on grid points per dimension (env LENS_MAX_GRID)")
      ->check(CLI::Range(4, 1 << 24))
      ->capture_default_str();
  app.add_option("--max-dims", cfg.max_dims, "Cap on the number of variables")->check(CLI::Range(1, 8))->capture_default_str();

  std::string expr;
  int dims = 1;
  double lambda = 1;
  bool json = false;
  auto* analyze = app.add_subcommand("analyze", "Spectral summary of a function at one scale");
  analyze->add_option("--expr", expr, "Expression in w1..wn")->required();
  analyze->add_option("--n", dims, "Number of variables")->check(CLI::PositiveNumber);
  analyze->add_option("--lambda", lambda, "Scale")->check(CLI::PositiveNumber);
  analyze->add_flag("--json", json, "Print JSON");

  double lambda_min = 0.25, lambda_max = 4;
  int steps = 33;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Variance over a geometric grid of scales, as CSV");
  sweep->add_option("--expr", expr, "Expression in w1..wn")->required();
  sweep->add_option("--n", dims, "Number of variables")->check(CLI::PositiveNumber);
  sweep->add_option("--lambda-min", lambda_min)->check(CLI::PositiveNumber);
  sweep->add_option("--lambda-max", lambda_max)->check(CLI::PositiveNumber);
  sweep->add_option("--steps", steps)->check(CLI::Range(3, 100000));
  sweep->add_option("--out", out_path, "CSV file (stdout when omitted)");

  std::vector<std::string> intervals;
  int measure_dims = 0;
  auto* measure = app.add_subcommand("measure", "Slice or product measure");
  measure->add_option("--interval", intervals, "Angular interval lo:hi, one per dimension")->required();
  measure->add_option("--dims", measure_dims, "Number of factors")->check(CLI::PositiveNumber);
  measure->add_option("--lambda", lambda, "Radius")->check(CLI::PositiveNumber);

  std::string morph;
  double law_tol = 1e-8;
  auto* transform = app.add_subcommand("transform", "Check the residue and Jacobian transformation laws");
  transform->add_option("--expr", expr, "Function in u1..un")->required();
  transform->add_option("--morph", morph, "Comma-separated components in w1..wn")->required();
  transform->add_option("--n", dims, "Number of variables")->check(CLI::PositiveNumber);
  transform->add_option("--lambda", lambda, "Scale")->check(CLI::PositiveNumber);
  transform->add_option("--law-tol", law_tol, "Allowed residual")->check(CLI::PositiveNumber)->capture_default_str();

  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::string> suite_choices = lens::suite_names();
  suite_choices.push_back("all");
  auto* verify = app.add_subcommand("verify", "Run randomised invariant suites");
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_choices));
  verify->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (analyze->parsed()) {
      const lens::SpectralSummary s = analyze_at(lens::parse(expr, dims), lambda, cfg);
      std::cout << (json ? lens::summary_json(s) : lens::summary_text(s));
    } else if (sweep->parsed()) {
      if (!(lambda_max > lambda_min)) {
        std::cerr << "error: --lambda-max must exceed --lambda-min\n";
        return usage;
      }
      const lens::Expr e = lens::parse(expr, dims);
      if (e.dims() > cfg.max_dims) throw lens::GridTooLarge(fmt::format("dimension {} exceeds the cap", e.dims()));
      lens::AnalysisOptions opts;
      opts.quadrature = cfg.quadrature();
      const auto grid = lens::geometric_grid(lambda_min, lambda_max, steps);
      const std::string csv = lens::sweep_csv(lens::variance_sweep(lens::make_function(e), grid, opts));
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        out << csv;
        if (!out) {
          std::cerr << "error: cannot write " << out_path << "\n";
          return usage;
        }
      }
    } else if (measure->parsed()) {
      const std::size_t factors = measure_dims > 0 ? static_cast<std::size_t>(measure_dims) : intervals.size();
      if (intervals.size() != factors) {
        std::cerr << fmt::format("error: --dims {} needs {} --interval options, got {}\n", factors, factors,
                                 intervals.size());
        return usage;
      }
      std::vector<lens::SliceSet> sets;
      try {
        for (const auto& text : intervals) sets.emplace_back(lambda, std::vector{lens::parse_interval(text)});
      } catch (const lens::InvalidInterval& e) {
        std::cerr << "error: InvalidInterval: " << e.what() << "\n";
        return parse_failure;
      }
      std::cout << lens::format_number(lens::product_measure(sets)) << "\n";
    } else if (transform->parsed()) {
      const lens::Expr psi = lens::parse(expr, dims, 'u');
      const lens::Expr g = lens::parse(morph, dims, 'w');
      lens::MorphOptions mopts;
      mopts.quadrature = cfg.quadrature();
      const lens::Morph m = lens::morph_validate(g, lambda, mopts);
      const lens::TransformReport r = lens::verify_transform(psi, m, lambda, law_tol, cfg.quadrature());
      std::cout << lens::transform_text(r, law_tol);
      if (!r.passed) return verification_failure;
    } else if (verify->parsed()) {
      bool passed = true;
      for (const auto& name : suite == "all" ? lens::suite_names() : std::vector<std::string>{suite}) {
        const lens::SuiteReport report = lens::run_suite(name, seed);
        std::cout << lens::render(report);
        passed = passed && report.passed();
      }
      if (!passed) return verification_failure;
    }
  } catch (const lens::ParseError& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << "\n";
    return parse_failure;
  } catch (const lens::PreconditionError& e) {
    std::cerr << "error: " << error_name(e) << ": " << e.what() << "\n";
    return precondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return ok;
}
