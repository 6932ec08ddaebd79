#include <doctest.h>

#include <cmath>

#include "lens/errors.hpp"
#include "lens/lens_analysis.hpp"
#include "lens/random_instances.hpp"

using namespace lens;

namespace {

VectorFunction fn(const std::string& text, int dims = 1) { return make_function(parse(text, dims)); }

Eigen::MatrixXcd m1(cplx v) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = v;
  return m;
}

// argmin of a^2/l^2 + l^4 b^2 by calculus: l^6 = a^2 / (2 b^2)
double tail_minimiser(double a, double b) { return std::pow(a * a / (2 * b * b), 1.0 / 6); }

}  // namespace

TEST_CASE("variance_sweep examples") {
  const std::vector<double> grid{0.5, 1, 2};
  const LensSweep s = variance_sweep(fn("1/w + w"), grid);
  REQUIRE(s.points.size() == 3);
  CHECK(s.points[0].variance == doctest::Approx(4.25).epsilon(1e-12));
  CHECK(s.points[1].variance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.points[2].variance == doctest::Approx(4.25).epsilon(1e-12));

  const LensSweep p = variance_sweep(fn("1/w"), std::vector<double>{0.5, 1});
  for (const auto& pt : p.points) CHECK(pt.lambda * pt.lambda * pt.variance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(p.empirical.has_value());

  const LensSweep c = variance_sweep(fn("5"), grid);
  for (const auto& pt : c.points) CHECK(std::abs(pt.variance) < 1e-12);
  CHECK(c.closed.degeneracy == Degeneracy::zero_residue);

  CHECK_THROWS_AS(variance_sweep(fn("1/w"), std::vector<double>{1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(variance_sweep(fn("1/w"), std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(variance_sweep(fn("1/(w - 0.4)"), std::vector<double>{0.5, 1}), NotInClass);
}

TEST_CASE("optimal_scale examples") {
  CHECK(optimal_scale(m1(1), m1(1)).value == doctest::Approx(1.0));
  CHECK(optimal_scale(m1(1), m1(2)).value == doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-12));
  CHECK(std::abs(std::pow(0.25, 0.25) - 0.70711) < 1e-5);
  CHECK(optimal_scale(m1(1), m1(0)).degeneracy == Degeneracy::zero_jacobian);
  CHECK(optimal_scale(m1(0), m1(1)).degeneracy == Degeneracy::zero_residue);
  CHECK(optimal_scale(m1(1e-20), m1(1)).degeneracy == Degeneracy::zero_residue);
  CHECK(to_string(Degeneracy::zero_jacobian) == "Degenerate(ZeroJacobian)");
}

TEST_CASE("empirical_optimal_scale examples") {
  const auto grid = geometric_grid(0.25, 4, 33);
  CHECK(*variance_sweep(fn("1/w + w"), grid).empirical == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(*variance_sweep(fn("1/w + 2*w"), grid).empirical - 0.7071) < 1e-3);
  const LensSweep tail = variance_sweep(fn("1/w + w^2"), grid);
  CHECK(std::abs(*tail.empirical - tail_minimiser(1, 1)) < 1e-3);
  CHECK(std::abs(tail_minimiser(1, 1) - 0.8909) < 1e-4);
  CHECK(tail.closed.degeneracy == Degeneracy::zero_jacobian);
}

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(0.25, 4, 5);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 0.25);
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(g[4] == 4.0);
  CHECK_THROWS_AS(geometric_grid(1, 1, 5), std::invalid_argument);
}

TEST_CASE("detectability examples") {
  const std::vector<double> probes{0.5, 1};
  const DetectabilityReport a = detectability_check(fn("1/w"), probes, 1e-10);
  CHECK(a.is_detectable);
  CHECK(a.expectation_drift <= 1e-10);
  const DetectabilityReport b = detectability_check(fn("3 + w"), probes, 1e-10);
  CHECK(b.is_detectable);
  CHECK(std::abs(b.expectation[0] - 3.0) < 1e-12);
  CHECK_THROWS_AS(detectability_check(fn("1/(w - 0.4)"), probes, 1e-10), NotInClass);
  CHECK_THROWS_AS(detectability_check(fn("1/w"), std::vector<double>{1}, 1e-10), std::invalid_argument);
}

TEST_CASE("sweep invariants on random functions") {
  Rng rng(31);
  const auto grid = geometric_grid(0.3, 3, 9);
  for (int c = 0; c < 25; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const LensSweep s = variance_sweep(make_function(f), grid);
    CHECK(s.coefficient_drift <= 1e-9);
    for (const auto& p : s.points) {
      CHECK(p.variance >= 0);
      CHECK(p.bound_gap >= -1e-9 * std::max(1.0, s.residues.squaredNorm()));
    }
  }
}

TEST_CASE("model variance is symmetric about the optimal scale on a log axis") {
  Rng rng(4);
  for (int c = 0; c < 50; ++c) {
    Eigen::MatrixXcd eta(1, 2), jac(1, 2);
    for (Eigen::Index j = 0; j < 2; ++j) {
      eta(0, j) = random_coefficient(rng, 3).to_complex();
      jac(0, j) = random_coefficient(rng, 3).to_complex();
    }
    if (eta.squaredNorm() == 0 || jac.squaredNorm() == 0) continue;
    const double star = optimal_scale(eta, jac).value;
    const double lambda = std::exp(std::uniform_real_distribution<double>(-2, 2)(rng));
    const double mirror = star * star / lambda;
    CHECK(variance_paper(eta, jac, lambda) == doctest::Approx(variance_paper(eta, jac, mirror)).epsilon(1e-12));
  }
}
