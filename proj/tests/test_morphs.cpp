#include <doctest.h>

#include "brute.hpp"
#include "lens/errors.hpp"
#include "lens/morphs.hpp"

using namespace lens;

namespace {

Morph validate(const std::string& g, int n, double lambda = 0.25) { return morph_validate(parse(g, n), lambda); }

TransformReport check(const std::string& psi, const std::string& g, int n, double lambda) {
  return verify_transform(parse(psi, n, 'u'), validate(g, n, lambda), lambda, 1e-8);
}

}  // namespace

TEST_CASE("morph_validate examples") {
  const Morph m = validate("2*w", 1);
  CHECK(std::abs(m.jacobian(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(m.inverse(0, 0) - 0.5) < 1e-12);
  CHECK_THROWS_AS(validate("w^2", 1), SingularJacobian);
  CHECK_THROWS_AS(validate("w - w", 1), SingularJacobian);
  CHECK_THROWS_AS(validate("w + 1", 1), NotFixingOrigin);
  CHECK_THROWS_AS(validate("w - 4*w^2", 1), VanishesOnTorus);
  CHECK_THROWS_AS(validate("w1", 2), DimensionMismatch);
  CHECK_THROWS_AS(validate("w1*(1 + 3*w2), w2", 2), NotDiagonallyDominant);
  CHECK_THROWS_AS(validate("w1*(1 + 2*w2), w2", 2), NotDiagonallyDominant);
  CHECK(validate("w1*(1 + w2), w2", 2).dominance == doctest::Approx(0.25));
}

TEST_CASE("pullback examples") {
  const Morph g = validate("2*w", 1, 0.5);
  CHECK(print(pullback(parse("1/u", 1, 'u'), g)) == "(1 / (2 * w1))");
  CHECK(print(pullback(parse("u", 1, 'u'), g)) == "(2 * w1)");
  CHECK(print(pullback(parse("1/u", 1, 'u'), validate("w + w^2/4", 1, 0.5))) == "(1 / (w1 + ((w1^2) / 4)))");
  CHECK_THROWS_AS(pullback(parse("u1 + u2", 2, 'u'), g), DimensionMismatch);
}

TEST_CASE("verify_transform examples") {
  const TransformReport a = check("1/u", "2*w", 1, 0.5);
  CHECK(std::abs(a.residues_direct(0, 0) - 0.5) < 1e-10);
  CHECK(a.residue_residual <= 1e-10);

  const TransformReport b = check("1/u", "w + w^2/4", 1, 0.5);
  CHECK(std::abs(b.residues_direct(0, 0) - 1.0) < 1e-8);
  CHECK(b.residue_residual <= 1e-8);

  const TransformReport c = check("u", "2*w", 1, 0.5);
  CHECK(std::abs(c.jacobian_direct(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(c.jacobian_predicted(0, 0) - 2.0) < 1e-12);
  CHECK(c.passed);
}

TEST_CASE("full pullback Jacobian picks up the pole's linear term") {
  // 1/(w + w^2/4) = 1/w - 1/4 + w/16 - ...
  const TransformReport r = check("1/u + u", "w + w^2/4", 1, 0.5);
  CHECK(std::abs(r.jacobian_predicted(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(r.jacobian_full(0, 0) - (1.0 + 1.0 / 16)) < 1e-10);
  CHECK(r.jacobian_full_deviation == doctest::Approx(1.0 / 16).epsilon(1e-9));
  const brute::cplx ref =
      brute::coefficient([](const std::vector<brute::cplx>& w) { const auto g = w[0] + w[0] * w[0] / 4.0; return 1.0 / g + g; },
                         {1}, 0.5, 256);
  CHECK(std::abs(ref - (1.0 + 1.0 / 16)) < 1e-12);
  CHECK(r.passed);
}

TEST_CASE("two-dimensional diagonal-dominant morph") {
  const TransformReport r = check("1/u1 + 2/u2 + u1 - u2", "w1*(1 + w2), 2*w2", 2, 0.25);
  CHECK(std::abs(r.residues_direct(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(r.residues_direct(0, 1) - 1.0) < 1e-10);
  CHECK(std::abs(r.jacobian_direct(0, 1) + 2.0) < 1e-10);
  CHECK(r.passed);
}

TEST_CASE("transform with a pole off the origin in the pulled-back function") {
  CHECK_THROWS_AS(check("1/(u - 0.1)", "w", 1, 0.25), NotInClass);
}

TEST_CASE("composition multiplies Jacobians") {
  const Morph outer = validate("2*w1 + w1^2", 1);
  const Morph inner = validate("i*w1 - 0.5*w1^2", 1);
  const Morph both = compose(outer, inner, 0.25);
  CHECK(std::abs(both.jacobian(0, 0) - cplx(0, 2)) < 1e-10);
}
