#include <doctest.h>

#include "brute.hpp"
#include "lens/errors.hpp"
#include "lens/laurent.hpp"
#include "lens/random_instances.hpp"

using namespace lens;

namespace {

LaurentPoly mono(std::vector<int> e, ComplexRational c = ComplexRational(1)) {
  return LaurentPoly::monomial(MultiIndex(std::move(e)), c);
}

CoefficientVector ext(const LaurentPoly& f, std::vector<int> s, bool conj, Rational lambda) {
  return exterior_integral(f, s, conj, lambda);
}

}  // namespace

TEST_CASE("rationals are exact") {
  CHECK(to_rational(0.1) != Rational(1, 10));
  CHECK(to_rational(0.25) == Rational(1, 4));
  CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
  const ComplexRational z(3, 4);
  CHECK(z * z.conj() == ComplexRational(25));
  CHECK(z * z.inverse() == ComplexRational(1));
  CHECK(to_string(ComplexRational(Rational(1, 2), Rational(-3))) == "(1/2, -3)");
}

TEST_CASE("multi-index admissibility") {
  CHECK_THROWS_AS(MultiIndex({-2}), AdmissibilityViolation);
  CHECK_THROWS_AS(MultiIndex(std::vector<int>{}), std::invalid_argument);
  const MultiIndex a({-1, 0, 2});
  CHECK(a.degree() == 1);
  CHECK(a.has_pole());
  CHECK_FALSE(a.is_pure_pole());
  CHECK(MultiIndex({0, -1}).is_pure_pole());
  CHECK(MultiIndex({1, 2}).is_analytic());
}

TEST_CASE("normal form drops zero vectors") {
  const LaurentPoly f = mono({1}) - mono({1});
  CHECK(f.is_zero());
  const LaurentPoly g(1, 2, {{MultiIndex({0}), {ComplexRational(0), ComplexRational(0)}}});
  CHECK(g.is_zero());
}

TEST_CASE("lp_arith examples") {
  const LaurentPoly sum = lp_arith(mono({-1}, ComplexRational(2)), mono({-1}, ComplexRational(3)), ArithOp::add);
  CHECK(sum == mono({-1}, ComplexRational(5)));
  CHECK(lp_arith(mono({-1}), mono({2}), ArithOp::mul) == mono({1}));
  CHECK_THROWS_AS(lp_arith(mono({-1}), mono({-1}), ArithOp::mul), AdmissibilityViolation);
  CHECK(lp_arith(mono({1}), mono({1}), ArithOp::sub).is_zero());
  CHECK(lp_arith(mono({1}), LaurentPoly(1, 1), ArithOp::scale, ComplexRational(0, 2)) == mono({1}, ComplexRational(0, 2)));
  CHECK_THROWS_AS(mono({1}) + mono({1, 0}), DimensionMismatch);
}

TEST_CASE("vector-valued multiplication broadcasts a scalar factor") {
  const LaurentPoly v(1, 2, {{MultiIndex({1}), {ComplexRational(1), ComplexRational(2)}}});
  const LaurentPoly p = mono({-1}, ComplexRational(3)) * v;
  CHECK(p.codims() == 2);
  CHECK(p.coefficient(MultiIndex({0})) == CoefficientVector{ComplexRational(3), ComplexRational(6)});
}

TEST_CASE("serialization is sorted and exact") {
  const LaurentPoly f = mono({0, 1}, ComplexRational(Rational(1, 2), 0)) + mono({-1, 0}, ComplexRational(0, -3));
  CHECK(serialize(f) == "[-1, 0] -> (0, -3)\n[0, 1] -> (1/2, 0)\n");
}

TEST_CASE("exterior_integral examples") {
  CHECK(ext(mono({-1}, ComplexRational(7)), {-1}, false, Rational(1))[0].is_zero());
  CHECK(ext(mono({2}), {-1}, false, Rational(1))[0].is_zero());
  // f = w^2, s = (1), conjugate: conj(c_{s+1}) lambda^{2(s+1)} = conj(c_2) 2^4.
  CHECK(ext(mono({2}), {1}, true, Rational(2))[0] == ComplexRational(16));
  CHECK(ext(mono({2}), {2}, true, Rational(2))[0].is_zero());
  // residue and Jacobian defining integrals
  const LaurentPoly f = mono({-1}, ComplexRational(2)) + mono({1}, ComplexRational(0, 5));
  CHECK(ext(f, {0}, false, Rational(3))[0] == ComplexRational(2));
  CHECK(ext(f, {-2}, false, Rational(3))[0] == ComplexRational(0, 5));
  CHECK(ext(f, {-3}, false, Rational(3))[0].is_zero());
}

TEST_CASE("exterior_integral agrees with a brute-force contour sum") {
  const LaurentPoly f = mono({2, 1}, ComplexRational(1, 2)) + mono({-1, 0}, ComplexRational(3)) + mono({0, 0}, ComplexRational(-1));
  const double lambda = 0.8;
  auto fv = [&](const std::vector<brute::cplx>& w) { return f.evaluate(w)[0]; };
  for (std::vector<int> s : {std::vector<int>{-1, -1}, {0, -1}, {-3, -2}, {1, 0}}) {
    for (bool conj : {false, true}) {
      // (2 pi i)^-n oint F prod w^s dw = torus mean of F prod w^{s+1}
      const brute::cplx ref = brute::torus_mean(
          [&](const std::vector<brute::cplx>& w) {
            brute::cplx v = conj ? std::conj(fv(w)) : fv(w);
            for (std::size_t j = 0; j < w.size(); ++j) v *= std::pow(w[j], s[j] + 1);
            return v;
          },
          2, lambda, 32);
      const auto got = exterior_integral(f, s, conj, lambda)[0];
      CHECK(std::abs(got - ref) < 1e-12);
    }
  }
}

TEST_CASE("inner_product_exact examples") {
  CHECK(inner_product_exact(mono({-1}), mono({-1}), Rational(1, 2)) == ComplexRational(4));
  CHECK(inner_product_exact(mono({1}), mono({-1}), Rational(5, 7)).is_zero());
  CHECK(inner_product_exact(mono({1}), mono({1}), Rational(2)) == ComplexRational(4));
  // conjugate-linear in the first argument
  const ComplexRational i(0, 1);
  CHECK(inner_product_exact(i * mono({1}), mono({1}), Rational(1)) == ComplexRational(0, -1));
  CHECK_THROWS_AS(inner_product_exact(mono({1}), mono({1, 0}), Rational(1)), DimensionMismatch);
}

TEST_CASE("monomial orthogonality") {
  std::vector<MultiIndex> all;
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> e(static_cast<std::size_t>(n), -1);
    for (;;) {
      int deg = 0;
      for (int x : e) deg += x;
      if (deg <= 4) all.emplace_back(e);
      int j = n - 1;
      for (; j >= 0; --j) {
        if (++e[static_cast<std::size_t>(j)] <= 4) break;
        e[static_cast<std::size_t>(j)] = -1;
      }
      if (j < 0) break;
    }
  }
  long checked = 0;
  for (const Rational& lambda : {Rational(3, 10), Rational(1), Rational(2)}) {
    for (const auto& a : all) {
      for (const auto& b : all) {
        if (a.dims() != b.dims()) continue;
        const ComplexRational v =
            inner_product_exact(LaurentPoly::monomial(a, ComplexRational(1)), LaurentPoly::monomial(b, ComplexRational(1)), lambda);
        const ComplexRational expected = a == b ? ComplexRational(pow(lambda, 2 * a.degree())) : ComplexRational(0);
        CHECK(v == expected);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("decompose examples") {
  const LaurentPoly f = mono({0}, ComplexRational(3)) + mono({-1}, ComplexRational(2)) + mono({1}, ComplexRational(5)) + mono({2});
  const Decomposition d = decompose(f);
  CHECK(d.core == CoefficientVector{ComplexRational(3)});
  CHECK(d.residues(0, 0) == ComplexRational(2));
  CHECK(d.jacobian(0, 0) == ComplexRational(5));
  CHECK(d.analytic == mono({1}, ComplexRational(5)) + mono({2}));
  CHECK(d.tail == mono({2}));

  const LaurentPoly g = mono({-1, 0}) + mono({0, -1}) + mono({1, 1});
  const Decomposition e = decompose(g);
  CHECK(e.residues(0, 0) == ComplexRational(1));
  CHECK(e.residues(0, 1) == ComplexRational(1));
  CHECK(e.jacobian.trace_norm() == 0);
  CHECK(e.analytic == mono({1, 1}));

  CHECK_THROWS_AS(decompose(mono({-1, 1})), MixedPoleTerm);
}

TEST_CASE("variance examples") {
  const LaurentPoly f = mono({-1}, ComplexRational(2)) + mono({1}, ComplexRational(5));
  CHECK(variance_exact(f, Rational(1)) == 29);
  CHECK(variance_exact(mono({0}, ComplexRational(4, -1)), Rational(3)) == 0);
  CHECK(variance_exact(mono({2}), Rational(1, 2)) == Rational(1, 16));
  CHECK(variance_exact(mono({2}), 0.5) == doctest::Approx(0.0625).epsilon(1e-15));

  // brute-force confirmation of the derived value and of the tail gap
  auto w2 = [](const std::vector<brute::cplx>& w) { return w[0] * w[0]; };
  CHECK(std::abs(brute::variance(w2, 1, 0.5) - 0.0625) < 1e-14);
  ExactMatrix zero(1, 1);
  CHECK(variance_paper(zero, zero, Rational(1, 2)) == 0);
  CHECK(tail_energy_exact(mono({2}), Rational(1, 2)) == Rational(1, 16));
}

TEST_CASE("variance_paper examples") {
  ExactMatrix eta(1, 1), jac(1, 1);
  eta(0, 0) = ComplexRational(1);
  CHECK(variance_paper(eta, jac, Rational(1, 2)) == 4);
  jac(0, 0) = ComplexRational(1);
  CHECK(variance_paper(eta, jac, Rational(1)) == 2);
  ExactMatrix eta2(1, 2), jac2(1, 2);
  eta2(0, 0) = eta2(0, 1) = ComplexRational(1);
  CHECK(variance_paper(eta2, jac2, Rational(1)) == 2);
  CHECK(variance_paper(eta2.to_numeric(), jac2.to_numeric(), 1.0) == doctest::Approx(2.0));
}

TEST_CASE("variance bound and corollary on random decomposable functions") {
  Rng rng(11);
  for (int c = 0; c < 200; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const Decomposition d = decompose(f);
    for (const Rational& lambda : {Rational(1, 3), Rational(1), Rational(5, 2)}) {
      const Rational v = variance_exact(f, lambda);
      const Rational p = variance_paper(d.residues, d.jacobian, lambda);
      CHECK(v >= p);
      CHECK((v == p) == d.tail.is_zero());
      CHECK(lambda * lambda * v >= d.residues.trace_norm());
    }
  }
}

TEST_CASE("double overloads track the exact values") {
  Rng rng(5);
  for (int c = 0; c < 50; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    const double exact = variance_exact(f, Rational(3, 4)).get_d();
    CHECK(variance_exact(f, 0.75) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(inner_product_exact(f, f, 0.75).real() == doctest::Approx(inner_product_exact(f, f, Rational(3, 4)).re().get_d()));
  }
}
