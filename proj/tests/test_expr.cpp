#include <doctest.h>

#include "expr_fixtures.hpp"
#include "lens/errors.hpp"
#include "lens/expr.hpp"
#include "lens/random_instances.hpp"

using namespace lens;
using cplx = std::complex<double>;

using fixtures::random_node;
using fixtures::rel;
using fixtures::torus_point;

namespace {

std::vector<fixtures::CorpusLine> read_corpus(const std::string& file, bool with_offset) {
  return fixtures::read_corpus(std::string(LENS_TEST_DATA) + "/" + file, with_offset);
}

}  // namespace

TEST_CASE("parse examples") {
  const Expr e = parse("1/w + w", 1);
  const NodePtr w = Node::variable(0);
  const NodePtr expected = Node::binary(NodeKind::add, Node::binary(NodeKind::div, Node::literal(ComplexRational(1)), w), w);
  CHECK(structurally_equal(e.components()[0], expected));

  const cplx i(0, 1);
  const auto v = eval(parse("(3+4i)/w", 1), std::vector<cplx>{i});
  CHECK(std::abs(v[0] - cplx(4, -3)) < 1e-15);

  try {
    parse("1/w3", 2);
    FAIL("expected UnknownVariable");
  } catch (const UnknownVariable& err) {
    CHECK(err.offset() == 2);
  }
}

TEST_CASE("precedence and association") {
  CHECK(print(parse("-w^2", 1)) == "(-(w1^2))");
  CHECK(print(parse("1 - 2 - 3", 1)) == "((1 - 2) - 3)");
  CHECK(print(parse("8/4/2", 1)) == "((8 / 4) / 2)");
  CHECK(print(parse("1 + 2*w", 1)) == "(1 + (2 * w1))");
  CHECK(print(parse("w^-2", 1)) == "(w1^-2)");
  CHECK(print(parse("0.1", 1)) == "0.1");
  CHECK(print(parse("1e-3i", 1)) == "0.001i");
}

TEST_CASE("eval examples") {
  CHECK(std::abs(eval(parse("w1*w2", 2), std::vector<cplx>{2, cplx(0, 3)})[0] - cplx(0, 6)) < 1e-15);
  CHECK_THROWS_AS(eval(parse("1/w", 1), std::vector<cplx>{1e-15}), DivisionNearZero);
  CHECK(eval(parse("w^3", 1), std::vector<cplx>{2})[0] == cplx(8));
  CHECK_THROWS_AS(eval(parse("w^-1", 1), std::vector<cplx>{0}), DivisionNearZero);
  CHECK_THROWS_AS(eval(parse("w1", 2), std::vector<cplx>{1}), DimensionMismatch);
}

TEST_CASE("to_laurent examples") {
  const LaurentPoly f = to_laurent(parse("3 + 2/w1 + w1*w2", 2));
  CHECK(f.terms().size() == 3);
  CHECK(f.coefficient(MultiIndex({-1, 0}))[0] == ComplexRational(2));
  CHECK_THROWS_AS(to_laurent(parse("1/(w1+w2)", 2)), NotLaurent);
  CHECK_THROWS_AS(to_laurent(parse("(1/w)^2", 1)), AdmissibilityViolation);
  CHECK(to_laurent(parse("w^2/w", 1)) == LaurentPoly::monomial(MultiIndex({1}), ComplexRational(1)));
  CHECK(to_laurent(parse("(w + 1)^2 - w^2 - 2*w", 1)) == LaurentPoly::constant(1, {ComplexRational(1)}));
  CHECK(to_laurent(parse("0.1*w", 1)).coefficient(MultiIndex({1}))[0] == ComplexRational(Rational(1, 10)));
}

TEST_CASE("valid corpus round trip") {
  const auto corpus = read_corpus("valid_exprs.txt", false);
  CHECK(corpus.size() >= 39);
  for (const auto& c : corpus) {
    CAPTURE(c.text);
    const Expr e = parse(c.text, c.dims);
    const std::string printed = print(e);
    CHECK(structurally_equal(parse(printed, c.dims), e));
    CHECK(print(parse(printed, c.dims)) == printed);
  }
}

TEST_CASE("random AST round trip") {
  Rng rng(2024);
  for (int c = 0; c < 61; ++c) {
    const int dims = uniform_int(rng, 1, 3);
    std::vector<NodePtr> comps;
    const int k = uniform_int(rng, 1, 2);
    for (int a = 0; a < k; ++a) comps.push_back(random_node(rng, dims, 4));
    const Expr e(dims, 'w', comps);
    const std::string text = print(e);
    CAPTURE(text);
    CHECK(structurally_equal(parse(text, dims), e));
  }
}

TEST_CASE("malformed corpus offsets") {
  const auto corpus = read_corpus("malformed_exprs.txt", true);
  CHECK(corpus.size() == 30);
  for (const auto& c : corpus) {
    CAPTURE(c.text);
    try {
      parse(c.text, c.dims);
      FAIL("parsed a malformed input");
    } catch (const ParseError& err) {
      CHECK(err.offset() == c.offset);
      CHECK(err.offset() <= c.text.size());
    }
  }
}

TEST_CASE("to_laurent agrees with evaluation on the torus") {
  Rng rng(77);
  int converted = 0;
  for (int c = 0; c < 200; ++c) {
    const int dims = uniform_int(rng, 1, 3);
    Expr e = c % 2 == 0 ? parse(to_dsl(random_decomposable(rng, dims, uniform_int(rng, 1, 2))), dims)
                        : Expr(dims, 'w', {random_node(rng, dims, 3)});
    LaurentPoly f(dims, e.codims());
    try {
      f = to_laurent(e);
    } catch (const PreconditionError&) {
      continue;
    }
    ++converted;
    const Evaluator ev(e);
    for (int p = 0; p < 100; ++p) {
      const auto w = torus_point(rng, dims, std::uniform_real_distribution<double>(0.5, 1.5)(rng));
      std::vector<cplx> direct;
      try {
        direct = ev(w);
      } catch (const DivisionNearZero&) {
        continue;  // an intermediate divisor like (w1 - w1) is zero everywhere
      }
      const auto oracle = f.evaluate(w);
      for (std::size_t a = 0; a < oracle.size(); ++a) CHECK(rel(direct[a], oracle[a]) <= 1e-12);
    }
  }
  CHECK(converted >= 100);
}

TEST_CASE("to_dsl reproduces the polynomial") {
  Rng rng(3);
  for (int c = 0; c < 50; ++c) {
    const LaurentPoly f = random_decomposable(rng);
    CHECK(to_laurent(parse(to_dsl(f), f.dims())) == f);
  }
  CHECK(to_dsl(LaurentPoly(1, 1)) == "0");
}

TEST_CASE("substitution") {
  const Expr psi = parse("1/u", 1, 'u');
  const Expr g = parse("2*w1", 1);
  const Expr pulled = substitute(psi, g);
  CHECK(print(pulled) == "(1 / (2 * w1))");
  CHECK(print(substitute(parse("u1*u2", 2, 'u'), parse("w1 + w2, w1", 2))) == "((w1 + w2) * w1)");
  CHECK_THROWS_AS(substitute(parse("u1", 2, 'u'), parse("w1", 1)), DimensionMismatch);
}
