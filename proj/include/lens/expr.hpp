#ifndef LENS_EXPR_HPP
#define LENS_EXPR_HPP

// A small DSL for vector-valued complex rational expressions in w1..wn.
//
//   vector := expr (',' expr)*
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' signed-integer)?
//   base   := number | 'i' | variable | '(' expr ')'
//
// Numbers are decimals with an optional exponent and an optional 'i' suffix
// ("2.5", "1e-3", "4i"); they are kept as exact rationals. Variables are the
// variable letter followed by a 1-based index; the bare letter is accepted
// when n == 1.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lens/laurent.hpp"
#include "lens/rational.hpp"

namespace lens {

/// Default modulus below which a divisor counts as zero.
inline constexpr double kDefaultPoleEpsilon = 1e-9;

enum class NodeKind { literal, variable, negate, add, sub, mul, div, power };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  ComplexRational value;  // literal
  int index = 0;          // variable, zero-based
  int exponent = 0;       // power
  NodePtr lhs;            // operand of negate / power, left of binary ops
  NodePtr rhs;

  static NodePtr literal(ComplexRational v);
  static NodePtr variable(int index);
  static NodePtr negate(NodePtr operand);
  static NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
  static NodePtr power(NodePtr base, int exponent);
};

bool structurally_equal(const NodePtr& a, const NodePtr& b);

/// Parsed vector expression: one tree per output component.
class Expr {
 public:
  Expr(int dims, char variable, std::vector<NodePtr> components);

  int dims() const noexcept { return dims_; }
  int codims() const noexcept { return static_cast<int>(components_.size()); }
  char variable() const noexcept { return variable_; }
  const std::vector<NodePtr>& components() const noexcept { return components_; }

 private:
  int dims_;
  char variable_;
  std::vector<NodePtr> components_;
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Throws ParseError (or UnknownVariable) with the offset of the first
/// offending token.
Expr parse(std::string_view text, int dims, char variable = 'w');

/// Canonical form: fully parenthesised binary operations, explicit '*',
/// indexed variables. parse(print(e)) is structurally equal to e.
std::string print(const Expr& e);
std::string print(const NodePtr& node, char variable = 'w');

/// Stack-machine form of an expression; cheap to evaluate many times and
/// safe to share between threads.
class Evaluator {
 public:
  explicit Evaluator(const Expr& e, double pole_epsilon = kDefaultPoleEpsilon);

  int dims() const noexcept { return dims_; }
  int codims() const noexcept { return static_cast<int>(programs_.size()); }

  /// Throws DivisionNearZero when a divisor (or a base raised to a negative
  /// power) has modulus below the pole epsilon.
  void eval_into(std::span<const std::complex<double>> point, std::span<std::complex<double>> out) const;
  std::vector<std::complex<double>> operator()(std::span<const std::complex<double>> point) const;

  struct Instruction {
    enum class Op { push_const, push_var, neg, add, sub, mul, div, pow } op;
    std::complex<double> value{};
    int arg = 0;
  };

 private:
  int dims_;
  double eps_;
  std::size_t max_stack_ = 0;
  std::vector<std::vector<Instruction>> programs_;
};

std::vector<std::complex<double>> eval(const Expr& e, std::span<const std::complex<double>> point,
                                       double pole_epsilon = kDefaultPoleEpsilon);

/// Exact expansion into a Laurent polynomial. Throws NotLaurent for division
/// by anything other than a monomial, AdmissibilityViolation when the result
/// has an exponent below -1.
LaurentPoly to_laurent(const Expr& e);

/// DSL text whose evaluation equals f (used to drive the numeric engine from
/// oracle instances).
std::string to_dsl(const LaurentPoly& f, char variable = 'w');

/// Replaces every variable x_j of `outer` by `inner.components()[j]`. The
/// result lives in the variables of `inner`.
Expr substitute(const Expr& outer, const Expr& inner);

}  // namespace lens

#endif  // LENS_EXPR_HPP
