#include "lens/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "lens/errors.hpp"

namespace lens {

NodePtr Node::literal(ComplexRational v) {
  return std::make_shared<const Node>(Node{NodeKind::literal, std::move(v), 0, 0, nullptr, nullptr});
}

NodePtr Node::variable(int index) {
  return std::make_shared<const Node>(Node{NodeKind::variable, {}, index, 0, nullptr, nullptr});
}

NodePtr Node::negate(NodePtr operand) {
  return std::make_shared<const Node>(Node{NodeKind::negate, {}, 0, 0, std::move(operand), nullptr});
}

NodePtr Node::binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{kind, {}, 0, 0, std::move(lhs), std::move(rhs)});
}

NodePtr Node::power(NodePtr base, int exponent) {
  return std::make_shared<const Node>(Node{NodeKind::power, {}, 0, exponent, std::move(base), nullptr});
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::literal:
      return a->value == b->value;
    case NodeKind::variable:
      return a->index == b->index;
    case NodeKind::negate:
      return structurally_equal(a->lhs, b->lhs);
    case NodeKind::power:
      return a->exponent == b->exponent && structurally_equal(a->lhs, b->lhs);
    default:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

Expr::Expr(int dims, char variable, std::vector<NodePtr> components)
    : dims_(dims), variable_(variable), components_(std::move(components)) {
  if (dims_ < 1) throw std::invalid_argument("Expr: dimension must be >= 1");
  if (components_.empty()) throw std::invalid_argument("Expr: at least one component required");
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.dims() != b.dims() || a.codims() != b.codims()) return false;
  for (int c = 0; c < a.codims(); ++c) {
    if (!structurally_equal(a.components()[static_cast<std::size_t>(c)], b.components()[static_cast<std::size_t>(c)]))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

constexpr int kMaxExponent = 64;

enum class Tok { number, variable, plus, minus, star, slash, caret, lparen, rparen, comma, end, invalid };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  ComplexRational value;  // number
  bool integral = false;  // number without '.', exponent or 'i'
  int index = 0;          // variable
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  Parser(std::string_view text, int dims, char variable) : text_(text), dims_(dims), var_(variable) {
    advance();
  }

  Expr parse_vector() {
    std::vector<NodePtr> comps;
    comps.push_back(parse_expr());
    while (cur_.kind == Tok::comma) {
      advance();
      comps.push_back(parse_expr());
    }
    if (cur_.kind != Tok::end) fail("operator, ',' or end of input");
    return Expr(dims_, var_, std::move(comps));
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(cur_.offset, expected, describe(cur_));
  }

  void advance() { cur_ = lex(); }

  Token lex() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return Token{Tok::end, start, "", {}, false, 0};
    const char c = text_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      return Token{k, start, std::string(1, c), {}, false, 0};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case ',': return single(Tok::comma);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return lex_number();
    }
    if (c == 'i') {
      ++pos_;
      return Token{Tok::number, start, "i", ComplexRational(0, 1), false, 0};
    }
    if (c == var_) return lex_variable();
    return single(Tok::invalid);
  }

  Token lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return std::string(text_.substr(b, pos_ - b));
    };
    std::string mantissa = digits();
    std::string fraction;
    bool integral = true;
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      fraction = digits();
      integral = false;
    }
    long exp10 = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      bool negative = false;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) {
        negative = text_[p] == '-';
        ++p;
      }
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        const std::string e = digits();
        if (e.size() > 4) throw ParseError(start, "decimal exponent of at most 4 digits", "'" + e + "'");
        exp10 = std::stol(e) * (negative ? -1 : 1);
        integral = false;
      }
    }
    mpz_class num(mantissa.empty() && fraction.empty() ? "0" : mantissa + fraction, 10);
    Rational value(num);
    const long scale = exp10 - static_cast<long>(fraction.size());
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale < 0) {
      value /= Rational(ten_pow);
    } else {
      value *= Rational(ten_pow);
    }
    value.canonicalize();
    bool imaginary = false;
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      imaginary = true;
      integral = false;
    }
    Token t{Tok::number, start, std::string(text_.substr(start, pos_ - start)),
            imaginary ? ComplexRational(0, value) : ComplexRational(value), integral, 0};
    return t;
  }

  Token lex_variable() {
    const std::size_t start = pos_++;
    const std::size_t digits_begin = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    int index = 0;
    if (pos_ == digits_begin) {
      if (dims_ != 1) throw UnknownVariable(start, name, dims_);
      index = 1;
    } else {
      const std::string digits(text_.substr(digits_begin, pos_ - digits_begin));
      if (digits.size() > 6) throw UnknownVariable(start, name, dims_);
      index = std::stoi(digits);
    }
    if (index < 1 || index > dims_) throw UnknownVariable(start, name, dims_);
    return Token{Tok::variable, start, name, {}, false, index - 1};
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const NodeKind k = cur_.kind == Tok::plus ? NodeKind::add : NodeKind::sub;
      advance();
      lhs = Node::binary(k, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const NodeKind k = cur_.kind == Tok::star ? NodeKind::mul : NodeKind::div;
      advance();
      lhs = Node::binary(k, lhs, parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (cur_.kind == Tok::minus) {
      advance();
      return Node::negate(parse_factor());
    }
    NodePtr base = parse_base();
    if (cur_.kind != Tok::caret) return base;
    advance();
    bool negative = false;
    if (cur_.kind == Tok::minus || cur_.kind == Tok::plus) {
      negative = cur_.kind == Tok::minus;
      advance();
    }
    if (cur_.kind != Tok::number || !cur_.integral) fail("integer exponent");
    const Rational& q = cur_.value.re();
    if (cmp(q, kMaxExponent) > 0) fail("integer exponent of magnitude <= " + std::to_string(kMaxExponent));
    const int e = static_cast<int>(q.get_num().get_si());
    advance();
    return Node::power(base, negative ? -e : e);
  }

  NodePtr parse_base() {
    switch (cur_.kind) {
      case Tok::number: {
        NodePtr n = Node::literal(cur_.value);
        advance();
        return n;
      }
      case Tok::variable: {
        NodePtr n = Node::variable(cur_.index);
        advance();
        return n;
      }
      case Tok::lparen: {
        advance();
        NodePtr inner = parse_expr();
        if (cur_.kind != Tok::rparen) fail("')'");
        advance();
        return inner;
      }
      default:
        fail("number, 'i', variable, '(' or '-'");
    }
  }

  std::string_view text_;
  int dims_;
  char var_;
  std::size_t pos_ = 0;
  Token cur_;
};

}  // namespace

Expr parse(std::string_view text, int dims, char variable) {
  if (dims < 1) throw std::invalid_argument("parse: dimension must be >= 1");
  if (variable == 'i' || !std::isalpha(static_cast<unsigned char>(variable)) || variable == 'e' || variable == 'E')
    throw std::invalid_argument("parse: unusable variable letter");
  Parser p(text, dims, variable);
  return p.parse_vector();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

/// Exact decimal for rationals with denominator 2^a 5^b, empty otherwise.
std::string decimal(const Rational& q) {
  mpz_class den = q.get_den();
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return {};
  const int digits = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class scaled = q.get_num() * scale / q.get_den();
  const bool negative = sgn(scaled) < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1) - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + s : s;
}

std::string real_text(const Rational& q) {
  const Rational mag = abs(q);
  std::string d = decimal(mag);
  std::string body = d.empty() ? "(" + mag.get_num().get_str() + " / " + mag.get_den().get_str() + ")" : d;
  return sgn(q) < 0 ? "(-" + body + ")" : body;
}

std::string literal_text(const ComplexRational& z) {
  const bool has_re = sgn(z.re()) != 0;
  const bool has_im = sgn(z.im()) != 0;
  if (!has_im) return real_text(z.re());
  std::string im;
  const Rational mag = abs(z.im());
  const std::string d = decimal(mag);
  if (mag == 1) {
    im = "i";
  } else if (!d.empty()) {
    im = d + "i";
  } else {
    im = "(" + real_text(mag) + " * i)";
  }
  if (sgn(z.im()) < 0) im = "(-" + im + ")";
  if (!has_re) return im;
  return "(" + real_text(z.re()) + " + " + im + ")";
}

void print_node(const NodePtr& n, char var, std::string& out) {
  switch (n->kind) {
    case NodeKind::literal:
      out += literal_text(n->value);
      return;
    case NodeKind::variable:
      out += var;
      out += std::to_string(n->index + 1);
      return;
    case NodeKind::negate:
      out += "(-";
      print_node(n->lhs, var, out);
      out += ")";
      return;
    case NodeKind::power:
      out += "(";
      print_node(n->lhs, var, out);
      out += "^" + std::to_string(n->exponent) + ")";
      return;
    default: {
      const char* op = n->kind == NodeKind::add   ? " + "
                       : n->kind == NodeKind::sub ? " - "
                       : n->kind == NodeKind::mul ? " * "
                                                  : " / ";
      out += "(";
      print_node(n->lhs, var, out);
      out += op;
      print_node(n->rhs, var, out);
      out += ")";
    }
  }
}

}  // namespace

std::string print(const NodePtr& node, char variable) {
  std::string out;
  print_node(node, variable, out);
  return out;
}

std::string print(const Expr& e) {
  std::string out;
  for (std::size_t c = 0; c < e.components().size(); ++c) {
    if (c) out += ", ";
    print_node(e.components()[c], e.variable(), out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using Instr = Evaluator::Instruction;

void compile(const NodePtr& n, std::vector<Instr>& prog, std::size_t depth, std::size_t& max_depth) {
  max_depth = std::max(max_depth, depth + 1);
  switch (n->kind) {
    case NodeKind::literal:
      prog.push_back({Instr::Op::push_const, n->value.to_complex(), 0});
      return;
    case NodeKind::variable:
      prog.push_back({Instr::Op::push_var, {}, n->index});
      return;
    case NodeKind::negate:
      compile(n->lhs, prog, depth, max_depth);
      prog.push_back({Instr::Op::neg, {}, 0});
      return;
    case NodeKind::power:
      compile(n->lhs, prog, depth, max_depth);
      prog.push_back({Instr::Op::pow, {}, n->exponent});
      return;
    default:
      compile(n->lhs, prog, depth, max_depth);
      compile(n->rhs, prog, depth + 1, max_depth);
      const auto op = n->kind == NodeKind::add   ? Instr::Op::add
                      : n->kind == NodeKind::sub ? Instr::Op::sub
                      : n->kind == NodeKind::mul ? Instr::Op::mul
                                                 : Instr::Op::div;
      prog.push_back({op, {}, 0});
  }
}

std::complex<double> ipow(std::complex<double> base, int e) {
  std::complex<double> result = 1.0;
  unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
  while (k) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return e < 0 ? 1.0 / result : result;
}

}  // namespace

Evaluator::Evaluator(const Expr& e, double pole_epsilon) : dims_(e.dims()), eps_(pole_epsilon) {
  for (const auto& c : e.components()) {
    std::vector<Instruction> prog;
    compile(c, prog, 0, max_stack_);
    programs_.push_back(std::move(prog));
  }
}

void Evaluator::eval_into(std::span<const std::complex<double>> point, std::span<std::complex<double>> out) const {
  if (static_cast<int>(point.size()) != dims_) throw DimensionMismatch("eval: point dimension does not match");
  if (out.size() != programs_.size()) throw DimensionMismatch("eval: output size does not match");
  thread_local std::vector<std::complex<double>> stack;
  stack.resize(max_stack_);
  auto near_zero = [&](std::complex<double> z) {
    if (std::abs(z) < eps_) throw DivisionNearZero(std::vector<std::complex<double>>(point.begin(), point.end()));
  };
  for (std::size_t c = 0; c < programs_.size(); ++c) {
    std::size_t sp = 0;
    for (const auto& ins : programs_[c]) {
      switch (ins.op) {
        case Instruction::Op::push_const:
          stack[sp++] = ins.value;
          break;
        case Instruction::Op::push_var:
          stack[sp++] = point[static_cast<std::size_t>(ins.arg)];
          break;
        case Instruction::Op::neg:
          stack[sp - 1] = -stack[sp - 1];
          break;
        case Instruction::Op::pow:
          if (ins.arg < 0) near_zero(stack[sp - 1]);
          stack[sp - 1] = ipow(stack[sp - 1], ins.arg);
          break;
        case Instruction::Op::add:
          --sp;
          stack[sp - 1] += stack[sp];
          break;
        case Instruction::Op::sub:
          --sp;
          stack[sp - 1] -= stack[sp];
          break;
        case Instruction::Op::mul:
          --sp;
          stack[sp - 1] *= stack[sp];
          break;
        case Instruction::Op::div:
          --sp;
          near_zero(stack[sp]);
          stack[sp - 1] /= stack[sp];
          break;
      }
    }
    out[c] = stack[0];
  }
}

std::vector<std::complex<double>> Evaluator::operator()(std::span<const std::complex<double>> point) const {
  std::vector<std::complex<double>> out(programs_.size());
  eval_into(point, out);
  return out;
}

std::vector<std::complex<double>> eval(const Expr& e, std::span<const std::complex<double>> point,
                                       double pole_epsilon) {
  return Evaluator(e, pole_epsilon)(point);
}

// ---------------------------------------------------------------------------
// Exact expansion

namespace {

// Scalar Laurent polynomial with unrestricted exponents; admissibility is
// checked once the whole expansion is done.
using RawPoly = std::map<std::vector<int>, ComplexRational>;

void prune(RawPoly& p) {
  std::erase_if(p, [](const auto& kv) { return kv.second.is_zero(); });
}

RawPoly raw_mul(const RawPoly& a, const RawPoly& b) {
  RawPoly r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      r[e] += ca * cb;
    }
  }
  prune(r);
  return r;
}

RawPoly raw_inverse_monomial(const RawPoly& p, const NodePtr& subtree, char var) {
  if (p.size() != 1) throw NotLaurent(print(subtree, var));
  const auto& [e, c] = *p.begin();
  std::vector<int> neg(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) neg[j] = -e[j];
  return RawPoly{{neg, c.inverse()}};
}

RawPoly expand(const NodePtr& n, int dims, char var) {
  switch (n->kind) {
    case NodeKind::literal: {
      RawPoly r{{std::vector<int>(static_cast<std::size_t>(dims), 0), n->value}};
      prune(r);
      return r;
    }
    case NodeKind::variable: {
      std::vector<int> e(static_cast<std::size_t>(dims), 0);
      e[static_cast<std::size_t>(n->index)] = 1;
      return RawPoly{{e, ComplexRational(1)}};
    }
    case NodeKind::negate: {
      RawPoly r = expand(n->lhs, dims, var);
      for (auto& [_, c] : r) c = -c;
      return r;
    }
    case NodeKind::add:
    case NodeKind::sub: {
      RawPoly r = expand(n->lhs, dims, var);
      for (const auto& [e, c] : expand(n->rhs, dims, var)) {
        if (n->kind == NodeKind::add) {
          r[e] += c;
        } else {
          r[e] -= c;
        }
      }
      prune(r);
      return r;
    }
    case NodeKind::mul:
      return raw_mul(expand(n->lhs, dims, var), expand(n->rhs, dims, var));
    case NodeKind::div:
      return raw_mul(expand(n->lhs, dims, var), raw_inverse_monomial(expand(n->rhs, dims, var), n->rhs, var));
    case NodeKind::power: {
      RawPoly base = expand(n->lhs, dims, var);
      if (n->exponent < 0) base = raw_inverse_monomial(base, n->lhs, var);
      RawPoly result{{std::vector<int>(static_cast<std::size_t>(dims), 0), ComplexRational(1)}};
      for (int p = 0; p < std::abs(n->exponent); ++p) result = raw_mul(result, base);
      return result;
    }
  }
  throw std::logic_error("expand: unknown node kind");
}

}  // namespace

LaurentPoly to_laurent(const Expr& e) {
  const int k = e.codims();
  LaurentPoly::Terms terms;
  for (int c = 0; c < k; ++c) {
    for (auto& [exps, coeff] : expand(e.components()[static_cast<std::size_t>(c)], e.dims(), e.variable())) {
      auto [it, _] = terms.try_emplace(MultiIndex(exps), CoefficientVector(static_cast<std::size_t>(k)));
      it->second[static_cast<std::size_t>(c)] = coeff;
    }
  }
  return LaurentPoly(e.dims(), k, std::move(terms));
}

namespace {

std::string rational_dsl(const Rational& q) {
  if (q.get_den() == 1) return "(" + q.get_num().get_str() + ")";
  return "(" + q.get_num().get_str() + "/" + q.get_den().get_str() + ")";
}

}  // namespace

std::string to_dsl(const LaurentPoly& f, char variable) {
  std::vector<std::string> comps(static_cast<std::size_t>(f.codims()));
  for (const auto& [idx, coeffs] : f.terms()) {
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      if (coeffs[c].is_zero()) continue;
      std::string term = "(" + rational_dsl(coeffs[c].re()) + " + " + rational_dsl(coeffs[c].im()) + "*i)";
      for (int j = 0; j < idx.dims(); ++j) {
        if (idx[j] == 0) continue;
        term += std::string("*") + variable + std::to_string(j + 1);
        if (idx[j] != 1) term += "^" + std::to_string(idx[j]);
      }
      if (!comps[c].empty()) comps[c] += " + ";
      comps[c] += term;
    }
  }
  std::string out;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c) out += ", ";
    out += comps[c].empty() ? "0" : comps[c];
  }
  return out;
}

namespace {

NodePtr substitute_node(const NodePtr& n, const std::vector<NodePtr>& repl) {
  switch (n->kind) {
    case NodeKind::literal:
      return n;
    case NodeKind::variable:
      return repl[static_cast<std::size_t>(n->index)];
    case NodeKind::negate:
      return Node::negate(substitute_node(n->lhs, repl));
    case NodeKind::power:
      return Node::power(substitute_node(n->lhs, repl), n->exponent);
    default:
      return Node::binary(n->kind, substitute_node(n->lhs, repl), substitute_node(n->rhs, repl));
  }
}

}  // namespace

Expr substitute(const Expr& outer, const Expr& inner) {
  if (inner.codims() != outer.dims()) {
    throw DimensionMismatch("substitute: outer expression has " + std::to_string(outer.dims()) +
                            " variables but " + std::to_string(inner.codims()) + " replacements were given");
  }
  std::vector<NodePtr> comps;
  for (const auto& c : outer.components()) comps.push_back(substitute_node(c, inner.components()));
  return Expr(inner.dims(), inner.variable(), std::move(comps));
}

}  // namespace lens
