#include "lens/slices.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <numbers>

#include "lens/errors.hpp"

namespace lens {

namespace {
constexpr double kPi = std::numbers::pi;
}

AngularInterval AngularInterval::make(double lo, double hi, bool lo_open, bool hi_open) {
  if (!(lo >= -kPi) || !(hi <= kPi) || !(lo <= hi)) {
    throw InvalidInterval("angular interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] must satisfy -pi <= lo <= hi <= pi");
  }
  return {lo, hi, lo_open, hi_open};
}

AngularInterval AngularInterval::full_circle() { return {-kPi, kPi, true, false}; }

bool AngularInterval::contains(const AngularInterval& o) const {
  if (o.is_empty()) return true;
  if (is_empty()) return false;
  const bool lo_ok = lo < o.lo || (lo == o.lo && (!lo_open || o.lo_open));
  const bool hi_ok = o.hi < hi || (hi == o.hi && (!hi_open || o.hi_open));
  return lo_ok && hi_ok;
}

std::string to_string(const AngularInterval& i) {
  return std::string(i.lo_open ? "(" : "[") + std::to_string(i.lo) + ", " + std::to_string(i.hi) +
         (i.hi_open ? ")" : "]");
}

namespace {

AngularInterval intersect(const AngularInterval& a, const AngularInterval& b) {
  AngularInterval r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_open = a.lo_open;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_open = b.lo_open;
  } else {
    r.lo = a.lo;
    r.lo_open = a.lo_open || b.lo_open;
  }
  if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hi_open = a.hi_open;
  } else if (b.hi < a.hi) {
    r.hi = b.hi;
    r.hi_open = b.hi_open;
  } else {
    r.hi = a.hi;
    r.hi_open = a.hi_open || b.hi_open;
  }
  return r;
}

/// a \ b as at most two intervals (possibly empty).
std::vector<AngularInterval> subtract(const AngularInterval& a, const AngularInterval& b) {
  if (b.is_empty()) return {a};
  // Points of a strictly left of b, then strictly right of b.
  const AngularInterval left{-kPi, b.lo, false, !b.lo_open};
  const AngularInterval right{b.hi, kPi, !b.hi_open, false};
  return {intersect(a, left), intersect(a, right)};
}

/// True when the union of two sorted intervals is itself an interval.
bool joins(const AngularInterval& a, const AngularInterval& b) {
  return b.lo < a.hi || (b.lo == a.hi && (!a.hi_open || !b.lo_open));
}

}  // namespace

SliceSet::SliceSet(double lambda, std::vector<AngularInterval> components) : lambda_(lambda) {
  if (!(lambda > 0)) throw InvalidInterval("slice radius must be positive");
  std::erase_if(components, [](const AngularInterval& i) { return i.is_empty(); });
  std::sort(components.begin(), components.end(), [](const AngularInterval& x, const AngularInterval& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return !x.lo_open && y.lo_open;  // closed endpoint first
  });
  for (const auto& c : components) {
    if (!components_.empty() && joins(components_.back(), c)) {
      auto& last = components_.back();
      if (c.hi > last.hi || (c.hi == last.hi && !c.hi_open)) {
        last.hi = c.hi;
        last.hi_open = c.hi_open;
      }
    } else {
      components_.push_back(c);
    }
  }
}

double SliceSet::measure() const {
  double sum = 0;
  for (const auto& c : components_) sum += c.length();
  return sum / (2 * kPi);
}

double slice_measure(const Slice& s) { return s.interval.length() / (2 * kPi); }

SliceSet intersect(const SliceSet& a, const SliceSet& b) {
  if (a.lambda() != b.lambda()) throw ScaleMismatch("slice algebra needs slices of one disc");
  std::vector<AngularInterval> out;
  for (const auto& x : a.components())
    for (const auto& y : b.components()) out.push_back(intersect(x, y));
  return SliceSet(a.lambda(), std::move(out));
}

SliceSet subtract(const SliceSet& a, const SliceSet& b) {
  if (a.lambda() != b.lambda()) throw ScaleMismatch("slice algebra needs slices of one disc");
  std::vector<AngularInterval> pieces = a.components();
  for (const auto& y : b.components()) {
    std::vector<AngularInterval> next;
    for (const auto& x : pieces)
      for (const auto& p : subtract(x, y))
        if (!p.is_empty()) next.push_back(p);
    pieces = std::move(next);
  }
  return SliceSet(a.lambda(), std::move(pieces));
}

SliceSet slice_algebra(const Slice& a, const Slice& b, SliceOp op) {
  const SliceSet sa = SliceSet::from(a);
  const SliceSet sb = SliceSet::from(b);
  return op == SliceOp::intersect ? intersect(sa, sb) : subtract(sa, sb);
}

double product_measure(std::span<const SliceSet> factors) {
  double p = 1;
  for (const auto& f : factors) p *= f.measure();
  return p;
}

std::complex<double> arc_integral_check(const Slice& s, int points) {
  if (points < 8) throw std::invalid_argument("arc_integral_check: at least 8 points required");
  const auto& I = s.interval;
  if (I.is_empty()) return 0.0;
  const double h = (I.hi - I.lo) / points;
  std::complex<double> sum = 0;
  for (int j = 0; j < points; ++j) {
    const std::complex<double> w = std::polar(s.lambda, I.lo + (j + 0.5) * h);
    const std::complex<double> dw = std::complex<double>(0, 1) * w * h;
    sum += dw / w;
  }
  return sum / std::complex<double>(0, 2 * kPi);
}

// ---------------------------------------------------------------------------
// Interval syntax

namespace {

class IntervalParser {
 public:
  explicit IntervalParser(std::string_view text) : text_(text) {}

  AngularInterval parse() {
    const double lo = expr();
    skip();
    if (peek() != ':') fail("':'");
    ++pos_;
    const double hi = expr();
    skip();
    if (pos_ != text_.size()) fail("end of input");
    return AngularInterval::make(lo, hi);
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& expected) const {
    const std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw ParseError(pos_, expected, found);
  }

  double expr() {
    double v = term();
    for (;;) {
      skip();
      if (peek() == '+') {
        ++pos_;
        v += term();
      } else if (peek() == '-') {
        ++pos_;
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      skip();
      if (peek() == '*') {
        ++pos_;
        v *= unary();
      } else if (peek() == '/') {
        ++pos_;
        const std::size_t at = pos_;
        const double d = unary();
        if (d == 0) {
          pos_ = at;
          fail("non-zero divisor");
        }
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    skip();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    return primary();
  }

  double primary() {
    skip();
    if (peek() == '(') {
      ++pos_;
      const double v = expr();
      skip();
      if (peek() != ')') fail("')'");
      ++pos_;
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return kPi;
    }
    const char c = peek();
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') fail("number, 'pi' or '('");
    double v = 0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("number");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

AngularInterval parse_interval(std::string_view text) { return IntervalParser(text).parse(); }

}  // namespace lens
