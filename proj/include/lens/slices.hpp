#ifndef LENS_SLICES_HPP
#define LENS_SLICES_HPP

// Exterior probability on a disc: a slice {|w| <= lambda, arg w in I} is
// charged (1/2 pi i) times the contour integral of dw/w over its boundary
// arc, i.e. |I| / 2 pi, independent of the radius.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lens {

/// Interval of arguments, -pi <= lo <= hi <= pi. Endpoint flags are kept
/// structurally but carry no measure.
struct AngularInterval {
  double lo = 0;
  double hi = 0;
  bool lo_open = true;
  bool hi_open = true;

  /// Throws InvalidInterval outside [-pi, pi] or when lo > hi.
  static AngularInterval make(double lo, double hi, bool lo_open = true, bool hi_open = true);
  static AngularInterval full_circle();  // (-pi, pi]

  bool is_empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  double length() const { return is_empty() ? 0.0 : hi - lo; }
  bool contains(const AngularInterval& other) const;

  friend bool operator==(const AngularInterval&, const AngularInterval&) = default;
};

std::string to_string(const AngularInterval& i);

struct Slice {
  double lambda = 1;
  AngularInterval interval;
};

/// Finite disjoint union of intervals on one disc, in canonical order:
/// sorted, pairwise disjoint, adjacent pieces merged when their union is
/// an interval, empty pieces dropped.
class SliceSet {
 public:
  explicit SliceSet(double lambda, std::vector<AngularInterval> components = {});
  static SliceSet from(const Slice& s) { return SliceSet(s.lambda, {s.interval}); }

  double lambda() const noexcept { return lambda_; }
  const std::vector<AngularInterval>& components() const noexcept { return components_; }
  bool empty() const noexcept { return components_.empty(); }
  double measure() const;

  friend bool operator==(const SliceSet&, const SliceSet&) = default;

 private:
  double lambda_;
  std::vector<AngularInterval> components_;
};

double slice_measure(const Slice& s);

enum class SliceOp { intersect, subtract };

/// Throws ScaleMismatch when the radii differ.
SliceSet slice_algebra(const Slice& a, const Slice& b, SliceOp op);
SliceSet intersect(const SliceSet& a, const SliceSet& b);
SliceSet subtract(const SliceSet& a, const SliceSet& b);

/// Product of per-coordinate measures on the poly-disc.
double product_measure(std::span<const SliceSet> factors);

/// (1/2 pi i) oint dw/w over the arc by N-point midpoint quadrature; the
/// imaginary part stays at rounding level.
std::complex<double> arc_integral_check(const Slice& s, int points);

/// Parses "lo:hi" with decimal numbers, 'pi' and + - * / ( ) arithmetic,
/// e.g. "-pi/3:pi/3". Throws ParseError on bad syntax and InvalidInterval
/// on out-of-range endpoints.
AngularInterval parse_interval(std::string_view text);

}  // namespace lens

#endif  // LENS_SLICES_HPP
