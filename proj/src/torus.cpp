#include "lens/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "lens/errors.hpp"

namespace lens {

VectorFunction make_function(const Expr& e, double pole_epsilon) {
  auto ev = std::make_shared<const Evaluator>(e, pole_epsilon);
  return {e.dims(), e.codims(), [ev](std::span<const cplx> p, std::span<cplx> out) { ev->eval_into(p, out); }};
}

VectorFunction make_function(const LaurentPoly& f) {
  // Flat tables: per term, one offset into each dimension's power row and k
  // coefficients. Powers of every coordinate are built once per point.
  struct Table {
    std::size_t dims = 0;
    std::size_t codims = 0;
    std::vector<int> lo;  // smallest exponent per dimension
    std::vector<int> hi;
    std::vector<int> offsets;
    std::vector<cplx> coeffs;
  };
  auto t = std::make_shared<Table>();
  t->dims = static_cast<std::size_t>(f.dims());
  t->codims = static_cast<std::size_t>(f.codims());
  t->lo.assign(t->dims, 0);
  t->hi.assign(t->dims, 0);
  for (const auto& [idx, coeffs] : f.terms()) {
    for (std::size_t j = 0; j < t->dims; ++j) {
      t->lo[j] = std::min(t->lo[j], idx.exponents()[j]);
      t->hi[j] = std::max(t->hi[j], idx.exponents()[j]);
    }
  }
  std::vector<int> row(t->dims, 0);
  int width = 0;
  for (std::size_t j = 0; j < t->dims; ++j) {
    row[j] = width;
    width += t->hi[j] - t->lo[j] + 1;
  }
  for (const auto& [idx, coeffs] : f.terms()) {
    for (std::size_t j = 0; j < t->dims; ++j) t->offsets.push_back(row[j] + idx.exponents()[j] - t->lo[j]);
    for (const auto& c : coeffs) t->coeffs.push_back(c.to_complex());
  }
  return {f.dims(), f.codims(), [t, width](std::span<const cplx> p, std::span<cplx> out) {
            // plain products: the NaN-recovering library multiply dominates otherwise
            auto mul = [](cplx a, cplx b) {
              return cplx(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
            };
            std::array<cplx, 64> local;
            std::vector<cplx> heap;
            cplx* pw = local.data();
            if (width > static_cast<int>(local.size())) {
              heap.resize(static_cast<std::size_t>(width));
              pw = heap.data();
            }
            std::size_t base = 0;
            for (std::size_t j = 0; j < t->dims; ++j) {
              const std::size_t zero = base + static_cast<std::size_t>(-t->lo[j]);
              pw[zero] = 1.0;
              for (int e = 1; e <= t->hi[j]; ++e) pw[zero + e] = mul(pw[zero + e - 1], p[j]);
              if (t->lo[j] < 0) {
                const cplx inv = std::conj(p[j]) / std::norm(p[j]);
                for (int e = 1; e <= -t->lo[j]; ++e) pw[zero - e] = mul(pw[zero - e + 1], inv);
              }
              base += static_cast<std::size_t>(t->hi[j] - t->lo[j] + 1);
            }
            std::fill(out.begin(), out.end(), cplx{});
            const std::size_t terms = t->dims == 0 ? 0 : t->offsets.size() / t->dims;
            const int* off = t->offsets.data();
            const cplx* co = t->coeffs.data();
            for (std::size_t q = 0; q < terms; ++q) {
              cplx m = pw[off[0]];
              for (std::size_t j = 1; j < t->dims; ++j) m = mul(m, pw[off[j]]);
              for (std::size_t a = 0; a < t->codims; ++a) out[a] += mul(co[a], m);
              off += t->dims;
              co += t->codims;
            }
          }};
}

QuadratureOptions options_from_environment(QuadratureOptions base) {
  if (const char* env = std::getenv("LENS_MAX_GRID")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 4) base.max_points = static_cast<int>(v);
  }
  return base;
}

TorusGrid::TorusGrid(int dims, int codims, double lambda, int points, std::vector<cplx> values)
    : dims_(dims), codims_(codims), lambda_(lambda), points_(points), values_(std::move(values)) {
  size_ = 1;
  for (int j = 0; j < dims_; ++j) size_ *= static_cast<std::size_t>(points_);
  if (values_.size() != size_ * static_cast<std::size_t>(codims_))
    throw std::invalid_argument("TorusGrid: value count does not match the grid shape");
}

namespace {

long long grid_size(int points, int dims) {
  long long s = 1;
  for (int j = 0; j < dims; ++j) s *= points;
  return s;
}

std::vector<cplx> circle(double lambda, int points) {
  std::vector<cplx> w(static_cast<std::size_t>(points));
  for (int m = 0; m < points; ++m) w[static_cast<std::size_t>(m)] = std::polar(lambda, 2 * std::numbers::pi * m / points);
  return w;
}

/// Signed exponent represented by DFT index j.
int signed_index(int j, int points) { return j < points / 2 ? j : j - points; }

void check_grid(int dims, int points, const QuadratureOptions& opts) {
  if (dims > opts.max_dims) {
    throw GridTooLarge("dimension " + std::to_string(dims) + " exceeds the cap of " + std::to_string(opts.max_dims));
  }
  if (points < 4) throw std::invalid_argument("torus grid needs at least 4 points per dimension");
  if (points > opts.max_points || grid_size(points, dims) > opts.max_grid) {
    throw GridTooLarge("grid of " + std::to_string(points) + "^" + std::to_string(dims) +
                       " points exceeds the configured budget");
  }
}

std::mutex fftw_planner_mutex;

/// Normalised DFT of one component: S_a = N^-n sum_m f_m exp(-2 pi i a.m/N).
std::vector<cplx> spectrum(std::span<const cplx> values, int dims, int points) {
  std::vector<cplx> in(values.begin(), values.end());
  std::vector<cplx> out(values.size());
  std::vector<int> shape(static_cast<std::size_t>(dims), points);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex);
    plan = fftw_plan_dft(dims, shape.data(), reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(values.size());
  for (auto& z : out) z *= scale;
  return out;
}

}  // namespace

TorusGrid sample_torus(const VectorFunction& f, double lambda, int points, const QuadratureOptions& opts) {
  if (!(lambda > 0)) throw std::invalid_argument("sample_torus: lambda must be positive");
  check_grid(f.dims, points, opts);
  const auto w = circle(lambda, points);
  const std::size_t size = static_cast<std::size_t>(grid_size(points, f.dims));
  const auto k = static_cast<std::size_t>(f.codims);
  std::vector<cplx> values(size * k);
  std::vector<cplx> point(static_cast<std::size_t>(f.dims));
  std::vector<cplx> out(k);
  std::vector<int> m(static_cast<std::size_t>(f.dims), 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    for (int j = 0; j < f.dims; ++j) point[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(m[static_cast<std::size_t>(j)])];
    try {
      f.eval(point, out);
    } catch (const DivisionNearZero& e) {
      throw PoleOnTorus(std::string("pole on the torus at lambda=") + std::to_string(lambda) + ": " + e.what());
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (!std::isfinite(out[a].real()) || !std::isfinite(out[a].imag()) || std::norm(out[a]) > opts.blowup * opts.blowup) {
        throw PoleOnTorus("function blows up on the torus at lambda=" + std::to_string(lambda));
      }
      values[a * size + flat] = out[a];
    }
    for (int j = f.dims - 1; j >= 0; --j) {  // odometer, last index fastest
      if (++m[static_cast<std::size_t>(j)] < points) break;
      m[static_cast<std::size_t>(j)] = 0;
    }
  }
  return TorusGrid(f.dims, f.codims, lambda, points, std::move(values));
}

std::vector<cplx> laurent_coefficient(const TorusGrid& grid, std::span<const int> exponent) {
  const int n = grid.dims();
  const int N = grid.points();
  if (static_cast<int>(exponent.size()) != n) throw DimensionMismatch("laurent_coefficient: exponent dimension");
  int degree = 0;
  for (int a : exponent) {
    if (std::abs(a) > N / 2 - 1) {
      throw AliasingRisk("exponent " + std::to_string(a) + " needs more than " + std::to_string(N) +
                         " points per dimension");
    }
    degree += a;
  }
  std::vector<cplx> twiddle(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) twiddle[static_cast<std::size_t>(j)] = std::polar(1.0, -2 * std::numbers::pi * j / N);
  std::vector<cplx> out(static_cast<std::size_t>(grid.codims()));
  std::vector<int> m(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    long long phase = 0;
    for (int j = 0; j < n; ++j) phase += static_cast<long long>(exponent[static_cast<std::size_t>(j)]) * m[static_cast<std::size_t>(j)];
    phase %= N;
    if (phase < 0) phase += N;
    const cplx t = twiddle[static_cast<std::size_t>(phase)];
    for (int a = 0; a < grid.codims(); ++a) out[static_cast<std::size_t>(a)] += grid.value(a, flat) * t;
    for (int j = n - 1; j >= 0; --j) {
      if (++m[static_cast<std::size_t>(j)] < N) break;
      m[static_cast<std::size_t>(j)] = 0;
    }
  }
  const double scale = std::pow(grid.lambda(), -degree) / static_cast<double>(grid.size());
  for (auto& z : out) z *= scale;
  return out;
}

std::vector<cplx> laurent_coefficient(const TorusGrid& grid, const MultiIndex& a) {
  return laurent_coefficient(grid, std::span<const int>(a.exponents()));
}

double SpectralSummary::variance_model() const { return variance_paper(residues, jacobian, lambda); }

SpectralSummary summarize_grid(const TorusGrid& grid) {
  const int n = grid.dims();
  const int k = grid.codims();
  const int N = grid.points();
  const double lambda = grid.lambda();
  SpectralSummary s;
  s.lambda = lambda;
  s.grid_points = N;
  s.core.assign(static_cast<std::size_t>(k), 0.0);
  s.residues = Eigen::MatrixXcd::Zero(k, n);
  s.jacobian = Eigen::MatrixXcd::Zero(k, n);

  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t st = 1;
  for (int j = n - 1; j >= 0; --j) {
    stride[static_cast<std::size_t>(j)] = st;
    st *= static_cast<std::size_t>(N);
  }

  double mean_sq = 0;
  double core_sq = 0;
  for (int a = 0; a < k; ++a) {
    const auto values = grid.component(a);
    for (const auto& v : values) mean_sq += std::norm(v);
    const auto spec = spectrum(values, n, N);
    s.core[static_cast<std::size_t>(a)] = spec[0];
    core_sq += std::norm(spec[0]);
    for (int b = 0; b < n; ++b) {
      const std::size_t sb = stride[static_cast<std::size_t>(b)];
      s.residues(a, b) = spec[static_cast<std::size_t>(N - 1) * sb] * lambda;
      s.jacobian(a, b) = spec[sb] / lambda;
    }
    // Energy |S_a|^2 equals |c_a|^2 lambda^{2|a|}.
    std::vector<int> m(static_cast<std::size_t>(n), 0);
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
      int negatives = 0;
      int nonzero = 0;
      bool deep_pole = false;
      for (int j = 0; j < n; ++j) {
        const int e = signed_index(m[static_cast<std::size_t>(j)], N);
        if (e < 0) ++negatives;
        if (e < -1) deep_pole = true;
        if (e != 0) ++nonzero;
      }
      if (negatives > 0 && (deep_pole || nonzero > 1)) s.out_of_class_energy += std::norm(spec[flat]);
      for (int j = n - 1; j >= 0; --j) {
        if (++m[static_cast<std::size_t>(j)] < N) break;
        m[static_cast<std::size_t>(j)] = 0;
      }
    }
  }
  mean_sq /= static_cast<double>(grid.size());
  s.variance = std::max(0.0, mean_sq - core_sq);
  s.tail_energy = s.variance - s.variance_model();
  return s;
}

namespace {

double relative_delta(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct Delta {
  double relative = 0;
  double absolute = 0;
  void add(cplx a, cplx b) {
    relative = std::max(relative, relative_delta(a, b));
    absolute = std::max(absolute, std::abs(a - b));
  }
};

Delta compare(const SpectralSummary& prev, const SpectralSummary& cur) {
  Delta d;
  for (std::size_t a = 0; a < cur.core.size(); ++a) d.add(prev.core[a], cur.core[a]);
  for (Eigen::Index i = 0; i < cur.residues.size(); ++i) {
    d.add(prev.residues(i), cur.residues(i));
    d.add(prev.jacobian(i), cur.jacobian(i));
  }
  d.add(prev.variance, cur.variance);
  return d;
}

[[noreturn]] void fail_convergence(int points, double lambda, double delta) {
  throw NonConvergent("torus quadrature did not converge at lambda=" + std::to_string(lambda) + " with " +
                      std::to_string(points) + " points per dimension (last change " + std::to_string(delta) + ")");
}

bool can_double(int points, int dims, const QuadratureOptions& opts) {
  return 2 * points <= opts.max_points && grid_size(2 * points, dims) <= opts.max_grid;
}

/// Adaptive refinement for quantities given as vectors of complex numbers.
template <typename Compute>
std::vector<cplx> refine(int dims, double lambda, const QuadratureOptions& opts, Compute compute) {
  int N = opts.start_points;
  check_grid(dims, N, opts);
  std::vector<cplx> prev = compute(N);
  double delta = INFINITY;
  while (can_double(N, dims, opts)) {
    N *= 2;
    std::vector<cplx> cur = compute(N);
    delta = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) delta = std::max(delta, relative_delta(prev[i], cur[i]));
    if (delta <= opts.tol) return cur;
    prev = std::move(cur);
  }
  fail_convergence(N, lambda, delta);
}

}  // namespace

SpectralSummary spectral_summary(const VectorFunction& f, double lambda, const QuadratureOptions& opts) {
  int N = opts.start_points;
  SpectralSummary prev = summarize_grid(sample_torus(f, lambda, N, opts));
  double delta = INFINITY;
  while (can_double(N, f.dims, opts)) {
    N *= 2;
    SpectralSummary cur = summarize_grid(sample_torus(f, lambda, N, opts));
    const Delta d = compare(prev, cur);
    delta = d.relative;
    if (d.relative <= opts.tol) {
      cur.est_error = d.absolute;
      return cur;
    }
    prev = std::move(cur);
  }
  fail_convergence(N, lambda, delta);
}

void require_in_class(const SpectralSummary& s, double relative_tol) {
  const double scale = std::max(1.0, s.variance);
  if (s.out_of_class_energy > relative_tol * scale) {
    throw NotInClass("function is not of the form core + simple poles + analytic part at lambda=" +
                     std::to_string(s.lambda) + " (energy " + std::to_string(s.out_of_class_energy) +
                     " in higher-order or mixed pole terms)");
  }
}

cplx inner_product_numeric(const VectorFunction& f, const VectorFunction& g, double lambda,
                           const QuadratureOptions& opts) {
  if (f.dims != g.dims || f.codims != g.codims) throw DimensionMismatch("inner_product_numeric: shapes differ");
  const auto r = refine(f.dims, lambda, opts, [&](int N) {
    const TorusGrid gf = sample_torus(f, lambda, N, opts);
    const TorusGrid gg = sample_torus(g, lambda, N, opts);
    cplx sum = 0;
    for (int a = 0; a < f.codims; ++a)
      for (std::size_t i = 0; i < gf.size(); ++i) sum += std::conj(gf.value(a, i)) * gg.value(a, i);
    return std::vector<cplx>{sum / static_cast<double>(gf.size())};
  });
  return r[0];
}

std::vector<cplx> exterior_integral_numeric(const VectorFunction& f, std::span<const int> s, bool conjugate,
                                            double lambda, const QuadratureOptions& opts) {
  if (static_cast<int>(s.size()) != f.dims) throw DimensionMismatch("exterior_integral_numeric: shape dimension");
  const std::vector<int> shape(s.begin(), s.end());
  return refine(f.dims, lambda, opts, [&](int N) {
    const TorusGrid grid = sample_torus(f, lambda, N, opts);
    const auto w = circle(lambda, N);
    std::vector<cplx> sum(static_cast<std::size_t>(f.codims));
    std::vector<int> m(static_cast<std::size_t>(f.dims), 0);
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      cplx weight = 1.0;
      for (int j = 0; j < f.dims; ++j) {
        const cplx wj = w[static_cast<std::size_t>(m[static_cast<std::size_t>(j)])];
        const int p = shape[static_cast<std::size_t>(j)] + 1;
        for (int q = 0; q < std::abs(p); ++q) weight = p > 0 ? weight * wj : weight / wj;
      }
      for (int a = 0; a < f.codims; ++a) {
        const cplx v = grid.value(a, flat);
        sum[static_cast<std::size_t>(a)] += (conjugate ? std::conj(v) : v) * weight;
      }
      for (int j = f.dims - 1; j >= 0; --j) {
        if (++m[static_cast<std::size_t>(j)] < N) break;
        m[static_cast<std::size_t>(j)] = 0;
      }
    }
    for (auto& z : sum) z /= static_cast<double>(grid.size());
    return sum;
  });
}

}  // namespace lens
