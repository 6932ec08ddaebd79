#include "lens/random_instances.hpp"

namespace lens {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

ComplexRational random_coefficient(Rng& rng, int range) {
  const int re = uniform_int(rng, -range, range);
  const int im = uniform_int(rng, -range, range);
  return ComplexRational(re, im);
}

MultiIndex random_exponent(Rng& rng, int n, int degree) {
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < degree; ++u) ++e[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
  return MultiIndex(std::move(e));
}

LaurentPoly random_tail(Rng& rng, int dims, int codims, int min_degree, int max_degree, int max_terms, int range) {
  LaurentPoly::Terms terms;
  const int count = uniform_int(rng, 1, std::max(1, max_terms));
  for (int t = 0; t < count; ++t) {
    const MultiIndex idx = random_exponent(rng, dims, uniform_int(rng, min_degree, max_degree));
    auto [it, _] = terms.try_emplace(idx, CoefficientVector(static_cast<std::size_t>(codims)));
    for (auto& c : it->second) c = random_coefficient(rng, range);
  }
  return LaurentPoly(dims, codims, std::move(terms));
}

LaurentPoly random_decomposable(Rng& rng, int dims, int codims, const RandomPolyOptions& opts) {
  const auto k = static_cast<std::size_t>(codims);
  LaurentPoly::Terms terms;
  auto coeffs = [&] {
    CoefficientVector v(k);
    for (auto& c : v) c = random_coefficient(rng, opts.coeff_range);
    return v;
  };
  if (opts.with_core) terms.emplace(MultiIndex::zero(dims), coeffs());
  for (int b = 0; b < dims; ++b) {
    if (opts.with_poles) terms.emplace(MultiIndex::unit(dims, b, -1), coeffs());
    if (opts.with_linear) terms.emplace(MultiIndex::unit(dims, b, 1), coeffs());
  }
  LaurentPoly f(dims, codims, std::move(terms));
  if (opts.max_tail_terms > 0) {
    f = f + random_tail(rng, dims, codims, opts.min_tail_degree, opts.max_degree, opts.max_tail_terms,
                        opts.coeff_range);
  }
  return f;
}

LaurentPoly random_decomposable(Rng& rng, const RandomPolyOptions& opts) {
  const int n = uniform_int(rng, opts.min_dims, opts.max_dims);
  const int k = uniform_int(rng, opts.min_codims, opts.max_codims);
  return random_decomposable(rng, n, k, opts);
}

}  // namespace lens
