#ifndef LENS_RANDOM_INSTANCES_HPP
#define LENS_RANDOM_INSTANCES_HPP

#include <random>

#include "lens/laurent.hpp"

namespace lens {

using Rng = std::mt19937_64;

struct RandomPolyOptions {
  int min_dims = 1;
  int max_dims = 3;
  int min_codims = 1;
  int max_codims = 2;
  int coeff_range = 3;  // integer real and imaginary parts in [-range, range]
  bool with_core = true;
  bool with_poles = true;
  bool with_linear = true;
  int max_tail_terms = 3;  // 0 gives the tail-free subclass
  int min_tail_degree = 2;
  int max_degree = 4;
};

int uniform_int(Rng& rng, int lo, int hi);
ComplexRational random_coefficient(Rng& rng, int range);
/// Exponent vector of n non-negative entries with the given total degree.
MultiIndex random_exponent(Rng& rng, int n, int degree);

/// Random member of the decomposable class: core + sum eta_b / w_b +
/// sum D_b w_b + a tail of analytic terms of degree >= min_tail_degree.
LaurentPoly random_decomposable(Rng& rng, const RandomPolyOptions& opts = {});
LaurentPoly random_decomposable(Rng& rng, int dims, int codims, const RandomPolyOptions& opts = {});

/// Tail only: 1..max_terms analytic monomials of degree in [min_degree, max_degree].
LaurentPoly random_tail(Rng& rng, int dims, int codims, int min_degree, int max_degree, int max_terms, int range);

}  // namespace lens

#endif  // LENS_RANDOM_INSTANCES_HPP
