#ifndef LENS_VERIFICATION_HPP
#define LENS_VERIFICATION_HPP

// Randomised invariant checks shared by `lens verify` and the acceptance
// tests. Every property takes its own case count and tolerance; suites bundle
// them at sizes that run in a few seconds.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lens/random_instances.hpp"

namespace lens {

struct PropertyResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  double worst = 0;    // largest observed error, where one is measured
  std::string detail;  // first failure, or a note for erratum subtests
  bool passed() const { return cases > 0 && failures == 0; }
};

namespace props {

// measure
PropertyResult full_disc_measure();
PropertyResult partition_additivity(Rng& rng, int cases, double tol);
PropertyResult product_multiplicativity(Rng& rng, int cases, double tol);
PropertyResult measure_monotonicity(Rng& rng, int cases);
PropertyResult measure_scale_invariance(Rng& rng, int cases);
PropertyResult arc_integral_agreement(Rng& rng, int cases, double tol);
PropertyResult semiring_closure(Rng& rng, int cases, double tol);

// tails and the six integral shapes
PropertyResult tail_shapes_exact(Rng& rng, int cases);
PropertyResult tail_shapes_quadrature(Rng& rng, int cases, double tol);
/// oint conj(P) P / prod w equals the Parseval tail sum, not 0; P = w^2
/// gives lambda^4.
PropertyResult tail_self_pairing_erratum(Rng& rng, int cases, double tol);

// component moments
PropertyResult component_expectations(Rng& rng, int cases);
PropertyResult component_orthogonality(Rng& rng, int cases);
PropertyResult component_norms(Rng& rng, int cases);
PropertyResult expectation_scale_independence(Rng& rng, int cases, double tol);

// variance
PropertyResult variance_exact_subclass(Rng& rng, int cases, double tol);
PropertyResult parseval_consistency(Rng& rng, int cases);
/// variance_exact - variance_paper equals the tail energy exactly: the
/// formula is a lower bound, tight only without a tail.
PropertyResult variance_tail_gap_erratum(Rng& rng, int cases);
PropertyResult uncertainty_bound_sweep(Rng& rng, int cases, int steps, double tol);
PropertyResult oracle_quadrature_agreement(Rng& rng, int cases, double tol);
PropertyResult dft_coefficients_exact(Rng& rng, int cases, double tol);
PropertyResult optimal_scale_reproduction(Rng& rng, int cases, double tol);
/// <conj z, f> = lambda^2 <1/z, f> = Tr(eta), <z, f> = lambda^2 <1/conj z, f>
/// = lambda^2 Tr(D); counts how often the unscaled Tr(D) would have failed.
PropertyResult trace_identities(Rng& rng, int cases, double tol);

// coordinate changes
PropertyResult morph_family_1d(double tol);
PropertyResult morph_family_2d(double tol);
/// Full pullback Jacobian minus D'J equals eta' a^2 / c^3 for g = c w + a w^2.
PropertyResult morph_full_pullback_erratum(double tol);
PropertyResult morph_composition(double tol);
PropertyResult morph_identity(double tol);

}  // namespace props

struct SuiteReport {
  std::string name;
  std::vector<PropertyResult> properties;
  bool passed() const;
};

/// measure, prop1, lemma, theorem, morph.
const std::vector<std::string>& suite_names();
bool is_suite_name(std::string_view name);  // also accepts "all"

/// Deterministic in (name, seed). Throws std::invalid_argument for an
/// unknown name.
SuiteReport run_suite(std::string_view name, std::uint64_t seed);
std::string render(const SuiteReport& report);

}  // namespace lens

#endif  // LENS_VERIFICATION_HPP
