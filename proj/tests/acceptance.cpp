// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cli_runner.hpp"
#include "expr_fixtures.hpp"
#include "lens/errors.hpp"
#include "lens/expr.hpp"
#include "lens/verification.hpp"

using namespace lens;

namespace {

constexpr double kTimeLimit = 30.0;  // seconds per criterion

struct Outcome {
  bool ok = true;
  std::string detail;

  void add(const PropertyResult& p) {
    ok = ok && p.passed();
    if (!detail.empty()) detail += "; ";
    detail += fmt::format("{} {}/{} worst={:.3g}", p.name, p.cases - p.failures, p.cases, p.worst);
    if (!p.detail.empty()) {
      std::string note = p.detail;
      std::replace(note.begin(), note.end(), '\n', ' ');
      detail += " [" + note + "]";
    }
  }
};

Rng seeded(int criterion) {
  std::seed_seq seq{20241016, criterion};
  return Rng(seq);
}

Outcome measure_suite() {
  Rng rng = seeded(1);
  Outcome o;
  o.add(props::full_disc_measure());
  o.add(props::partition_additivity(rng, 1000, 1e-12));
  o.add(props::product_multiplicativity(rng, 100, 1e-12));
  return o;
}

Outcome exact_subclass() {
  Rng rng = seeded(2);
  Outcome o;
  o.add(props::variance_exact_subclass(rng, 200, 1e-9));
  return o;
}

Outcome uncertainty_bound() {
  Rng rng = seeded(3);
  Outcome o;
  o.add(props::uncertainty_bound_sweep(rng, 200, 33, 1e-9));
  return o;
}

Outcome optimal_scale() {
  Rng rng = seeded(4);
  Outcome o;
  o.add(props::optimal_scale_reproduction(rng, 50, 1e-3));
  return o;
}

Outcome oracle_agreement() {
  Rng rng = seeded(5);
  Outcome o;
  o.add(props::oracle_quadrature_agreement(rng, 200, 1e-9));
  o.add(props::dft_coefficients_exact(rng, 200, 1e-12));
  return o;
}

Outcome tail_shapes() {
  Rng rng = seeded(6);
  Outcome o;
  o.add(props::tail_shapes_exact(rng, 100));
  o.add(props::tail_shapes_quadrature(rng, 100, 1e-9));
  o.add(props::tail_self_pairing_erratum(rng, 100, 1e-9));
  return o;
}

Outcome transformation_laws() {
  Outcome o;
  o.add(props::morph_family_1d(1e-8));
  o.add(props::morph_family_2d(1e-8));
  return o;
}

Outcome trace_identities() {
  Rng rng = seeded(8);
  Outcome o;
  o.add(props::trace_identities(rng, 50, 1e-9));
  return o;
}

Outcome parser() {
  Rng rng = seeded(9);
  const std::string data = LENS_TEST_DATA;

  PropertyResult trip{"round_trip", 0, 0, 0, ""};
  std::vector<Expr> exprs;
  for (const auto& c : fixtures::read_corpus(data + "/valid_exprs.txt", false)) exprs.push_back(parse(c.text, c.dims));
  while (exprs.size() < 100) exprs.push_back(fixtures::random_expr(rng));
  for (const Expr& e : exprs) {
    ++trip.cases;
    const std::string text = print(e);
    if (!structurally_equal(parse(text, e.dims()), e)) {
      ++trip.failures;
      if (trip.detail.empty()) trip.detail = text;
    }
  }

  PropertyResult bad{"malformed_offsets", 0, 0, 0, ""};
  for (const auto& c : fixtures::read_corpus(data + "/malformed_exprs.txt", true)) {
    ++bad.cases;
    try {
      parse(c.text, c.dims);
      ++bad.failures;
      if (bad.detail.empty()) bad.detail = "accepted: " + c.text;
    } catch (const ParseError& err) {
      if (err.offset() != c.offset) {
        ++bad.failures;
        if (bad.detail.empty()) bad.detail = fmt::format("{}: offset {} expected {}", c.text, err.offset(), c.offset);
      }
    }
  }
  if (bad.cases != 30) bad.failures += 1;

  PropertyResult agree{"laurent_eval_agreement", 0, 0, 0, ""};
  for (int c = 0; agree.cases < 100; ++c) {
    const int dims = uniform_int(rng, 1, 3);
    const Expr e = c % 2 == 0 ? parse(to_dsl(random_decomposable(rng, dims, uniform_int(rng, 1, 2))), dims)
                              : Expr(dims, 'w', {fixtures::random_node(rng, dims, 3)});
    LaurentPoly f(dims, e.codims());
    try {
      f = to_laurent(e);
    } catch (const PreconditionError&) {
      continue;
    }
    ++agree.cases;
    const Evaluator ev(e);
    bool failed = false;
    for (int p = 0; p < 100; ++p) {
      const auto w = fixtures::torus_point(rng, dims, std::uniform_real_distribution<double>(0.5, 1.5)(rng));
      std::vector<std::complex<double>> direct;
      try {
        direct = ev(w);
      } catch (const DivisionNearZero&) {
        continue;
      }
      const auto oracle = f.evaluate(w);
      for (std::size_t a = 0; a < oracle.size(); ++a) {
        const double r = fixtures::rel(direct[a], oracle[a]);
        agree.worst = std::max(agree.worst, r);
        failed = failed || r > 1e-12;
      }
    }
    if (failed) ++agree.failures;
  }

  Outcome o;
  o.add(trip);
  o.add(bad);
  o.add(agree);
  return o;
}

Outcome cli_contract() {
  const std::string golden = LENS_GOLDEN_DIR;
  PropertyResult bytes{"golden_bytes", 0, 0, 0, ""};
  for (const auto& g : cli::kGoldens) {
    ++bytes.cases;
    const cli::Run r = cli::run(LENS_CLI, g.args);
    if (r.code != 0 || r.out != cli::slurp(golden + "/" + g.file)) {
      ++bytes.failures;
      if (bytes.detail.empty()) bytes.detail = g.file;
    }
  }
  PropertyResult codes{"exit_codes", 0, 0, 0, ""};
  for (const auto& c : cli::kExitCodes) {
    ++codes.cases;
    const cli::Run r = cli::run(LENS_CLI, c.args);
    if (r.code != c.code || r.err.find(c.stderr_contains) == std::string::npos) {
      ++codes.failures;
      if (codes.detail.empty()) codes.detail = fmt::format("{} -> {}", c.args, r.code);
    }
  }
  Outcome o;
  o.add(bytes);
  o.add(codes);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "measure suite", measure_suite},
      {2, "exact variance on the simple-pole subclass", exact_subclass},
      {3, "uncertainty floor across a 33-point sweep", uncertainty_bound},
      {4, "optimal scale reproduction", optimal_scale},
      {5, "oracle and quadrature agree", oracle_agreement},
      {6, "vanishing integral shapes and tail pairing", tail_shapes},
      {7, "transformation laws", transformation_laws},
      {8, "trace identities", trace_identities},
      {9, "parser corpora", parser},
      {10, "CLI goldens and exit codes", cli_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > kTimeLimit) {
      o.ok = false;
      o.detail += fmt::format("; over the {:.0f} s limit", kTimeLimit);
    }
    if (!o.ok) ++failed;
    fmt::print("{} criterion {}: {} ({:.2f} s) {}\n", o.ok ? "PASS" : "FAIL", c.id, c.title, seconds, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
