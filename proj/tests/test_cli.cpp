#include <doctest.h>

#include <json.hpp>

#include "cli_runner.hpp"

namespace {

cli::Run run(const std::string& args) { return cli::run(LENS_CLI, args); }

std::string golden(const std::string& name) { return cli::slurp(std::string(LENS_GOLDEN_DIR) + "/" + name); }

}  // namespace

TEST_CASE("documented examples match goldens byte for byte") {
  for (const auto& g : cli::kGoldens) {
    const cli::Run r = run(g.args);
    CAPTURE(g.args);
    CAPTURE(r.err);
    CHECK(r.code == 0);
    CHECK(r.out == golden(g.file));
  }
}

TEST_CASE("analyze JSON round trip") {
  const auto j = nlohmann::json::parse(run("analyze --expr '1/w + w' --n 1 --lambda 1 --json").out);
  CHECK(j["variance"].get<double>() == doctest::Approx(2.0));
  CHECK(j["eta"][0][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["jacobian"][0][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(nlohmann::json::parse(j.dump()) == j);

  // 1/w1 + 2 w2 + w1^2 at 1/2: 1/l^2 + 4 l^2 + l^4
  const auto k = nlohmann::json::parse(golden("analyze_two_dims.json"));
  CHECK(k["variance"].get<double>() == doctest::Approx(5.0625).epsilon(1e-12));
  CHECK(k["tail_energy"].get<double>() == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(k["jacobian"][0][1][0].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("golden contents carry the expected values") {
  CHECK(golden("analyze_pole_plus_linear.txt").find("variance        2\n") != std::string::npos);
  const std::string csv = golden("sweep_pole_plus_linear.csv");
  CHECK(csv.find("\n1,2,2,1,0\n") != std::string::npos);
  CHECK(csv.find("# lambda_star_closed=1\n") != std::string::npos);
  CHECK(golden("sweep_linear.csv").find("# lambda_star_closed=Degenerate(ZeroResidue)") != std::string::npos);
  CHECK(golden("sweep_linear.csv").find("\n0.25,0.0625,") != std::string::npos);
  CHECK(golden("measure_quarter.txt") == "0.25\n");
  CHECK(golden("measure_full.txt") == "1\n");
  CHECK(golden("measure_product.txt") == "0.125\n");
  CHECK(golden("transform_pole.txt").find("eta_direct          [[(0.5, 0)]]") != std::string::npos);
  CHECK(golden("transform_linear.txt").find("jacobian_predicted  [[(2, 0)]]") != std::string::npos);
}

TEST_CASE("sweep writes to --out") {
  const std::string path = cli::temp_path();
  const cli::Run r = run("sweep --expr '1/w' --n 1 --lambda-min 0.25 --lambda-max 4 --steps 33 --out '" + path + "'");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(cli::slurp(path) == golden("sweep_pole.csv"));
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  for (const auto& c : cli::kExitCodes) {
    const cli::Run r = run(c.args);
    CAPTURE(c.args);
    CAPTURE(r.err);
    CHECK(r.code == c.code);
    CHECK(r.err.find(c.stderr_contains) != std::string::npos);
  }
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 1);
  CHECK(run("measure --dims 2 --interval 0:1").code == 1);
  CHECK(run("measure --interval 0:4").code == 2);
  CHECK(run("analyze --expr '1/(w - 0.4)' --n 1 --lambda 0.5").code == 3);
  CHECK(run("verify --suite measure --seed 3").code == 0);
}
