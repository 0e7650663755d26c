#include <doctest.h>

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "common/cli_runner.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = PHASEKIT_CLI_PATH;

json load(const fs::path& p) { return json::parse(clitest::slurp(p)); }

double csv_max(const fs::path& p, int column) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  double best = -1e300;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c <= column; ++c) std::getline(ss, cell, ',');
    best = std::max(best, std::stod(cell));
  }
  return best;
}

} // namespace

TEST_CASE("density of the ground state and the exit-code contract") {
  const auto dir = clitest::scratch("cli-density");
  const auto r = clitest::run(kCli, "density --state fock:0 --out g", dir);
  REQUIRE(r.code == 0);
  CHECK(std::abs(csv_max(dir / "g/density.csv", 2) - 0.159155) < 1e-6);
  // stdout carries only the paths written
  CHECK(r.out.find("g/density.csv\n") != std::string::npos);
  CHECK(r.out.find("g/manifest.json\n") != std::string::npos);
  const json manifest = load(dir / "g/manifest.json");
  CHECK(manifest.at("command") == "density");
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);

  CHECK(clitest::run(kCli, "density --state fock:0 --grid off", dir).code == 3);
  CHECK(clitest::run(kCli, "density --state fock:0 --grid 2", dir).code == 3);
  CHECK(clitest::run(kCli, "--D 1 density --state fock:0", dir).code == 2);
  CHECK(clitest::run(kCli, "density --state fock:0 --D 1", dir).code == 2);
  CHECK(clitest::run(kCli, "density --state nonsense", dir).code == 2);
  CHECK(clitest::run(kCli, "density --bogus", dir).code == 2);
  CHECK(clitest::run(kCli, "--sigma -1 density", dir).code == 2);
  CHECK(clitest::run(kCli, "--generator other density", dir).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("identical seed gives identical bytes") {
  const auto dir = clitest::scratch("cli-determinism");
  for (const char* tag : {"a", "b"})
    REQUIRE(clitest::run(kCli, std::string("density --state random --seed 7 --out ") + tag, dir).code == 0);
  CHECK(clitest::slurp(dir / "a/density.csv") == clitest::slurp(dir / "b/density.csv"));
  CHECK(clitest::same_tree(dir / "a", dir / "b"));
  REQUIRE(clitest::run(kCli, "density --state random --seed 8 --out c", dir).code == 0);
  CHECK(clitest::slurp(dir / "a/density.csv") != clitest::slurp(dir / "c/density.csv"));
  fs::remove_all(dir);
}

TEST_CASE("expect") {
  const auto dir = clitest::scratch("cli-expect");
  REQUIRE(clitest::run(kCli, "expect --state fock:1 --symbols H,Q --out e", dir).code == 0);
  const json rows = load(dir / "e/expect.json").at("rows");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("symbol") == "H");
  CHECK(rows[0].at("quantum").get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(rows[0].at("classical").get<double>() == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(rows[0].at("discrepancy").get<double>() < 1e-6);
  CHECK(std::abs(rows[1].at("classical").get<double>()) < 1e-8);

  REQUIRE(clitest::run(kCli, "--D 12 expect --state random --seed 3 --out r", dir).code == 0);
  const json all = load(dir / "r/expect.json").at("rows");
  CHECK(all.size() == 5);
  for (const auto& row : all) CHECK(row.at("discrepancy").get<double>() < 1e-6);
  CHECK(clitest::run(kCli, "expect --symbols Z", dir).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("reconstruct roundtrip, malformed input and under-sampling") {
  const auto dir = clitest::scratch("cli-reconstruct");
  REQUIRE(clitest::run(kCli, "--D 6 density --state random --seed 5 --out d", dir).code == 0);
  REQUIRE(clitest::run(kCli, "--D 6 reconstruct --input d/density.csv --truth d/state.json --out r", dir).code == 0);
  const json rep = load(dir / "r/reconstruction.json");
  CHECK(rep.at("rank") == 36);
  CHECK(rep.at("trace_distance").get<double>() < 1e-6);

  std::ofstream(dir / "bad.csv") << "q,p,rho\n0,0,1\n0,1,x\n";
  CHECK(clitest::run(kCli, "--D 6 reconstruct --input bad.csv", dir).code == 2);
  std::ofstream(dir / "ragged.csv") << "q,p,rho\n0,0,1\n0,1\n";
  CHECK(clitest::run(kCli, "--D 6 reconstruct --input ragged.csv", dir).code == 2);
  CHECK(clitest::run(kCli, "--D 6 reconstruct --input missing.csv", dir).code == 2);

  {
    std::ofstream small(dir / "small.csv");
    small << "q,p,rho\n";
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) small << 0.5 * i - 0.5 << ',' << 0.5 * j - 0.5 << ",0.1\n";
  }
  CHECK(clitest::run(kCli, "--D 6 reconstruct --input small.csv --out k", dir).code == 4);
  const json rank = load(dir / "k/rank_report.json");
  CHECK(rank.at("rank") == 9);
  CHECK(rank.at("required") == 36);
  fs::remove_all(dir);
}

TEST_CASE("every data-producing command is deterministic") {
  const auto dir = clitest::scratch("cli-all");
  const std::vector<std::string> commands = {
      "--D 8 density --state random",
      "--D 8 marginals --state random",
      "--D 8 expect --state random",
      "--D 4 effects --tiles 6",
      "--D 8 evolve --state random_pure --times 0,0.5",
      "--D 8 bargmann --state random_pure",
  };
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const std::string base = commands[k] + " --seed 11 --out ";
    const std::string a = "a" + std::to_string(k), b = "b" + std::to_string(k);
    CAPTURE(commands[k]);
    REQUIRE(clitest::run(kCli, base + a, dir).code == 0);
    REQUIRE(clitest::run(kCli, base + b, dir).code == 0);
    CHECK(clitest::same_tree(dir / a, dir / b));
  }
  fs::remove_all(dir);
}

TEST_CASE("marginals, effects, evolve, bargmann outputs") {
  const auto dir = clitest::scratch("cli-outputs");
  REQUIRE(clitest::run(kCli, "--D 8 marginals --state fock:1 --out m", dir).code == 0);
  const json m = load(dir / "m/marginals.json");
  CHECK(m.at("uncertainty").at("additivity_ok") == true);
  CHECK(m.at("eta_q").at("variance").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  for (const char* f : {"marginal_q.csv", "marginal_p.csv", "confidence_q.csv", "confidence_p.csv"})
    CHECK(fs::exists(dir / "m" / f));

  REQUIRE(clitest::run(kCli, "--D 4 effects --out e", dir).code == 0);
  CHECK(load(dir / "e/completeness.json").at("rank") == 16);
  CHECK(load(dir / "e/effects.json").at("effects").size() == 36);
  REQUIRE(clitest::run(kCli, "--D 4 effects --cell -1,1,-1,1 --cell 0,2,0,2 --out c", dir).code == 0);
  CHECK(load(dir / "c/completeness.json").at("too_few_cells") == true);

  REQUIRE(clitest::run(kCli, "--D 8 evolve --state coherent:1,0 --times 0,1 --out v", dir).code == 0);
  const json v = load(dir / "v/evolve.json").at("times");
  REQUIRE(v.size() == 2);
  CHECK(v[1].at("liouville").at("max_error").get<double>() < 5e-4);
  REQUIRE(clitest::run(kCli, "--D 8 --sigma 1.0 evolve --state fock:1 --out u", dir).code == 0);
  CHECK(load(dir / "u/evolve.json").at("times")[0].at("liouville").is_string());

  REQUIRE(clitest::run(kCli, "--D 8 bargmann --state fock:2 --out g", dir).code == 0);
  const json g = load(dir / "g/bargmann.json");
  CHECK(g.at("norm2").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.at("coefficients")[2][0].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(clitest::run(kCli, "--D 8 bargmann --state random", dir).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("config file, with flags taking precedence") {
  const auto dir = clitest::scratch("cli-config");
  std::ofstream(dir / "run.toml") << "D = 6\nsigma = \"1.0\"\nseed = 3\n";
  REQUIRE(clitest::run(kCli, "--config run.toml density --state fock:0 --out f", dir).code == 0);
  json cfg = load(dir / "f/manifest.json").at("config");
  CHECK(cfg.at("D") == 6);
  CHECK(cfg.at("sigma") == 1.0);
  REQUIRE(clitest::run(kCli, "--config run.toml --D 8 density --state fock:0 --out g", dir).code == 0);
  cfg = load(dir / "g/manifest.json").at("config");
  CHECK(cfg.at("D") == 8);
  CHECK(cfg.at("seed") == 3);
  std::ofstream(dir / "broken.toml") << "D = \n";
  CHECK(clitest::run(kCli, "--config broken.toml density", dir).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("check suites") {
  const auto dir = clitest::scratch("cli-check");
  const auto r = clitest::run(kCli, "check --suite all --out all", dir);
  CHECK(r.code == 0);
  const json rep = load(dir / "all/check.json");
  CHECK(rep.at("failed") == 0);
  CHECK(rep.at("passed").get<int>() >= 20);

  REQUIRE(clitest::run(kCli, "--D 8 --sigma 1.0 check --suite dynamics --out u", dir).code == 0);
  bool liouville_skipped = false, generator_ran = false;
  const json checks = load(dir / "u/check.json").at("checks");
  for (const auto& c : checks) {
    if (c.at("name") == "liouville_match")
      liouville_skipped = c.at("status") == "skipped" && !c.at("reason").get<std::string>().empty();
    if (c.at("name") == "generator_residual") generator_ran = c.at("status") == "pass";
  }
  CHECK(liouville_skipped);
  CHECK(generator_ran);

  CHECK(clitest::run(kCli, "check --suite nothing", dir).code == 2);
  CHECK(clitest::run(kCli, "--D 1 check", dir).code == 2);
  fs::remove_all(dir);
}
