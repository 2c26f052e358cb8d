#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "scorelab/harness.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(SCORELAB_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli score command prints reference values") {
  const CliResult hs = run_cli("score --rule hs --density normal:0:1 --x 1");
  CHECK(hs.exit_code == 0);
  CHECK(hs.output == "-1\n");

  const CliResult ls = run_cli("score --rule ls --density normal:0:2 --x 2");
  CHECK(ls.exit_code == 0);
  CHECK(ls.output == "2.112085714\n");
}

TEST_CASE("cli diverge matches the closed-form normal divergences") {
  const CliResult kl = run_cli("diverge --rule ls --p normal:0:2 --q normal:0:1");
  CHECK(kl.exit_code == 0);
  CHECK(kl.output == "0.8068528194\n");
  const CliResult fi = run_cli("diverge --rule fi --p normal:0:2 --q normal:0:1");
  CHECK(fi.exit_code == 0);
  CHECK(fi.output == "2.25\n");
}

TEST_CASE("cli usage errors exit with code 2") {
  const CliResult odd = run_cli("check --rule power:3:0", true);
  CHECK(odd.exit_code == 2);
  CHECK(odd.output.find("n must be even") != std::string::npos);

  const CliResult alias = run_cli("check --score power:3:0", true);
  CHECK(alias.exit_code == 2);
  CHECK(alias.output.find("n must be even") != std::string::npos);

  const CliResult unknown = run_cli("score --rule nope --density normal:0:1 --x 0", true);
  CHECK(unknown.exit_code == 2);

  const CliResult badflag = run_cli("score --bogus 1", true);
  CHECK(badflag.exit_code == 2);
}

TEST_CASE("cli numeric failures exit with code 3") {
  const CliResult zero = run_cli("score --rule hs --density huber:0.3 --x 0", true);
  CHECK(zero.exit_code == 3);
}

TEST_CASE("cli recover emits machine-checkable json") {
  const CliResult rec = run_cli("recover --rule hs --format json");
  REQUIRE(rec.exit_code == 0);
  const auto j = nlohmann::json::parse(rec.output);
  CHECK(std::abs(j["c"].get<double>()) <= 1e-9);
  CHECK(j["d2_residual"].get<double>() <= 1e-6);
  bool found = false;
  for (const auto& s : j["k0_samples"]) {
    if (s["y1"].get<double>() == 2.0) {
      CHECK(s["k0"].get<double>() == doctest::Approx(-4.0).epsilon(1e-7));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("cli construct evaluates the tangent score at a point") {
  const CliResult c = run_cli(
      "construct --kernel power:2:0 --x 0 --y0 0 --y1 2 --y2 1 --format json");
  REQUIRE(c.exit_code == 0);
  const auto j = nlohmann::json::parse(c.output);
  CHECK(j["value"].get<double>() == doctest::Approx(6.0));  // y1^2 + 2 y2
  CHECK(j["verdict"] == "strict-on-grid");
}

TEST_CASE("cli euler reports the logarithmic constant") {
  const CliResult e = run_cli("euler --rule ls --density normal:0:1 --format json");
  REQUIRE(e.exit_code == 0);
  const auto j = nlohmann::json::parse(e.output);
  CHECK(j["c_p_estimate"].get<double>() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(j["max_abs_deviation"].get<double>() <= 1e-6);
}

TEST_CASE("cli help is golden-file stable and lists every subcommand") {
  const CliResult help = run_cli("--help", true);
  CHECK(help.exit_code == 0);
  for (const char* sub :
       {"score", "construct", "recover", "check", "diverge", "euler", "synth", "evaluate"}) {
    CHECK(help.output.find(sub) != std::string::npos);
  }
  const std::string golden = read_file(std::string(SCORELAB_GOLDEN_DIR) + "/help.txt");
  CHECK(help.output == golden);
}

TEST_CASE("cli synth feeds evaluate bit-exactly like the in-process pipeline") {
  const std::string csv = "cli_roundtrip.csv";
  const CliResult synth = run_cli("synth --days 55 --stations 2 --members 3 --seed 9 --out " + csv);
  REQUIRE(synth.exit_code == 0);

  const CliResult eval = run_cli("evaluate --input " + csv + " --format json");
  REQUIRE(eval.exit_code == 0);

  // the same pipeline in process
  const auto cases = scorelab::load_cases(csv);
  scorelab::EvaluateConfig cfg;
  const scorelab::Evaluation ev = scorelab::rolling_evaluate(cases, cfg);
  CHECK(eval.output == scorelab::format_report_json(ev) + "\n");

  // bit-identical on a rerun
  const CliResult again = run_cli("evaluate --input " + csv + " --format json");
  CHECK(again.output == eval.output);
}

TEST_CASE("cli check finds the broken rule improper via negative margin") {
  const CliResult ok = run_cli("check --rule hs --format json");
  REQUIRE(ok.exit_code == 0);
  const auto j = nlohmann::json::parse(ok.output);
  CHECK(j["min_margin"].get<double>() >= -1e-7);
  CHECK(j["strict_violations"].empty());
}
