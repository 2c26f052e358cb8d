#include <doctest.h>

#include "scorelab/errors.hpp"
#include "scorelab/grammar.hpp"

using namespace scorelab;

TEST_CASE("density mini-grammar") {
  const Density n = parse_density("normal:0:1");
  CHECK(n.kind() == Density::Kind::Normal);
  CHECK(n.pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));

  const Density lg = parse_density("logistic:-1:2");
  CHECK(lg.kind() == Density::Kind::Logistic);
  CHECK(lg.param1() == -1.0);

  const Density h = parse_density("huber:0.3");
  CHECK(h.kind() == Density::Kind::TwoPieceGamma);

  const Density m = parse_density("mix:0.3:normal:0:1:0.7:normal:3:2");
  CHECK(m.kind() == Density::Kind::Mixture);
  CHECK(m.weights().size() == 2);
  CHECK(m.components()[1].param1() == 3.0);

  CHECK_THROWS_AS(parse_density("normal:0"), ParseError);
  CHECK_THROWS_AS(parse_density("cauchy:0:1"), ParseError);
  CHECK_THROWS_AS(parse_density("normal:0:1:extra"), ParseError);
  CHECK_THROWS_AS(parse_density("mix:0.5:normal:0:1:0.6:normal:1:1"), InvalidWeights);
}

TEST_CASE("density json grammar round trip") {
  const auto j = nlohmann::json::parse(
      R"({"kind":"mixture","weights":[0.5,0.5],
          "components":[{"kind":"normal","mu":-1,"sigma":1},
                        {"kind":"logistic","location":1,"scale":2}]})");
  const Density d = parse_density_json(j);
  CHECK(d.kind() == Density::Kind::Mixture);
  const Density back = parse_density_json(density_to_json(d));
  for (double x : {-3.0, 0.0, 2.5}) {
    CHECK(back.pdf(x) == d.pdf(x));
  }
  // the mini-grammar entry point also accepts inline JSON
  const Density inline_json = parse_density(R"({"kind":"normal","mu":0,"sigma":1})");
  CHECK(inline_json.kind() == Density::Kind::Normal);
  // huber alias
  CHECK(parse_density_json(nlohmann::json::parse(R"({"kind":"huber","alpha":0.4})")).kind() ==
        Density::Kind::TwoPieceGamma);

  CHECK_THROWS_AS(parse_density_json(nlohmann::json::parse(R"({"mu":0})")), ParseError);
  CHECK_THROWS_AS(parse_density_json(nlohmann::json::parse(R"({"kind":"normal"})")),
                  ParseError);
}

TEST_CASE("score rule identifiers") {
  CHECK(parse_score_rule("ls").local.order == 0);
  CHECK(parse_score_rule("hs").local.label == "hs");
  CHECK(parse_score_rule("power:4:-1").local.label == "power:4:-1");
  CHECK_FALSE(parse_score_rule("qs").is_local);
  CHECK_FALSE(parse_score_rule("sphs").is_local);
  CHECK_THROWS_AS(parse_score_rule("power:3:0"), InvalidOrder);
  CHECK_THROWS_AS(parse_score_rule("crps"), ParseError);

  const Density n01 = Density::normal(0, 1);
  CHECK(parse_score_rule("hs").point(1.0, n01) == doctest::Approx(-1.0));
}

TEST_CASE("kernel identifiers") {
  CHECK(parse_kernel("logcosh").label == "logcosh");
  CHECK(parse_kernel("log").c == -1.0);
  CHECK(parse_kernel("power:2:0").d11_k0(0.0, 1.0) == -2.0);
  CHECK_THROWS_AS(parse_kernel("power:5:0"), InvalidOrder);
  CHECK_THROWS_AS(parse_kernel("gauss"), ParseError);
}
