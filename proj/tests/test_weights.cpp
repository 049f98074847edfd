#include <doctest.h>

#include "temb/weights.hpp"

using namespace temb;

TEST_CASE("two-periodic-1 shortcut expands per the four-pattern table") {
  WeightSpec s;
  s.variant = Variant::TwoPeriodic1;
  s.param = 0.5;
  auto w = build_weights(s);
  CHECK(w.k == 2);
  CHECK(w.l == 2);
  CHECK(w.alpha[0][0] == doctest::Approx(2.0));
  CHECK(w.beta[0][0] == doctest::Approx(2.0));
  CHECK(w.alpha[0][1] == doctest::Approx(0.5));
  CHECK(w.beta[0][1] == doctest::Approx(0.5));
  CHECK(w.gamma[0][0] == 1.0);
  CHECK(w.delta[1][1] == 1.0);
  // row 2 = inverse of row 1
  CHECK(w.alpha[1][0] == doctest::Approx(0.5));
  CHECK(w.beta[1][1] == doctest::Approx(2.0));
}

TEST_CASE("1x1 weights validate the strict inequalities") {
  WeightSpec s;
  s.variant = Variant::OneByL;
  s.alpha = {{2.0}};
  s.gamma = {{1.0}};
  s.beta = {{0.5}};
  auto w = build_weights(s);
  CHECK(w.l == 1);
  CHECK(w.variant == Variant::OneByL);
}

TEST_CASE("1x2 with equal betas is rejected by distinctness") {
  WeightSpec s;
  s.variant = Variant::OneByL;
  s.alpha = {{2.0, 3.0}};
  s.gamma = {{1.0, 1.0}};
  s.beta = {{0.5, 0.5}};
  CHECK_THROWS_AS(build_weights(s), VariantViolation);
}

TEST_CASE("beta >= 1 is rejected for 1xl") {
  WeightSpec s;
  s.variant = Variant::OneByL;
  s.alpha = {{2.0}};
  s.gamma = {{1.0}};
  s.beta = {{1.0}};
  CHECK_THROWS_AS(build_weights(s), VariantViolation);
}

TEST_CASE("nonpositive weights are rejected") {
  WeightSpec s;
  s.variant = Variant::General;
  s.k = 1;
  s.l = 1;
  s.alpha = {{-2.0}};
  s.beta = {{0.5}};
  s.gamma = {{1.0}};
  CHECK_THROWS_AS(build_weights(s), NonPositiveWeight);
}

TEST_CASE("2xl product condition enforced") {
  WeightSpec s;
  s.variant = Variant::TwoByL;
  s.alpha = {{2.0, 0.5}};
  s.beta = {{1.0, 0.9}};
  CHECK_THROWS_AS(build_weights(s), VariantViolation);
  s.beta = {{0.5, 2.0}};
  auto w = build_weights(s);
  CHECK(w.alpha[1][0] == doctest::Approx(0.5));
}

TEST_CASE("delta normalization records the gauge") {
  WeightSpec s;
  s.variant = Variant::General;
  s.k = 1;
  s.l = 1;
  s.alpha = {{4.0}};
  s.beta = {{1.0}};
  s.gamma = {{2.0}};
  s.delta = {{2.0}};
  auto w = build_weights(s);
  CHECK(w.delta[0][0] == 1.0);
  CHECK(w.alpha[0][0] == doctest::Approx(2.0));
  CHECK(w.delta_gauge[0][0] == doctest::Approx(2.0));
}

TEST_CASE("weight spec JSON round trip and unknown-key rejection") {
  auto s = parse_weight_spec(R"({"variant":"two-periodic-1","param":0.7})");
  auto w = build_weights(s);
  CHECK(w.alpha[0][0] == doctest::Approx(1.0 / 0.7));
  CHECK_THROWS_AS(parse_weight_spec(R"({"variant":"1xl","bogus":1})"), ConfigError);
}
