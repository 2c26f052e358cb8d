#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scorelab/analysis.hpp"
#include "scorelab/construction.hpp"
#include "scorelab/density.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/scores.hpp"

using namespace scorelab;

namespace {

double normal_kl(double sigma, double tau) {
  const double r = sigma * sigma / (tau * tau);
  return 0.5 * (r - 1.0 - std::log(r));
}

double normal_fisher(double sigma, double tau) {
  const double r = sigma * sigma / (tau * tau);
  return (1.0 - r) * (1.0 - r) / (sigma * sigma);
}

LocalScore broken_negated_tail() {
  LocalScore s;
  s.label = "neg-hs-tail";
  s.eval = [](double, double, double y1, double y2) { return -y1 * y1 - 2.0 * y2; };
  return s;
}

LocalScore broken_y1sq() {
  LocalScore s;
  s.label = "y1sq";
  s.eval = [](double, double, double y1, double) { return y1 * y1; };
  s.d0 = [](double, double, double, double) { return 0.0; };
  s.d1 = [](double, double, double y1, double) { return 2.0 * y1; };
  s.d2 = [](double, double, double, double) { return 0.0; };
  s.dx = [](double, double, double, double) { return 0.0; };
  return s;
}

}  // namespace

TEST_CASE("expected scores at the closed-form anchors") {
  const Density n01 = Density::normal(0, 1);
  CHECK(expected_score(logarithmic_score(), n01, n01) ==
        doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e))
            .epsilon(1e-9));
  for (double sigma : {0.6, 1.0, 2.0}) {
    const Density p = Density::normal(0, sigma);
    CHECK(expected_score(hyvarinen_score(), p, p) ==
          doctest::Approx(-1.0 / (sigma * sigma)).epsilon(1e-8));
  }
}

TEST_CASE("self expected score equals the recovered kernel functional") {
  const Density p = Density::normal(0.4, 1.2);
  const Density logi = Density::logistic(0, 1);
  for (const LocalScore& s : {hyvarinen_score(), log_cosh_score()}) {
    const Kernel K = recover_kernel(s, 0.0, 0.5).kernel;
    CHECK(expected_score(s, p, p) == doctest::Approx(phi_functional(K, p)).epsilon(1e-7));
    CHECK(expected_score(s, logi, logi) ==
          doctest::Approx(phi_functional(K, logi)).epsilon(1e-7));
  }
}

TEST_CASE("divergences of mean-zero normals match the closed forms") {
  const Density p = Density::normal(0, 2);
  const Density q = Density::normal(0, 1);
  CHECK(divergence(logarithmic_score(), p, q) ==
        doctest::Approx(0.8068528194400547).epsilon(1e-6));
  CHECK(divergence(hyvarinen_score(), p, q) == doctest::Approx(2.25).epsilon(1e-6));
  CHECK(divergence(hyvarinen_score(), p, p) == doctest::Approx(0.0).epsilon(1e-9));

  for (auto [sigma, tau] : {std::pair{2.0, 1.0}, {1.0, 2.0}, {0.5, 3.0}}) {
    const Density a = Density::normal(0, sigma);
    const Density b = Density::normal(0, tau);
    CHECK(kl_divergence(a, b) == doctest::Approx(normal_kl(sigma, tau)).epsilon(1e-6));
    CHECK(fisher_divergence(a, b) ==
          doctest::Approx(normal_fisher(sigma, tau)).epsilon(1e-6));
  }
}

TEST_CASE("score divergences coincide with their named divergences") {
  const auto family = standard_family();
  const Density& p = family[2].second;  // normal(0,2)
  const Density& q = family[4].second;  // symmetric mixture
  CHECK(divergence(hyvarinen_score(), p, q) ==
        doctest::Approx(fisher_divergence(p, q)).epsilon(1e-7));
  CHECK(divergence(logarithmic_score(), p, q) ==
        doctest::Approx(kl_divergence(p, q)).epsilon(1e-7));
}

TEST_CASE("the huber counterexample kills the fisher divergence only") {
  const Density pa = Density::two_piece_gamma(0.3);
  const Density pb = Density::two_piece_gamma(0.7);
  CHECK(std::abs(fisher_divergence(pa, pb)) <= 1e-8);
  // distinct densities stay distinguishable in KL: 0.4 ln(7/3)
  CHECK(kl_divergence(pa, pb) == doctest::Approx(0.4 * std::log(7.0 / 3.0)).epsilon(1e-8));
  CHECK(kl_divergence(pa, pa) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("propriety scan over the standard family") {
  const auto family = standard_family();
  const ProprietyReport rep = propriety_scan(hyvarinen_score(), family);
  CHECK(rep.pairs.size() == family.size() * family.size());
  CHECK(rep.min_margin >= -1e-7);
  CHECK(rep.strict_violations.empty());

  const ProprietyReport broken = propriety_scan(broken_negated_tail(), family);
  CHECK(broken.min_margin < 0.0);

  const std::vector<LabeledDensity> single{{"normal(0,1)", Density::normal(0, 1)}};
  const ProprietyReport one = propriety_scan(hyvarinen_score(), single);
  CHECK(one.pairs.size() == 1);
  CHECK(one.pairs[0].margin == 0.0);
  CHECK(one.min_margin == 0.0);
}

TEST_CASE("euler residual: proper scores are stationary") {
  const Density n01 = Density::normal(0, 1);
  const EulerReport hs_rep =
      euler_residual(hyvarinen_score(), n01, default_euler_grid(n01));
  CHECK(std::abs(hs_rep.c_p_estimate) <= 1e-9);
  CHECK(hs_rep.max_abs_deviation <= 1e-5);

  const EulerReport ls_rep =
      euler_residual(logarithmic_score(), Density::logistic(0, 1),
                     default_euler_grid(Density::logistic(0, 1)));
  CHECK(ls_rep.c_p_estimate == doctest::Approx(-1.0).epsilon(1e-9));
  for (Eigen::Index i = 0; i < ls_rep.residual.size(); ++i) {
    CHECK(ls_rep.residual[i] == doctest::Approx(-1.0).epsilon(1e-6));
  }

  const EulerReport broken = euler_residual(broken_y1sq(), n01, default_euler_grid(n01));
  CHECK(broken.max_abs_deviation > 0.1);
}

TEST_CASE("euler constant does not depend on the density") {
  for (const LocalScore& s : {hyvarinen_score(), log_cosh_score()}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [id, p] : standard_family()) {
      const EulerReport rep = euler_residual(s, p, default_euler_grid(p));
      lo = std::min(lo, rep.c_p_estimate);
      hi = std::max(hi, rep.c_p_estimate);
      CHECK(rep.max_abs_deviation <= 1e-4);
    }
    CHECK(hi - lo <= 1e-5);
  }
}

TEST_CASE("euler residual requires partials") {
  LocalScore bare;
  bare.eval = [](double, double, double y1, double) { return y1; };
  CHECK_THROWS_AS(euler_residual(bare, Density::normal(0, 1), default_euler_grid(Density::normal(0, 1))),
                  MissingPartials);
}
