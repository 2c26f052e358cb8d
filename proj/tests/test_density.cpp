#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "scorelab/density.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/quadrature.hpp"

using namespace scorelab;

namespace {

Density sym_mixture() {
  Eigen::Vector2d w(0.5, 0.5);
  return mixture(w, {Density::normal(-1.0, 1.0), Density::normal(1.0, 1.0)});
}

Density skew_mixture() {
  Eigen::Vector2d w(0.3, 0.7);
  return mixture(w, {Density::normal(0.0, 1.0), Density::normal(3.0, 2.0)});
}

double quadrature_mass(const Density& d) {
  return integrate_adaptive([&](double x) { return d.pdf(x); },
                            integration_breakpoints(d));
}

}  // namespace

TEST_CASE("pdf values at reference points") {
  CHECK(Density::normal(0, 1).pdf(0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  Eigen::Vector2d w(0.5, 0.5);
  const Density twin = mixture(w, {Density::normal(0, 1), Density::normal(0, 1)});
  CHECK(twin.pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(Density::two_piece_gamma(0.3).pdf(0.0) == 0.0);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(Density::normal(0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(Density::logistic(0.0, -1.0), ValidationError);
  CHECK_THROWS_AS(Density::two_piece_gamma(1.0), ValidationError);
}

TEST_CASE("mixture weight validation") {
  Eigen::Vector2d bad(0.5, 0.6);
  CHECK_THROWS_AS(mixture(bad, {Density::normal(0, 1), Density::normal(1, 1)}),
                  InvalidWeights);
  Eigen::Vector2d neg(1.5, -0.5);
  CHECK_THROWS_AS(mixture(neg, {Density::normal(0, 1), Density::normal(1, 1)}),
                  InvalidWeights);
  // degenerate one-component mixture behaves like its component
  Eigen::VectorXd one(1);
  one << 1.0;
  const Density m = mixture(one, {Density::normal(0, 1)});
  for (double x : {-3.0, -0.5, 0.0, 1.7}) {
    CHECK(m.pdf(x) == doctest::Approx(Density::normal(0, 1).pdf(x)).epsilon(1e-13));
  }
}

TEST_CASE("every constructible model is normalized within 1e-8") {
  for (const Density& d :
       {Density::normal(0, 1), Density::normal(3, 0.5), Density::logistic(-1, 2),
        Density::two_piece_gamma(0.3), sym_mixture(), skew_mixture()}) {
    CHECK(quadrature_mass(d) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("log-derivatives of the normal are the closed forms") {
  const LogDerivatives ld = Density::normal(0, 1).log_derivatives(2.0, 2);
  CHECK(ld.z1() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(ld.z2() == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("symmetric densities have vanishing z1 at the center") {
  CHECK(Density::logistic(0, 1).log_derivatives(0.0, 1).z1() == doctest::Approx(0.0));
  CHECK(sym_mixture().log_derivatives(0.0, 1).z1() == doctest::Approx(0.0));
}

TEST_CASE("two-piece gamma log-derivatives exist only away from the origin") {
  const Density huber = Density::two_piece_gamma(0.3);
  CHECK_THROWS_AS(huber.log_derivatives(0.0), DensityZeroAtPoint);
  const LogDerivatives ld = huber.log_derivatives(2.0, 4);
  CHECK(ld.z1() == doctest::Approx(5.0 / 2.0 - 1.0));
  CHECK(ld.z2() == doctest::Approx(-5.0 / 4.0));
  // left side flips the sign of the exponential term only
  CHECK(huber.log_derivatives(-2.0, 1).z1() == doctest::Approx(5.0 / -2.0 + 1.0));
}

TEST_CASE("derivative chain: finite difference of z_j matches z_{j+1}") {
  const double h = 1e-5;
  for (const Density& d : {Density::normal(0.5, 1.3), Density::logistic(0, 1),
                           sym_mixture(), skew_mixture()}) {
    for (int j = 0; j <= 3; ++j) {
      for (int i = 0; i <= 20; ++i) {
        const double x = -5.0 + 0.5 * i;
        const double fd = (d.log_derivatives(x + h, 4).z[j] -
                           d.log_derivatives(x - h, 4).z[j]) /
                          (2.0 * h);
        const double exact = d.log_derivatives(x, 4).z[j + 1];
        CHECK(std::abs(fd - exact) <= 1e-4 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  // two-piece gamma, away from its zero
  const Density huber = Density::two_piece_gamma(0.4);
  for (int j = 0; j <= 3; ++j) {
    for (double x : {0.5, 1.0, 2.0, 5.0, -1.5, -4.0}) {
      const double fd =
          (huber.log_derivatives(x + h, 4).z[j] - huber.log_derivatives(x - h, 4).z[j]) /
          (2.0 * h);
      const double exact = huber.log_derivatives(x, 4).z[j + 1];
      CHECK(std::abs(fd - exact) <= 1e-4 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("mixture log-derivative bound by the worst component") {
  const Density p = Density::normal(0, 1);
  const Density q = Density::normal(3, 2);
  const Density r = skew_mixture();
  for (int i = 0; i < 201; ++i) {
    const double x = -6.0 + 15.0 * i / 200.0;
    const double lhs = std::abs(r.log_derivatives(x, 1).z1());
    const double rhs = std::max(std::abs(p.log_derivatives(x, 1).z1()),
                                std::abs(q.log_derivatives(x, 1).z1()));
    CHECK(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("mixture moments") {
  const Density m = skew_mixture();
  CHECK(m.mean() == doctest::Approx(2.1));
  // E X^2 = 0.3*1 + 0.7*(4+9) = 9.4
  CHECK(m.variance() == doctest::Approx(9.4 - 2.1 * 2.1));
  const Density huber = Density::two_piece_gamma(0.5);
  CHECK(huber.mean() == doctest::Approx(0.0));
  CHECK(huber.variance() == doctest::Approx(42.0));
}

TEST_CASE("cdf sanity") {
  CHECK(Density::normal(0, 1).cdf(0.0) == doctest::Approx(0.5));
  CHECK(Density::logistic(2, 1).cdf(2.0) == doctest::Approx(0.5));
  const Density huber = Density::two_piece_gamma(0.3);
  CHECK(huber.cdf(0.0) == doctest::Approx(0.7));
  CHECK(huber.cdf(60.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sym_mixture().cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("sampling is deterministic and matches model moments") {
  const Density n01 = Density::normal(0, 1);
  const Eigen::VectorXd s1 = sample(n01, 100000, 1);
  const Eigen::VectorXd s2 = sample(n01, 100000, 1);
  CHECK(s1 == s2);  // bit-identical
  CHECK(std::abs(s1.mean()) < 0.02);
  const double var = (s1.array() - s1.mean()).square().mean();
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));

  const Eigen::VectorXd other = sample(n01, 1000, 2);
  CHECK(other.head(5) != s1.head(5));

  const Eigen::VectorXd logi = sample(Density::logistic(0, 1), 100000, 7);
  const double logi_var = (logi.array() - logi.mean()).square().mean();
  CHECK(logi_var ==
        doctest::Approx(std::numbers::pi * std::numbers::pi / 3.0).epsilon(0.05));

  Eigen::Vector2d w(0.5, 0.5);
  const Density bimodal = mixture(w, {Density::normal(-5, 1), Density::normal(5, 1)});
  const Eigen::VectorXd mix_draws = sample(bimodal, 100000, 3);
  const double frac_neg =
      static_cast<double>((mix_draws.array() < 0.0).count()) / 100000.0;
  CHECK(frac_neg == doctest::Approx(0.5).epsilon(0.02));

  const Eigen::VectorXd huber_draws = sample(Density::two_piece_gamma(0.3), 100000, 4);
  const double frac_pos =
      static_cast<double>((huber_draws.array() > 0.0).count()) / 100000.0;
  CHECK(frac_pos == doctest::Approx(0.3).epsilon(0.03));
  CHECK(huber_draws.mean() == doctest::Approx(6.0 * (2 * 0.3 - 1)).epsilon(0.03));
}

TEST_CASE("class membership diagnostics") {
  const Eigen::VectorXd probes = default_class_p_probes();

  const ClassPReport normal_rep = class_p_diagnostics(Density::normal(0, 1), probes);
  CHECK(normal_rep.all_pass());
  CHECK(normal_rep.declared_member);

  const ClassPReport logistic_rep = class_p_diagnostics(Density::logistic(0, 1), probes);
  CHECK(logistic_rep.all_pass());

  const ClassPReport huber_rep =
      class_p_diagnostics(Density::two_piece_gamma(0.5), probes);
  CHECK_FALSE(huber_rep.p1_positive);
  REQUIRE(huber_rep.p1_failures.size() == 1);
  CHECK(huber_rep.p1_failures[0] == 0.0);
  CHECK(huber_rep.p3_decay);
  CHECK(huber_rep.p4_log_derivative_decay);
  CHECK_FALSE(huber_rep.declared_member);
}

TEST_CASE("a quadratic-tail stub fails the decay probe") {
  // Cauchy-like stub: p = 1/(pi (1+x^2)), tails ~ x^-2.
  DensityProbeFns stub;
  stub.declared_member = false;
  stub.log_pdf = [](double x) {
    return -std::log(std::numbers::pi) - std::log1p(x * x);
  };
  stub.derivative_ratios = [](double x) {
    const double d = 1.0 + x * x;
    const double z1 = -2.0 * x / d;
    const double z2 = (2.0 * x * x - 2.0) / (d * d);
    const double z3 = (12.0 * x - 4.0 * x * x * x) / (d * d * d);
    const double z4 = (12.0 - 72.0 * x * x + 12.0 * x * x * x * x) / (d * d * d * d);
    std::array<double, 5> r{};
    r[0] = 1.0;
    r[1] = z1;
    r[2] = z1 * z1 + z2;
    r[3] = z1 * z1 * z1 + 3.0 * z1 * z2 + z3;
    r[4] = z1 * z1 * z1 * z1 + 6.0 * z1 * z1 * z2 + 3.0 * z2 * z2 + 4.0 * z1 * z3 + z4;
    return r;
  };
  const ClassPReport rep = class_p_diagnostics(stub, default_class_p_probes());
  CHECK(rep.p1_positive);
  CHECK_FALSE(rep.p3_decay);
}

TEST_CASE("derivative ratios agree between mixture path and bell chain") {
  const Density m = skew_mixture();
  for (double x : {-2.0, 0.0, 1.0, 4.0}) {
    const auto r = m.derivative_ratios(x);
    const auto z = m.log_derivatives(x, 4);
    CHECK(r[1] == doctest::Approx(z.z1()).epsilon(1e-10));
    CHECK(r[2] == doctest::Approx(z.z1() * z.z1() + z.z2()).epsilon(1e-10));
  }
}
