#include "scorelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scorelab/errors.hpp"
#include "scorelab/quadrature.hpp"

namespace scorelab {

PointScore as_point_score(const LocalScore& s) {
  return [s](double x, const Density& q) { return eval_local(s, x, q); };
}

double expected_score(const PointScore& score, const Density& p, const Density& q) {
  const auto integrand = [&](double x) {
    const double w = p.pdf(x);
    if (w <= 0.0) return 0.0;
    return w * score(x, q);
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  return integrate_adaptive(integrand, integration_breakpoints(p, q), opt);
}

double expected_score(const LocalScore& score, const Density& p, const Density& q) {
  return expected_score(as_point_score(score), p, q);
}

double divergence(const PointScore& score, const Density& p, const Density& q) {
  return expected_score(score, p, q) - expected_score(score, p, p);
}

double divergence(const LocalScore& score, const Density& p, const Density& q) {
  return divergence(as_point_score(score), p, q);
}

double kl_divergence(const Density& p, const Density& q) {
  const auto integrand = [&](double x) {
    const double lp = p.log_pdf(x);
    if (!(lp > -std::numeric_limits<double>::infinity())) return 0.0;
    const double w = std::exp(lp);
    if (w <= 0.0) return 0.0;
    return w * (lp - q.log_pdf(x));
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  return integrate_adaptive(integrand, integration_breakpoints(p, q), opt);
}

double fisher_divergence(const Density& p, const Density& q) {
  const auto integrand = [&](double x) {
    const double w = p.pdf(x);
    if (w <= 0.0) return 0.0;
    const double dz = p.log_derivatives(x, 1).z1() - q.log_derivatives(x, 1).z1();
    return w * dz * dz;
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  return integrate_adaptive(integrand, integration_breakpoints(p, q), opt);
}

std::vector<LabeledDensity> standard_family() {
  std::vector<LabeledDensity> fam;
  fam.emplace_back("normal(0,1)", Density::normal(0.0, 1.0));
  fam.emplace_back("normal(1,1)", Density::normal(1.0, 1.0));
  fam.emplace_back("normal(0,2)", Density::normal(0.0, 2.0));
  fam.emplace_back("logistic(0,1)", Density::logistic(0.0, 1.0));
  Eigen::Vector2d w1(0.5, 0.5);
  fam.emplace_back("mix(0.5*normal(-1,1)+0.5*normal(1,1))",
                   mixture(w1, {Density::normal(-1.0, 1.0), Density::normal(1.0, 1.0)}));
  Eigen::Vector2d w2(0.3, 0.7);
  fam.emplace_back("mix(0.3*normal(0,1)+0.7*normal(3,2))",
                   mixture(w2, {Density::normal(0.0, 1.0), Density::normal(3.0, 2.0)}));
  return fam;
}

ProprietyReport propriety_scan(const PointScore& score,
                               const std::vector<LabeledDensity>& family,
                               double strictness_tol) {
  if (family.empty()) throw ValidationError("propriety_scan requires a nonempty family");
  ProprietyReport rep;
  rep.strictness_tol = strictness_tol;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& [p_id, p] : family) {
    const double self = expected_score(score, p, p);
    for (const auto& [q_id, q] : family) {
      ProprietyReport::PairMargin pm;
      pm.p_id = p_id;
      pm.q_id = q_id;
      pm.margin = p_id == q_id ? 0.0 : expected_score(score, p, q) - self;
      rep.min_margin = std::min(rep.min_margin, pm.margin);
      if (p_id != q_id && pm.margin <= strictness_tol) {
        rep.strict_violations.push_back(pm);
      }
      rep.pairs.push_back(std::move(pm));
    }
  }
  return rep;
}

ProprietyReport propriety_scan(const LocalScore& score,
                               const std::vector<LabeledDensity>& family,
                               double strictness_tol) {
  return propriety_scan(as_point_score(score), family, strictness_tol);
}

namespace {

// Five-point central first and second derivatives at fixed step h.
double fd5_first(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) /
         (12.0 * h);
}

double fd5_second(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) -
          f(x - 2.0 * h)) /
         (12.0 * h * h);
}

}  // namespace

EulerReport euler_residual(const LocalScore& s, const Density& p,
                           const Eigen::VectorXd& x_grid) {
  if (!s.has_partials()) {
    throw MissingPartials("euler_residual needs partial derivatives of the score");
  }
  const auto at = [&](double x, const LocalScore::Fn& g) {
    const LogDerivatives ld = p.log_derivatives(x, 2);
    return g(x, ld.z0(), ld.z1(), ld.z2());
  };
  const auto p_d1s = [&](double x) { return p.pdf(x) * at(x, s.d1); };
  const auto p_d2s = [&](double x) { return p.pdf(x) * at(x, s.d2); };

  constexpr double kStep = 1e-4;
  EulerReport rep;
  rep.x = x_grid;
  rep.residual.resize(x_grid.size());
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    const double w = p.pdf(x);
    rep.residual[i] = at(x, s.d0) - fd5_first(p_d1s, x, kStep) / w +
                      fd5_second(p_d2s, x, kStep) / w;
  }

  const auto integrand = [&](double x) {
    const double w = p.pdf(x);
    if (w <= 0.0) return 0.0;
    return w * at(x, s.d0);
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  rep.c_p_estimate = integrate_adaptive(integrand, integration_breakpoints(p), opt);
  rep.max_abs_deviation =
      (rep.residual.array() - rep.c_p_estimate).abs().maxCoeff();
  return rep;
}

Eigen::VectorXd default_euler_grid(const Density& p, int n) {
  const double m = p.mean();
  const double s = p.std_dev();
  return Eigen::VectorXd::LinSpaced(n, m - 4.0 * s, m + 4.0 * s);
}

}  // namespace scorelab
