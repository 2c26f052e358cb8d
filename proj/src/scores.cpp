#include "scorelab/scores.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "scorelab/errors.hpp"
#include "scorelab/quadrature.hpp"

namespace scorelab {

namespace {

double ipow(double base, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

double fd_step(double arg, double exponent) {
  return std::pow(std::numeric_limits<double>::epsilon(), exponent) *
         std::max(1.0, std::abs(arg));
}

// Gaussian leaf (weight, mean, variance); nullopt when q has a non-Gaussian leaf.
std::optional<std::vector<std::array<double, 3>>> gaussian_leaves(const Density& q,
                                                                  double weight = 1.0) {
  if (q.kind() == Density::Kind::Normal) {
    return std::vector<std::array<double, 3>>{
        {weight, q.param1(), q.param2() * q.param2()}};
  }
  if (q.kind() != Density::Kind::Mixture) return std::nullopt;
  std::vector<std::array<double, 3>> out;
  for (Eigen::Index i = 0; i < q.weights().size(); ++i) {
    auto child = gaussian_leaves(q.components()[static_cast<std::size_t>(i)],
                                 weight * q.weights()[i]);
    if (!child) return std::nullopt;
    out.insert(out.end(), child->begin(), child->end());
  }
  return out;
}

double normal_pdf(double x, double mean, double variance) {
  const double u = (x - mean);
  return std::exp(-0.5 * u * u / variance) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

}  // namespace

double stable_log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech_squared(double y) {
  const double e = std::exp(-2.0 * std::abs(y));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

LocalScore logarithmic_score() {
  LocalScore s;
  s.label = "ls";
  s.order = 0;
  s.eval = [](double, double y0, double, double) { return -y0; };
  s.d0 = [](double, double, double, double) { return -1.0; };
  s.d1 = [](double, double, double, double) { return 0.0; };
  s.d2 = [](double, double, double, double) { return 0.0; };
  s.dx = [](double, double, double, double) { return 0.0; };
  return s;
}

LocalScore hyvarinen_score() {
  LocalScore s;
  s.label = "hs";
  s.eval = [](double, double, double y1, double y2) { return y1 * y1 + 2.0 * y2; };
  s.d0 = [](double, double, double, double) { return 0.0; };
  s.d1 = [](double, double, double y1, double) { return 2.0 * y1; };
  s.d2 = [](double, double, double, double) { return 2.0; };
  s.dx = [](double, double, double, double) { return 0.0; };
  return s;
}

LocalScore log_cosh_score() {
  LocalScore s;
  s.label = "lcs";
  s.eval = [](double, double, double y1, double y2) {
    return -stable_log_cosh(y1) + y1 * std::tanh(y1) + y2 * sech_squared(y1);
  };
  s.d0 = [](double, double, double, double) { return 0.0; };
  s.d1 = [](double, double, double y1, double y2) {
    const double sech2 = sech_squared(y1);
    return y1 * sech2 - 2.0 * y2 * std::tanh(y1) * sech2;
  };
  s.d2 = [](double, double, double y1, double) { return sech_squared(y1); };
  s.dx = [](double, double, double, double) { return 0.0; };
  return s;
}

LocalScore power_score(int n, double c) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidOrder("power score: n must be even and >= 2");
  }
  if (c > 0.0) {
    throw InvalidCoefficient("power score: c must be <= 0");
  }
  LocalScore s;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "power:%d:%g", n, c);
  s.label = buf;
  s.eval = [n, c](double, double y0, double y1, double y2) {
    return c * y0 + (n - 1) * (ipow(y1, n) + n * ipow(y1, n - 2) * y2);
  };
  s.d0 = [c](double, double, double, double) { return c; };
  s.d1 = [n](double, double, double y1, double y2) {
    double g = n * ipow(y1, n - 1);
    if (n > 2) g += n * (n - 2) * ipow(y1, n - 3) * y2;
    return (n - 1) * g;
  };
  s.d2 = [n](double, double, double y1, double) {
    return static_cast<double>((n - 1) * n) * ipow(y1, n - 2);
  };
  s.dx = [](double, double, double, double) { return 0.0; };
  return s;
}

double eval_local(const LocalScore& s, double x, const Density& q) {
  const LogDerivatives ld = q.log_derivatives(x, 2);
  return s.eval(x, ld.z0(), ld.z1(), ld.z2());
}

double l2_norm_squared(const Density& q) {
  if (auto leaves = gaussian_leaves(q)) {
    double acc = 0.0;
    for (const auto& a : *leaves) {
      for (const auto& b : *leaves) {
        acc += a[0] * b[0] * normal_pdf(a[1], b[1], a[2] + b[2]);
      }
    }
    return acc;
  }
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  const auto f = [&q](double x) {
    const double v = q.pdf(x);
    return v * v;
  };
  return integrate_adaptive(f, integration_breakpoints(q), opt);
}

double quadratic_score(double x, const Density& q) {
  return l2_norm_squared(q) - 2.0 * q.pdf(x);
}

double spherical_score(double x, const Density& q) {
  const double norm = std::sqrt(l2_norm_squared(q));
  if (!(norm > 0.0)) throw DegenerateNorm("density has vanishing L2 norm");
  return -q.pdf(x) / norm;
}

LocalScore with_numeric_partials(LocalScore s) {
  const LocalScore::Fn eval = s.eval;
  const double e3 = 1.0 / 3.0;
  if (!s.d0) {
    s.d0 = [eval, e3](double x, double y0, double y1, double y2) {
      const double h = fd_step(y0, e3);
      return (eval(x, y0 + h, y1, y2) - eval(x, y0 - h, y1, y2)) / (2.0 * h);
    };
  }
  if (!s.d1) {
    s.d1 = [eval, e3](double x, double y0, double y1, double y2) {
      const double h = fd_step(y1, e3);
      return (eval(x, y0, y1 + h, y2) - eval(x, y0, y1 - h, y2)) / (2.0 * h);
    };
  }
  if (!s.d2) {
    s.d2 = [eval, e3](double x, double y0, double y1, double y2) {
      const double h = fd_step(y2, e3);
      return (eval(x, y0, y1, y2 + h) - eval(x, y0, y1, y2 - h)) / (2.0 * h);
    };
  }
  if (!s.dx) {
    s.dx = [eval, e3](double x, double y0, double y1, double y2) {
      const double h = fd_step(x, e3);
      return (eval(x + h, y0, y1, y2) - eval(x - h, y0, y1, y2)) / (2.0 * h);
    };
  }
  return s;
}

}  // namespace scorelab
