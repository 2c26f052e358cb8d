#include "scorelab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <utility>
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

constexpr double kThird = 1.0 / 3.0;
constexpr double kQuarter = 0.25;

}  // namespace

Kernel power_kernel(int n, double c) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidOrder("power kernel: n must be even and >= 2");
  }
  if (c > 0.0) {
    throw InvalidCoefficient("power kernel: c must be <= 0");
  }
  Kernel K;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "power:%d:%g", n, c);
  K.label = buf;
  K.c = c;
  K.k0 = [n](double, double y1) { return -ipow(y1, n); };
  K.d1_k0 = [n](double, double y1) { return -n * ipow(y1, n - 1); };
  K.dx1_k0 = [](double, double) { return 0.0; };
  K.d11_k0 = [n](double, double y1) {
    return -static_cast<double>(n * (n - 1)) * ipow(y1, n - 2);
  };
  return K;
}

Kernel log_cosh_kernel() {
  Kernel K;
  K.label = "logcosh";
  K.c = 0.0;
  K.k0 = [](double, double y1) { return -stable_log_cosh(y1); };
  K.d1_k0 = [](double, double y1) { return -std::tanh(y1); };
  K.dx1_k0 = [](double, double) { return 0.0; };
  K.d11_k0 = [](double, double y1) { return -sech_squared(y1); };
  return K;
}

Kernel log_score_kernel() {
  Kernel K;
  K.label = "log";
  K.c = -1.0;
  K.k0 = [](double, double) { return 0.0; };
  K.d1_k0 = [](double, double) { return 0.0; };
  K.dx1_k0 = [](double, double) { return 0.0; };
  K.d11_k0 = [](double, double) { return 0.0; };
  return K;
}

Kernel finite_difference_adaptor(std::string label, double c, Kernel::Fn k0) {
  Kernel K;
  K.label = std::move(label);
  K.c = c;
  K.k0 = k0;
  K.d1_k0 = [k0](double x, double y1) {
    const double h = fd_step(y1, kThird);
    return (k0(x, y1 + h) - k0(x, y1 - h)) / (2.0 * h);
  };
  K.d11_k0 = [k0](double x, double y1) {
    const double h = fd_step(y1, kQuarter);
    return (k0(x, y1 + h) - 2.0 * k0(x, y1) + k0(x, y1 - h)) / (h * h);
  };
  K.dx1_k0 = [k0](double x, double y1) {
    const double hx = fd_step(x, kQuarter);
    const double hy = fd_step(y1, kQuarter);
    return (k0(x + hx, y1 + hy) - k0(x + hx, y1 - hy) - k0(x - hx, y1 + hy) +
            k0(x - hx, y1 - hy)) /
           (4.0 * hx * hy);
  };
  return K;
}

LocalScore construct_score(const Kernel& K) {
  if (!K.k0) throw MissingPartials("kernel K0 missing");
  if (!K.has_partials()) {
    throw MissingPartials("kernel partials missing; use finite_difference_adaptor");
  }
  LocalScore s;
  s.label = "tangent(" + K.label + ")";
  s.order = 2;
  const double c = K.c;
  const Kernel::Fn k0 = K.k0, d1 = K.d1_k0, dx1 = K.dx1_k0, d11 = K.d11_k0;
  s.eval = [c, k0, d1, dx1, d11](double x, double y0, double y1, double y2) {
    return c * y0 + k0(x, y1) - y1 * d1(x, y1) - dx1(x, y1) - y2 * d11(x, y1);
  };
  s.d0 = [c](double, double, double, double) { return c; };
  s.d2 = [d11](double x, double, double y1, double) { return -d11(x, y1); };
  return with_numeric_partials(std::move(s));
}

ConcavityReport concavity_report(const Kernel& K, const Eigen::VectorXd& x_grid,
                                 const Eigen::VectorXd& y1_grid) {
  if (x_grid.size() == 0 || y1_grid.size() == 0) {
    throw ValidationError("concavity_report requires nonempty grids");
  }
  if (!K.d11_k0) throw MissingPartials("kernel d11 partial missing");
  ConcavityReport rep;
  rep.c_ok = K.c <= 0.0;
  rep.min_d11 = std::numeric_limits<double>::infinity();
  rep.max_d11 = -rep.min_d11;
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    for (Eigen::Index j = 0; j < y1_grid.size(); ++j) {
      const double v = K.d11_k0(x_grid[i], y1_grid[j]);
      rep.min_d11 = std::min(rep.min_d11, v);
      rep.max_d11 = std::max(rep.max_d11, v);
    }
  }
  rep.x_lo = x_grid.minCoeff();
  rep.x_hi = x_grid.maxCoeff();
  rep.y1_lo = y1_grid.minCoeff();
  rep.y1_hi = y1_grid.maxCoeff();
  rep.x_points = x_grid.size();
  rep.y1_points = y1_grid.size();
  // Concavity on the grid means the second y1-derivative never exceeds zero
  // (up to tolerance); strictness requires it stay negative everywhere.
  if (rep.c_ok && rep.max_d11 <= 1e-12) {
    rep.verdict = rep.max_d11 < -1e-12 ? "strict-on-grid" : "concave-on-grid";
  } else {
    rep.verdict = "not-concave-on-grid";
  }
  return rep;
}

GrowthProbe growth_probe(const Kernel& K, const Eigen::VectorXd& x_grid,
                         const Eigen::VectorXd& y1_grid) {
  if (x_grid.size() == 0 || y1_grid.size() == 0) {
    throw ValidationError("growth_probe requires nonempty grids");
  }
  if (!K.k0) throw MissingPartials("kernel K0 missing");
  // Regress log|K0| on log((1+|x|)(1+|y1|)) where the kernel is sizable, then
  // lift C so the envelope holds at every probe. Near-zero samples carry no
  // growth information and would wreck the slope.
  std::vector<std::pair<double, double>> samples;
  double peak = 0.0;
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    for (Eigen::Index j = 0; j < y1_grid.size(); ++j) {
      const double b = std::log((1.0 + std::abs(x_grid[i])) *
                                (1.0 + std::abs(y1_grid[j])));
      const double v = std::abs(K.k0(x_grid[i], y1_grid[j]));
      samples.emplace_back(b, v);
      peak = std::max(peak, v);
    }
  }
  GrowthProbe probe;
  if (peak == 0.0) {
    probe.C = 0.0;
    return probe;
  }
  double sb = 0.0, st = 0.0, sbb = 0.0, sbt = 0.0;
  double n = 0.0;
  for (const auto& [b, v] : samples) {
    if (v < 1e-8 * peak) continue;
    const double t = std::log(v);
    sb += b;
    st += t;
    sbb += b * b;
    sbt += b * t;
    n += 1.0;
  }
  const double denom = n * sbb - sb * sb;
  probe.r = denom > 1e-12 ? std::max((n * sbt - sb * st) / denom, 0.0) : 0.0;
  double log_c = -std::numeric_limits<double>::infinity();
  for (const auto& [b, v] : samples) {
    if (v > 0.0) log_c = std::max(log_c, std::log(v) - probe.r * b);
  }
  probe.C = std::exp(log_c);
  return probe;
}

namespace {

// V(x, z0, z1, z2) = int_0^{z1} d2s(x, z0, t, z2) dt.
class RecoveryEngine {
 public:
  explicit RecoveryEngine(LocalScore s) : s_(std::move(s)) {}

  double V(double x, double z0, double z1, double z2) const {
    if (z1 == 0.0) return 0.0;
    const auto integrand = [&](double t) { return s_.d2(x, z0, t, z2); };
    return gauss_legendre_checked(integrand, 0.0, z1, 1e-9);
  }

  // Total derivative d/dx = dx + z1 d0 + z2 d1 + z3 d2 applied to V; the
  // z1-partial of V is the integrand at the upper limit (exact), the others
  // use central differences.
  double dV_dx(double x, double z0, double z1, double z2, double z3) const {
    const double hx = fd_step(x, kThird);
    const double h0 = fd_step(z0, kThird);
    const double h2 = fd_step(z2, kThird);
    const double vx = (V(x + hx, z0, z1, z2) - V(x - hx, z0, z1, z2)) / (2.0 * hx);
    const double v0 = (V(x, z0 + h0, z1, z2) - V(x, z0 - h0, z1, z2)) / (2.0 * h0);
    const double v1 = s_.d2(x, z0, z1, z2);
    const double v2 = (V(x, z0, z1, z2 + h2) - V(x, z0, z1, z2 - h2)) / (2.0 * h2);
    return vx + z1 * v0 + z2 * v1 + z3 * v2;
  }

  double K(double x, double z0, double z1, double z2, double z3) const {
    return s_.eval(x, z0, z1, z2) - z1 * V(x, z0, z1, z2) - dV_dx(x, z0, z1, z2, z3);
  }

 private:
  LocalScore s_;
};

}  // namespace

KernelRecovery recover_kernel(const LocalScore& s, double z2_probe, double z3_probe) {
  if (!s.eval) throw MissingPartials("score has no eval");
  if (!s.d2) throw MissingPartials("score has no y2 partial; recovery needs d2s");

  // Keep the engine alive inside the returned closures.
  auto engine = std::make_shared<RecoveryEngine>(s);
  const double z3 = z3_probe;

  KernelRecovery rec;
  rec.z2_probe = z2_probe;
  rec.z3_probe = z3_probe;

  // c is the slope of K in y0; a unit-width secant suppresses rounding noise
  // and is exact when K is linear in y0.
  rec.c = engine->K(0.3, 0.5, 0.7, z2_probe, z3) -
          engine->K(0.3, -0.5, 0.7, z2_probe, z3);

  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(5, -2.5, 2.5);
  const Eigen::VectorXd y1s = Eigen::VectorXd::LinSpaced(5, -2.5, 2.5);
  const Eigen::VectorXd z0s = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    for (Eigen::Index j = 0; j < y1s.size(); ++j) {
      for (Eigen::Index l = 0; l < z0s.size(); ++l) {
        const double x = xs[i], y1 = y1s[j], z0 = z0s[l];
        const double slope = engine->K(x, z0 + 0.5, y1, z2_probe, z3) -
                             engine->K(x, z0 - 0.5, y1, z2_probe, z3);
        rec.d0_residual = std::max(rec.d0_residual, std::abs(slope - rec.c));
        const double dz2 = (engine->K(x, z0, y1, z2_probe + 0.5, z3) -
                            engine->K(x, z0, y1, z2_probe - 0.5, z3));
        rec.d2_residual = std::max(rec.d2_residual, std::abs(dz2));
      }
    }
  }
  if (std::max(rec.d0_residual, rec.d2_residual) > 1e-3) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "kernel recovery residuals too large (d0 %.3g, d2 %.3g): "
                  "input is not a characterized proper score",
                  rec.d0_residual, rec.d2_residual);
    throw RecoveryResidualLarge(buf);
  }

  const double c = rec.c;
  const double z2p = z2_probe;
  Kernel::Fn k0 = [engine, z2p, z3](double x, double y1) {
    return engine->K(x, 0.0, y1, z2p, z3);
  };
  // The reconstructed K0 carries ~1e-13 of cancellation noise, so its
  // partials use wide five-point stencils: short-step central differences
  // would amplify that noise past the 1e-6 roundtrip budget.
  rec.kernel.label = "recovered(" + s.label + ")";
  rec.kernel.c = c;
  rec.kernel.k0 = k0;
  rec.kernel.d1_k0 = [k0](double x, double y1) {
    const double h = 1e-2 * std::max(1.0, std::abs(y1));
    return (-k0(x, y1 + 2 * h) + 8.0 * k0(x, y1 + h) - 8.0 * k0(x, y1 - h) +
            k0(x, y1 - 2 * h)) /
           (12.0 * h);
  };
  rec.kernel.d11_k0 = [k0](double x, double y1) {
    const double h = 2e-2 * std::max(1.0, std::abs(y1));
    return (-k0(x, y1 + 2 * h) + 16.0 * k0(x, y1 + h) - 30.0 * k0(x, y1) +
            16.0 * k0(x, y1 - h) - k0(x, y1 - 2 * h)) /
           (12.0 * h * h);
  };
  rec.kernel.dx1_k0 = [k0](double x, double y1) {
    const double hx = 1e-2 * std::max(1.0, std::abs(x));
    const double hy = 1e-2 * std::max(1.0, std::abs(y1));
    return (k0(x + hx, y1 + hy) - k0(x + hx, y1 - hy) - k0(x - hx, y1 + hy) +
            k0(x - hx, y1 - hy)) /
           (4.0 * hx * hy);
  };
  return rec;
}

double phi_functional(const Kernel& K, const Density& p) {
  if (!K.k0) throw MissingPartials("kernel K0 missing");
  const auto integrand = [&](double x) {
    const double w = p.pdf(x);
    if (w <= 0.0) return 0.0;
    const LogDerivatives ld = p.log_derivatives(x, 1);
    return w * (K.c * ld.z0() + K.k0(x, ld.z1()));
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  return integrate_adaptive(integrand, integration_breakpoints(p), opt);
}

}  // namespace scorelab
