#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "scorelab/density.hpp"
#include "scorelab/scores.hpp"

namespace scorelab {

/// Kernel K(x, y0, y1) = c*y0 + K0(x, y1) with the partials of K0 needed by
/// the tangent construction: d1 = dK0/dy1, dx1 = d^2 K0/(dx dy1) and
/// d11 = d^2 K0/dy1^2. Partials may be analytic or synthesized by the finite
/// difference adaptor.
struct Kernel {
  using Fn = std::function<double(double, double)>;  // (x, y1)

  std::string label;
  double c = 0.0;
  Fn k0;
  Fn d1_k0;
  Fn dx1_k0;
  Fn d11_k0;

  bool has_partials() const {
    return static_cast<bool>(d1_k0) && static_cast<bool>(dx1_k0) &&
           static_cast<bool>(d11_k0);
  }
};

/// K0 = -y1^n with analytic partials, even n >= 2, c <= 0.
Kernel power_kernel(int n, double c);

/// K0 = -ln cosh y1 with analytic partials.
Kernel log_cosh_kernel();

/// K = -y0 (c = -1, K0 = 0): the kernel of the logarithmic score.
Kernel log_score_kernel();

/// Synthesize partials of a bare K0 by central differences: step
/// max(1,|arg|) * eps^(1/3) for first order and eps^(1/4) for second order.
Kernel finite_difference_adaptor(std::string label, double c, Kernel::Fn k0);

/// Tangent construction: s = c*y0 + K0 - y1*d1K0 - dx1K0 - y2*d11K0.
/// The y0 and y2 partials of the result are attached analytically
/// (c and -d11K0); the remaining partials are filled numerically.
/// Throws MissingPartials when the kernel has no partials.
LocalScore construct_score(const Kernel& K);

/// Grid certificate for concavity of y1 -> K0(x, y1) plus the sign of c.
/// Verdicts: "strict-on-grid", "concave-on-grid", "not-concave-on-grid".
struct ConcavityReport {
  bool c_ok = false;
  double min_d11 = 0.0;
  double max_d11 = 0.0;
  std::string verdict;
  double x_lo = 0.0, x_hi = 0.0;
  double y1_lo = 0.0, y1_hi = 0.0;
  Eigen::Index x_points = 0, y1_points = 0;
};

ConcavityReport concavity_report(const Kernel& K, const Eigen::VectorXd& x_grid,
                                 const Eigen::VectorXd& y1_grid);

/// Fitted polynomial growth envelope |K0(x,y1)| <= C ((1+|x|)(1+|y1|))^r over
/// a probe grid. Descriptive only: the values certify nothing beyond the grid.
struct GrowthProbe {
  double C = 1.0;
  double r = 0.0;
};

GrowthProbe growth_probe(const Kernel& K, const Eigen::VectorXd& x_grid,
                         const Eigen::VectorXd& y1_grid);

/// Result of reconstructing a kernel from a proper order-2 score via
/// V = int_0^{z1} d2s(x, z0, t, z2) dt and K = s - z1 V - dV/dx. The
/// residuals measure how far the reconstruction is from the characterized
/// form: d2_residual probes dependence on z2, d0_residual probes deviation
/// of dK/dy0 from the constant c. Both stay below 1e-6 for proper inputs
/// regardless of the probe values.
struct KernelRecovery {
  Kernel kernel;
  double c = 0.0;
  double d2_residual = 0.0;
  double d0_residual = 0.0;
  double z2_probe = 0.0;
  double z3_probe = 0.0;
};

/// Throws MissingPartials if s lacks a y2 partial and RecoveryResidualLarge
/// when residuals exceed 1e-3 (the input was not a characterized score).
KernelRecovery recover_kernel(const LocalScore& s, double z2_probe = 0.0,
                              double z3_probe = 0.5);

/// The induced functional Phi_K(p) = int K(x, ln p, (ln p)') p(x) dx,
/// adaptive quadrature to 1e-9.
double phi_functional(const Kernel& K, const Density& p);

}  // namespace scorelab
