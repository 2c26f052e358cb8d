#pragma once

#include <functional>
#include <string>

#include "scorelab/density.hpp"

namespace scorelab {

/// Scoring function of a second-order local rule: s(x, y0, y1, y2) where
/// y_j = (ln q)^(j)(x). Order-0 rules use the same signature with vacuous
/// y1, y2 dependence so every rule shares one evaluation path. Partial
/// derivatives are optional and, when present, analytic.
struct LocalScore {
  using Fn = std::function<double(double, double, double, double)>;

  std::string label;
  int order = 2;  // 0 for the logarithmic score, 2 otherwise
  Fn eval;
  Fn d0;  // partial wrt y0
  Fn d1;  // partial wrt y1
  Fn d2;  // partial wrt y2
  Fn dx;  // partial wrt x

  bool has_partials() const {
    return static_cast<bool>(d0) && static_cast<bool>(d1) && static_cast<bool>(d2) &&
           static_cast<bool>(dx);
  }
};

/// s = -y0 (order 0).
LocalScore logarithmic_score();

/// s = y1^2 + 2 y2.
LocalScore hyvarinen_score();

/// s = -ln cosh y1 + y1 tanh y1 + y2 (1 - tanh^2 y1).
LocalScore log_cosh_score();

/// s = c y0 + (n-1)(y1^n + n y1^(n-2) y2) for even n >= 2 and c <= 0.
/// Throws InvalidOrder / InvalidCoefficient on bad parameters.
LocalScore power_score(int n, double c);

/// Evaluate a local score against forecast density q at the realized x.
double eval_local(const LocalScore& s, double x, const Density& q);

/// Squared L2 norm of q. Gaussian mixtures use the exact pairwise normal
/// overlap identity; other kinds fall back to adaptive quadrature (1e-10).
double l2_norm_squared(const Density& q);

/// QS(x,q) = ||q||_2^2 - 2 q(x).
double quadratic_score(double x, const Density& q);

/// SphS(x,q) = -q(x) / ||q||_2. Throws DegenerateNorm if the norm vanishes.
double spherical_score(double x, const Density& q);

/// Fill any missing partials of s with central finite differences of eval.
LocalScore with_numeric_partials(LocalScore s);

/// Numerically stable ln cosh and 1 - tanh^2.
double stable_log_cosh(double y);
double sech_squared(double y);

}  // namespace scorelab
