#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scorelab/density.hpp"
#include "scorelab/scores.hpp"

namespace scorelab {

/// Pointwise scorer: (realized x, forecast density) -> score. Local scores
/// adapt via as_point_score; the nonlocal quadratic/spherical scores fit the
/// same signature directly.
using PointScore = std::function<double(double, const Density&)>;

PointScore as_point_score(const LocalScore& s);

/// E_p[ score(., q) ] by adaptive quadrature (1e-9) over the effective
/// support of p, truncated where p is negligible.
double expected_score(const PointScore& score, const Density& p, const Density& q);
double expected_score(const LocalScore& score, const Density& p, const Density& q);

/// divergence(s, p, q) = E_p s(., q) - E_p s(., p); nonnegative for proper
/// scores on the reference class.
double divergence(const PointScore& score, const Density& p, const Density& q);
double divergence(const LocalScore& score, const Density& p, const Density& q);

/// int p ln(p/q) by direct quadrature.
double kl_divergence(const Density& p, const Density& q);

/// int (p'/p - q'/q)^2 p by direct quadrature; only the first log-derivative
/// is used, so the two-piece gamma counterexample is accepted.
double fisher_divergence(const Density& p, const Density& q);

using LabeledDensity = std::pair<std::string, Density>;

/// The six-density grid used throughout the diagnostics: three normals, one
/// logistic and two normal mixtures.
std::vector<LabeledDensity> standard_family();

struct ProprietyReport {
  struct PairMargin {
    std::string p_id;
    std::string q_id;
    double margin = 0.0;  // S(p,q) - S(p,p)
  };
  std::vector<PairMargin> pairs;  // all ordered pairs, index order
  double min_margin = 0.0;
  std::vector<PairMargin> strict_violations;  // distinct pairs with margin <= tol
  double strictness_tol = 1e-6;
};

/// Evaluate every ordered pair of the family. Margins for p = q are exactly
/// zero by construction; distinct pairs with margin <= strictness_tol are
/// listed as strictness violations.
ProprietyReport propriety_scan(const PointScore& score,
                               const std::vector<LabeledDensity>& family,
                               double strictness_tol = 1e-6);
ProprietyReport propriety_scan(const LocalScore& score,
                               const std::vector<LabeledDensity>& family,
                               double strictness_tol = 1e-6);

/// Euler stationarity residual d0s - (1/p) d/dx[p d1s] + (1/p) d^2/dx^2[p d2s]
/// on a grid, together with the constant c_p = int (d0s) p. For a
/// characterized proper score the residual equals c_p everywhere.
struct EulerReport {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  double c_p_estimate = 0.0;
  double max_abs_deviation = 0.0;  // max |residual - c_p|
};

/// Total x-derivatives are five-point central differences of the fully
/// composed maps x -> p(x) d_j s(...) at step 1e-4. Requires partials.
EulerReport euler_residual(const LocalScore& s, const Density& p,
                           const Eigen::VectorXd& x_grid);

/// Default grid: n points spanning mean +- 4 stdev.
Eigen::VectorXd default_euler_grid(const Density& p, int n = 33);

}  // namespace scorelab
