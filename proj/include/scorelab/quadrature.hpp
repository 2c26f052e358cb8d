#pragma once

#include <functional>
#include <vector>

namespace scorelab {

using RealFunction = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-9;
  int max_depth = 52;
};

/// Adaptive Simpson integration with Richardson error control on [lo, hi].
/// Throws QuadratureNonconvergent if the error estimate cannot be brought
/// below the tolerance within the depth limit.
double integrate_adaptive(const RealFunction& f, double lo, double hi,
                          const QuadratureOptions& opt = {});

/// Piecewise adaptive integration over consecutive panels given by sorted
/// breakpoints; the tolerance is allotted to panels in proportion to width.
double integrate_adaptive(const RealFunction& f, const std::vector<double>& breakpoints,
                          const QuadratureOptions& opt = {});

/// 32-node Gauss-Legendre rule on [lo, hi]. Exact for polynomials up to
/// degree 63; spectrally accurate for analytic integrands.
double gauss_legendre_32(const RealFunction& f, double lo, double hi);

/// Gauss-Legendre with a node-doubling convergence check: compares one panel
/// against two half panels and throws QuadratureNonconvergent when they
/// disagree beyond the tolerance.
double gauss_legendre_checked(const RealFunction& f, double lo, double hi,
                              double tol = 1e-9);

}  // namespace scorelab
