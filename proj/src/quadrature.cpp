#include "scorelab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "scorelab/errors.hpp"

namespace scorelab {

namespace {

struct SimpsonPanel {
  double lo, hi;
  double flo, fmid, fhi;
  double estimate;
};

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adapt(const RealFunction& f, const SimpsonPanel& p, double tol, int depth,
             int max_depth) {
  const double mid = 0.5 * (p.lo + p.hi);
  const double lm = 0.5 * (p.lo + mid);
  const double rm = 0.5 * (mid + p.hi);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.lo, mid, p.flo, flm, p.fmid);
  const double right = simpson(mid, p.hi, p.fmid, frm, p.fhi);
  const double delta = left + right - p.estimate;
  if (std::abs(delta) <= 15.0 * tol || !(std::isfinite(delta))) {
    if (!std::isfinite(delta)) {
      throw QuadratureNonconvergent("non-finite integrand encountered");
    }
    return left + right + delta / 15.0;
  }
  if (depth >= max_depth) {
    throw QuadratureNonconvergent("adaptive Simpson depth limit reached");
  }
  const SimpsonPanel pl{p.lo, mid, p.flo, flm, p.fmid, left};
  const SimpsonPanel pr{mid, p.hi, p.fmid, frm, p.fhi, right};
  return adapt(f, pl, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, pr, 0.5 * tol, depth + 1, max_depth);
}

// Nodes/weights of the 32-point Gauss-Legendre rule on [-1,1], positive half.
constexpr std::array<double, 16> kGl32Nodes = {
    0.0483076656877383162348126, 0.1444719615827964934851864,
    0.2392873622521370745446032, 0.3318686022821276497799168,
    0.4213512761306353453641194, 0.5068999089322293900237475,
    0.5877157572407623290407455, 0.6630442669302152009751152,
    0.7321821187402896803874267, 0.7944837959679424069630973,
    0.8493676137325699701336930, 0.8963211557660521239653072,
    0.9349060759377396891709191, 0.9647622555875064307738119,
    0.9856115115452683354001750, 0.9972638618494815635449811};
constexpr std::array<double, 16> kGl32Weights = {
    0.0965400885147278005667648, 0.0956387200792748594190820,
    0.0938443990808045656391802, 0.0911738786957638847128686,
    0.0876520930044038111427715, 0.0833119242269467552221991,
    0.0781938957870703064717409, 0.0723457941088485062253994,
    0.0658222227763618468376501, 0.0586840934785355471452836,
    0.0509980592623761761961632, 0.0428358980222266806568786,
    0.0342738629130214331026877, 0.0253920653092620594557526,
    0.0162743947309056706051706, 0.0070186100094700966004071};

}  // namespace

double integrate_adaptive(const RealFunction& f, double lo, double hi,
                          const QuadratureOptions& opt) {
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate_adaptive(f, hi, lo, opt);
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const SimpsonPanel p{lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi)};
  return adapt(f, p, opt.abs_tol, 0, opt.max_depth);
}

double integrate_adaptive(const RealFunction& f, const std::vector<double>& breakpoints,
                          const QuadratureOptions& opt) {
  if (breakpoints.size() < 2) return 0.0;
  const double total = breakpoints.back() - breakpoints.front();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i];
    const double hi = breakpoints[i + 1];
    if (hi <= lo) continue;
    QuadratureOptions panel = opt;
    panel.abs_tol = opt.abs_tol * std::max((hi - lo) / total, 1e-3);
    sum += integrate_adaptive(f, lo, hi, panel);
  }
  return sum;
}

double gauss_legendre_32(const RealFunction& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double center = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double dx = half * kGl32Nodes[i];
    sum += kGl32Weights[i] * (f(center - dx) + f(center + dx));
  }
  return half * sum;
}

double gauss_legendre_checked(const RealFunction& f, double lo, double hi, double tol) {
  const double coarse = gauss_legendre_32(f, lo, hi);
  const double mid = 0.5 * (lo + hi);
  const double fine = gauss_legendre_32(f, lo, mid) + gauss_legendre_32(f, mid, hi);
  if (std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine))) {
    throw QuadratureNonconvergent("Gauss-Legendre doubling check failed");
  }
  return fine;
}

}  // namespace scorelab
