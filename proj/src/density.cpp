#include "scorelab/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scorelab/errors.hpp"
#include "scorelab/rng.hpp"

namespace scorelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogGamma6 = 4.787491742782045994248;  // ln(5!) = ln 120

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Ratios p^(j)/p from log-derivatives, j = 0..4 (complete Bell polynomials).
std::array<double, 5> ratios_from_z(const std::array<double, 5>& z) {
  const double z1 = z[1], z2 = z[2], z3 = z[3], z4 = z[4];
  std::array<double, 5> r{};
  r[0] = 1.0;
  r[1] = z1;
  r[2] = z1 * z1 + z2;
  r[3] = z1 * z1 * z1 + 3.0 * z1 * z2 + z3;
  r[4] = z1 * z1 * z1 * z1 + 6.0 * z1 * z1 * z2 + 3.0 * z2 * z2 + 4.0 * z1 * z3 + z4;
  return r;
}

// Inverse of the above: log-derivatives from raw derivative ratios.
std::array<double, 5> z_from_ratios(const std::array<double, 5>& r) {
  const double r1 = r[1], r2 = r[2], r3 = r[3], r4 = r[4];
  std::array<double, 5> z{};
  z[1] = r1;
  z[2] = r2 - r1 * r1;
  z[3] = r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1;
  z[4] = r4 - 4.0 * r1 * r3 - 3.0 * r2 * r2 + 12.0 * r1 * r1 * r2 -
         6.0 * r1 * r1 * r1 * r1;
  return z;
}

// Survival function of an Erlang(6,1) variable: Q(6,t) = e^-t sum_{j<6} t^j/j!.
double erlang6_upper(double t) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 6; ++j) {
    term *= t / j;
    sum += term;
  }
  return std::exp(-t) * sum;
}

void collect_leaves(const Density& p, double weight,
                    std::vector<std::pair<double, const Density*>>& out) {
  if (p.kind() == Density::Kind::Mixture) {
    for (int i = 0; i < p.weights().size(); ++i) {
      collect_leaves(p.components()[static_cast<std::size_t>(i)],
                     weight * p.weights()[i], out);
    }
  } else {
    out.emplace_back(weight, &p);
  }
}

}  // namespace

Density Density::normal(double mu, double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0) {
    throw ValidationError("normal density requires finite mu and sigma > 0");
  }
  Density d;
  d.kind_ = Kind::Normal;
  d.p1_ = mu;
  d.p2_ = sigma;
  d.label_ = "normal(" + fmt(mu) + "," + fmt(sigma) + ")";
  return d;
}

Density Density::logistic(double location, double scale) {
  if (!std::isfinite(location) || !std::isfinite(scale) || scale <= 0.0) {
    throw ValidationError("logistic density requires finite location and scale > 0");
  }
  Density d;
  d.kind_ = Kind::Logistic;
  d.p1_ = location;
  d.p2_ = scale;
  d.label_ = "logistic(" + fmt(location) + "," + fmt(scale) + ")";
  return d;
}

Density Density::two_piece_gamma(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("two-piece gamma requires alpha in (0,1)");
  }
  Density d;
  d.kind_ = Kind::TwoPieceGamma;
  d.p1_ = alpha;
  d.label_ = "huber(" + fmt(alpha) + ")";
  return d;
}

Density mixture(const Eigen::VectorXd& weights, std::vector<Density> components) {
  if (weights.size() == 0 ||
      weights.size() != static_cast<Eigen::Index>(components.size())) {
    throw InvalidWeights("mixture needs matching, nonempty weights and components");
  }
  if ((weights.array() < 0.0).any()) {
    throw InvalidWeights("mixture weights must be nonnegative");
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidWeights("mixture weights must sum to 1 (got " + fmt(total) + ")");
  }
  Density d;
  d.kind_ = Density::Kind::Mixture;
  d.weights_ = weights;
  d.components_ = std::move(components);
  std::string label = "mix(";
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (i > 0) label += "+";
    label += fmt(weights[i]) + "*" + d.components_[static_cast<std::size_t>(i)].label();
  }
  d.label_ = label + ")";
  return d;
}

double Density::log_pdf(double x) const {
  switch (kind_) {
    case Kind::Normal: {
      const double u = (x - p1_) / p2_;
      return -0.5 * u * u - std::log(p2_) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    case Kind::Logistic: {
      const double u = std::abs((x - p1_) / p2_);
      return -u - 2.0 * std::log1p(std::exp(-u)) - std::log(p2_);
    }
    case Kind::TwoPieceGamma: {
      if (x == 0.0) return kNegInf;
      const double ax = std::abs(x);
      const double lw = x > 0.0 ? std::log(p1_) : std::log1p(-p1_);
      return lw + 5.0 * std::log(ax) - ax - kLogGamma6;
    }
    case Kind::Mixture: {
      double max_term = kNegInf;
      std::vector<double> terms(components_.size());
      for (std::size_t i = 0; i < components_.size(); ++i) {
        const double w = weights_[static_cast<Eigen::Index>(i)];
        terms[i] = w > 0.0 ? std::log(w) + components_[i].log_pdf(x) : kNegInf;
        max_term = std::max(max_term, terms[i]);
      }
      if (max_term == kNegInf) return kNegInf;
      double sum = 0.0;
      for (double t : terms) sum += std::exp(t - max_term);
      return max_term + std::log(sum);
    }
  }
  return kNegInf;
}

double Density::pdf(double x) const {
  const double lp = log_pdf(x);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double Density::cdf(double x) const {
  switch (kind_) {
    case Kind::Normal:
      return normal_cdf((x - p1_) / p2_);
    case Kind::Logistic:
      return 0.5 * (1.0 + std::tanh(0.5 * (x - p1_) / p2_));
    case Kind::TwoPieceGamma:
      return x >= 0.0 ? 1.0 - p1_ * erlang6_upper(x)
                      : (1.0 - p1_) * erlang6_upper(-x);
    case Kind::Mixture: {
      double acc = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        acc += weights_[static_cast<Eigen::Index>(i)] * components_[i].cdf(x);
      }
      return std::clamp(acc, 0.0, 1.0);
    }
  }
  return 0.0;
}

LogDerivatives Density::log_derivatives(double x, int order) const {
  if (order < 0 || order > 4) {
    throw ValidationError("log_derivatives supports orders 0..4");
  }
  LogDerivatives out;
  out.x = x;
  out.order = order;
  const double lp = log_pdf(x);
  if (lp == kNegInf) throw DensityZeroAtPoint(x);
  out.z[0] = lp;
  switch (kind_) {
    case Kind::Normal: {
      const double inv_v = 1.0 / (p2_ * p2_);
      out.z[1] = -(x - p1_) * inv_v;
      out.z[2] = -inv_v;
      out.z[3] = 0.0;
      out.z[4] = 0.0;
      break;
    }
    case Kind::Logistic: {
      const double s = p2_;
      const double t = std::tanh(0.5 * (x - p1_) / s);
      const double sech2 = 1.0 - t * t;
      out.z[1] = -t / s;
      out.z[2] = -sech2 / (2.0 * s * s);
      out.z[3] = t * sech2 / (2.0 * s * s * s);
      out.z[4] = sech2 * (1.0 - 3.0 * t * t) / (4.0 * s * s * s * s);
      break;
    }
    case Kind::TwoPieceGamma: {
      const double sign = x > 0.0 ? 1.0 : -1.0;
      out.z[1] = 5.0 / x - sign;
      out.z[2] = -5.0 / (x * x);
      out.z[3] = 10.0 / (x * x * x);
      out.z[4] = -30.0 / (x * x * x * x);
      break;
    }
    case Kind::Mixture: {
      const auto r = derivative_ratios(x);
      const auto z = z_from_ratios(r);
      for (int j = 1; j <= 4; ++j) out.z[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)];
      break;
    }
  }
  for (int j = order + 1; j <= 4; ++j) out.z[static_cast<std::size_t>(j)] = 0.0;
  return out;
}

std::array<double, 5> Density::derivative_ratios(double x) const {
  if (kind_ != Kind::Mixture) {
    return ratios_from_z(log_derivatives(x, 4).z);
  }
  const double lr = log_pdf(x);
  if (lr == kNegInf) throw DensityZeroAtPoint(x);
  std::array<double, 5> acc{};
  acc[0] = 1.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double w = weights_[static_cast<Eigen::Index>(i)];
    if (w <= 0.0) continue;
    // responsibility of component i at x, computed in log space
    const double c = std::exp(std::log(w) + components_[i].log_pdf(x) - lr);
    const auto ri = components_[i].derivative_ratios(x);
    for (int j = 1; j <= 4; ++j) acc[static_cast<std::size_t>(j)] += c * ri[static_cast<std::size_t>(j)];
  }
  return acc;
}

double Density::mean() const {
  switch (kind_) {
    case Kind::Normal:
    case Kind::Logistic:
      return p1_;
    case Kind::TwoPieceGamma:
      return 6.0 * (2.0 * p1_ - 1.0);
    case Kind::Mixture: {
      double m = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        m += weights_[static_cast<Eigen::Index>(i)] * components_[i].mean();
      }
      return m;
    }
  }
  return 0.0;
}

double Density::variance() const {
  switch (kind_) {
    case Kind::Normal:
      return p2_ * p2_;
    case Kind::Logistic:
      return p2_ * p2_ * std::numbers::pi * std::numbers::pi / 3.0;
    case Kind::TwoPieceGamma: {
      const double m = mean();
      return 42.0 - m * m;  // E X^2 = E mag^2 = Var + mean^2 of Erlang(6,1)
    }
    case Kind::Mixture: {
      const double m = mean();
      double second = 0.0;
      for (std::size_t i = 0; i < components_.size(); ++i) {
        const Density& c = components_[i];
        second += weights_[static_cast<Eigen::Index>(i)] *
                  (c.variance() + c.mean() * c.mean());
      }
      return second - m * m;
    }
  }
  return 0.0;
}

double Density::std_dev() const { return std::sqrt(variance()); }

bool Density::in_reference_class() const {
  switch (kind_) {
    case Kind::Normal:
    case Kind::Logistic:
      return true;
    case Kind::TwoPieceGamma:
      return false;  // vanishes at the origin
    case Kind::Mixture:
      return std::all_of(components_.begin(), components_.end(),
                         [](const Density& c) { return c.in_reference_class(); });
  }
  return false;
}

double sample_one(const Density& p, CounterRng& rng) {
  switch (p.kind()) {
    case Density::Kind::Normal:
      return p.param1() + p.param2() * rng.next_normal();
    case Density::Kind::Logistic: {
      const double u = rng.next_uniform();
      return p.param1() + p.param2() * std::log(u / (1.0 - u));
    }
    case Density::Kind::TwoPieceGamma: {
      const bool positive = rng.next_uniform() < p.param1();
      double mag = 0.0;
      for (int i = 0; i < 6; ++i) mag -= std::log(rng.next_uniform());
      return positive ? mag : -mag;
    }
    case Density::Kind::Mixture: {
      const double u = rng.next_uniform();
      double cum = 0.0;
      Eigen::Index idx = p.weights().size() - 1;
      for (Eigen::Index i = 0; i < p.weights().size(); ++i) {
        cum += p.weights()[i];
        if (u < cum) {
          idx = i;
          break;
        }
      }
      return sample_one(p.components()[static_cast<std::size_t>(idx)], rng);
    }
  }
  return 0.0;
}

Eigen::VectorXd sample(const Density& p, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample requires n >= 1");
  CounterRng rng(seed);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = sample_one(p, rng);
  return out;
}

std::vector<double> integration_breakpoints(const Density& p) {
  std::vector<std::pair<double, const Density*>> leaves;
  collect_leaves(p, 1.0, leaves);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> pts;
  bool has_kink = false;
  for (const auto& [w, leaf] : leaves) {
    const double m = leaf->mean();
    const double s = leaf->std_dev();
    lo = std::min(lo, m - 12.0 * s);
    hi = std::max(hi, m + 12.0 * s);
    for (double f : {m - 4.0 * s, m - s, m, m + s, m + 4.0 * s}) pts.push_back(f);
    if (leaf->kind() == Density::Kind::TwoPieceGamma) has_kink = true;
  }
  if (has_kink) pts.push_back(0.0);
  std::vector<double> out{lo};
  std::sort(pts.begin(), pts.end());
  for (double f : pts) {
    if (f > lo && f < hi && f - out.back() > 1e-9) out.push_back(f);
  }
  out.push_back(hi);
  return out;
}

std::vector<double> integration_breakpoints(const Density& p, const Density& q) {
  std::vector<double> base = integration_breakpoints(p);
  const double lo = base.front();
  const double hi = base.back();
  std::vector<std::pair<double, const Density*>> leaves;
  collect_leaves(q, 1.0, leaves);
  for (const auto& [w, leaf] : leaves) {
    const double m = leaf->mean();
    const double s = leaf->std_dev();
    for (double f : {m - 4.0 * s, m - s, m, m + s, m + 4.0 * s}) {
      if (f > lo && f < hi) base.push_back(f);
    }
    if (leaf->kind() == Density::Kind::TwoPieceGamma && 0.0 > lo && 0.0 < hi) {
      base.push_back(0.0);
    }
  }
  std::sort(base.begin(), base.end());
  std::vector<double> out;
  for (double f : base) {
    if (out.empty() || f - out.back() > 1e-9) out.push_back(f);
  }
  return out;
}

namespace {

struct TailProbes {
  std::vector<double> pos;  // ascending x >= 10
  std::vector<double> neg;  // descending x <= -10 (|x| ascending)
};

TailProbes split_tails(const Eigen::VectorXd& probes) {
  TailProbes t;
  for (Eigen::Index i = 0; i < probes.size(); ++i) {
    const double x = probes[i];
    if (x >= 10.0) t.pos.push_back(x);
    if (x <= -10.0) t.neg.push_back(x);
  }
  std::sort(t.pos.begin(), t.pos.end());
  std::sort(t.neg.begin(), t.neg.end(), std::greater<>());
  return t;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] * (1.0 + 1e-9) + 1e-300) return false;
  }
  return true;
}

}  // namespace

ClassPReport class_p_diagnostics(const DensityProbeFns& fns, const Eigen::VectorXd& probes) {
  ClassPReport rep;
  rep.declared_member = fns.declared_member;

  for (Eigen::Index i = 0; i < probes.size(); ++i) {
    const double x = probes[i];
    if (!(fns.log_pdf(x) > kNegInf)) {
      rep.p1_positive = false;
      rep.p1_failures.push_back(x);
    }
  }

  const TailProbes tails = split_tails(probes);
  const auto check_side = [&](const std::vector<double>& side, const char sign) {
    if (side.size() < 2) return;
    std::vector<std::array<double, 5>> ratios(side.size());
    std::vector<double> lps(side.size());
    for (std::size_t t = 0; t < side.size(); ++t) {
      lps[t] = fns.log_pdf(side[t]);
      ratios[t] = lps[t] > kNegInf ? fns.derivative_ratios(side[t])
                                   : std::array<double, 5>{};
    }
    // (P3): |x|^m p^(j)(x) must fall toward zero along the tail probes.
    for (double m : {1.0, 2.0, 4.0}) {
      for (int j = 0; j <= 4; ++j) {
        std::vector<double> v(side.size());
        for (std::size_t t = 0; t < side.size(); ++t) {
          const double pj = lps[t] > kNegInf
                                ? std::exp(lps[t]) * ratios[t][static_cast<std::size_t>(j)]
                                : 0.0;
          v[t] = std::pow(std::abs(side[t]), m) * std::abs(pj);
        }
        if (!non_increasing(v)) {
          rep.p3_decay = false;
          rep.p3_failures.push_back("m=" + std::to_string(static_cast<int>(m)) +
                                    ",j=" + std::to_string(j) + ",side=" + sign);
        }
      }
    }
    // (P4): |x|^-a |(ln p)^(j)(x)| must fall toward zero along the tail probes.
    for (int j = 1; j <= 4; ++j) {
      std::vector<double> v;
      for (std::size_t t = 0; t < side.size(); ++t) {
        if (!(lps[t] > kNegInf)) continue;
        const auto z = z_from_ratios(ratios[t]);
        v.push_back(std::pow(std::abs(side[t]), -rep.probe_exponent_a) *
                    std::abs(z[static_cast<std::size_t>(j)]));
      }
      if (!non_increasing(v)) {
        rep.p4_log_derivative_decay = false;
        rep.p4_failures.push_back("j=" + std::to_string(j) + ",side=" + sign);
      }
    }
  };
  check_side(tails.pos, '+');
  check_side(tails.neg, '-');
  return rep;
}

ClassPReport class_p_diagnostics(const Density& p, const Eigen::VectorXd& probes) {
  DensityProbeFns fns;
  fns.log_pdf = [&p](double x) { return p.log_pdf(x); };
  fns.derivative_ratios = [&p](double x) { return p.derivative_ratios(x); };
  fns.declared_member = p.in_reference_class();
  return class_p_diagnostics(fns, probes);
}

Eigen::VectorXd default_class_p_probes() {
  // Tail probes sit at |x| in {12, 20, 30}: far enough out that pre-asymptotic
  // humps (the two-piece gamma's x^5 factor peaks near x = 9) are behind us.
  Eigen::VectorXd probes(17);
  probes << -30.0, -20.0, -12.0, -5.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0,
      3.0, 5.0, 12.0, 20.0, 30.0;
  return probes;
}

}  // namespace scorelab
