#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scorelab/density.hpp"

namespace scorelab {

/// One ensemble forecast / observation record.
struct ForecastCase {
  std::string case_id;
  std::string valid_time;  // ISO-8601, e.g. 2000-04-24T00:00:00Z
  std::string station;
  Eigen::VectorXd ensemble;            // member point forecasts f1..fk, k >= 2
  std::optional<double> observation;   // absent for pure prediction rows
};

/// BMA predictive density parameters: per-member bias correction (a_i, b_i),
/// simplex weights and a common component variance.
struct BmaParams {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd w;
  double sigma2 = 1.0;
  int em_iterations = 0;
  bool converged = false;
};

/// EMOS predictive density parameters: N(a + b.f, c + d s^2) with c > 0 and
/// d >= 0 enforced through an exponential reparameterization during fitting.
struct EmosParams {
  double a = 0.0;
  Eigen::VectorXd b;
  double c = 1.0;
  double d = 0.1;
  int iterations = 0;
  bool converged = false;
};

/// Read cases from CSV with header case_id,valid_time,station,obs,f1..fk.
/// Rows keep file order; an empty obs field yields an absent observation.
/// Throws ParseError (with line number) or InconsistentEnsembleSize.
std::vector<ForecastCase> load_cases(const std::string& path);

/// Write cases in the same CSV schema, full double round-trip precision.
void write_cases_csv(const std::string& path, const std::vector<ForecastCase>& cases);

/// Two-stage BMA fit: per-member ordinary least squares for the bias
/// parameters, then EM for the weights and common variance. Needs at least
/// k + 2 observed training cases. Members with constant forecasts collapse
/// to intercept-only regressions.
BmaParams fit_bma(const std::vector<ForecastCase>& train, int k);

/// EMOS fit by minimum mean logarithmic score with analytic gradients and
/// backtracking gradient descent (stop at gradient norm < 1e-8 or 2000
/// iterations). Needs at least k + 3 observed training cases. On
/// non-convergence the best iterate is returned with converged = false.
EmosParams fit_emos(const std::vector<ForecastCase>& train, int k);

Density bma_predictive(const BmaParams& params, const Eigen::VectorXd& ensemble);
Density emos_predictive(const EmosParams& params, const Eigen::VectorXd& ensemble);

/// Gaussian with the ensemble's empirical mean and population variance
/// (divisor k). Throws DegenerateEnsemble when the variance vanishes.
Density smoothed_ensemble(const ForecastCase& c);

/// Population (divisor k) variance of an ensemble.
double ensemble_variance(const Eigen::VectorXd& ensemble);

struct ScoreReport {
  std::vector<std::string> methods;  // row keys
  std::vector<std::string> scores;   // column keys: ls, hs, lcs, qs, sphs
  Eigen::MatrixXd means;             // methods x scores
  int n_cases = 0;
  int n_skipped = 0;
  std::vector<std::string> metadata;
};

struct SkipRecord {
  std::string case_id;
  std::string reason;
};

/// Full evaluation result: the aggregate report plus per-case score logs in
/// evaluation order (methods x scores per case), from which the report means
/// are exact arithmetic means.
struct Evaluation {
  ScoreReport report;
  std::vector<std::string> case_ids;
  std::vector<Eigen::MatrixXd> per_case;
  std::vector<SkipRecord> skipped;
};

struct EvaluateConfig {
  int train_len_bma = 25;   // trailing distinct valid dates
  int train_len_emos = 40;
  std::vector<std::string> scores{"ls", "hs", "lcs", "qs", "sphs"};
  int threads = 1;
  /// Optional oracle: per-case true predictive density, reported as an
  /// extra "Truth" row (used by synthetic-world checks).
  std::function<Density(const ForecastCase&)> truth;
};

/// Rolling-origin evaluation: for every case on each date with sufficient
/// history, fit BMA and EMOS on their trailing windows of distinct valid
/// dates, score the predictive densities and the smoothed ensemble against
/// the observation, and aggregate mean scores. Cases that cannot be scored
/// are skipped and logged. Parallel execution (threads > 1) reduces in case
/// order, so reports are bit-identical for any thread count.
Evaluation rolling_evaluate(const std::vector<ForecastCase>& cases,
                            const EvaluateConfig& config);

using SynthTruth = std::variant<BmaParams, EmosParams>;

struct SynthConfig {
  int n_days = 100;
  int n_stations = 10;
  int k = 5;
  SynthTruth truth;
  std::uint64_t seed = 42;
  // world shape: members scatter around a latent signal
  double latent_base = 10.0;
  double latent_season_amp = 5.0;
  double latent_daily_sd = 2.0;
  double station_offset_scale = 0.8;
  double member_spread = 2.0;
  // relative per-case variation of the member spread; nonzero values make the
  // ensemble variance vary across cases, which identifies spread coefficients
  double member_spread_jitter = 0.0;
};

/// Deterministic synthetic ensemble world: members are drawn around a latent
/// signal per (day, station) and the observation is drawn from the truth
/// predictive density given the members. A fixed seed gives bit-identical
/// cases; streams are split per (day, station).
std::vector<ForecastCase> synth_generate(const SynthConfig& config);

BmaParams default_bma_truth(int k);
EmosParams default_emos_truth(int k);

std::string format_report_table(const ScoreReport& report);
std::string format_report_json(const Evaluation& evaluation);

}  // namespace scorelab
