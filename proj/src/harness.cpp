#include "scorelab/harness.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "scorelab/errors.hpp"
#include "scorelab/rng.hpp"
#include "scorelab/scores.hpp"

namespace scorelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Civil date helpers (proleptic Gregorian), after Hinnant.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yy = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

std::string iso_timestamp(long epoch_day) {
  int y, m, d;
  civil_from_days(epoch_day, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT00:00:00Z", y, m, d);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double parse_number(const std::string& field, int line_no, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid number '" + field +
                     "' in column " + column);
  }
  return v;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double log_normal_pdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (std::log(kTwoPi * variance) + r * r / variance);
}

struct TrainData {
  Eigen::MatrixXd f;  // n x k member forecasts
  Eigen::VectorXd y;  // n observations
};

TrainData observed_rows(const std::vector<ForecastCase>& train, int k) {
  std::vector<const ForecastCase*> rows;
  for (const auto& c : train) {
    if (!c.observation) continue;
    if (c.ensemble.size() != k) {
      throw InconsistentEnsembleSize("training case " + c.case_id + " has " +
                                     std::to_string(c.ensemble.size()) +
                                     " members, expected " + std::to_string(k));
    }
    rows.push_back(&c);
  }
  TrainData data;
  data.f.resize(static_cast<Eigen::Index>(rows.size()), k);
  data.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.f.row(static_cast<Eigen::Index>(i)) = rows[i]->ensemble.transpose();
    data.y[static_cast<Eigen::Index>(i)] = *rows[i]->observation;
  }
  return data;
}

}  // namespace

std::vector<ForecastCase> load_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 6 || header[0] != "case_id" || header[1] != "valid_time" ||
      header[2] != "station" || header[3] != "obs") {
    throw ParseError("header must be case_id,valid_time,station,obs,f1..fk");
  }
  const int k = static_cast<int>(header.size()) - 4;
  std::vector<ForecastCase> cases;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InconsistentEnsembleSize(
          "line " + std::to_string(line_no) + ": expected " +
          std::to_string(header.size()) + " columns, got " +
          std::to_string(fields.size()));
    }
    ForecastCase c;
    c.case_id = fields[0];
    c.valid_time = fields[1];
    c.station = fields[2];
    if (!fields[3].empty()) c.observation = parse_number(fields[3], line_no, "obs");
    c.ensemble.resize(k);
    for (int i = 0; i < k; ++i) {
      c.ensemble[i] = parse_number(fields[static_cast<std::size_t>(4 + i)], line_no,
                                   "f" + std::to_string(i + 1));
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

void write_cases_csv(const std::string& path, const std::vector<ForecastCase>& cases) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  const int k = cases.empty() ? 2 : static_cast<int>(cases.front().ensemble.size());
  out << "case_id,valid_time,station,obs";
  for (int i = 1; i <= k; ++i) out << ",f" << i;
  out << "\n";
  for (const auto& c : cases) {
    out << c.case_id << ',' << c.valid_time << ',' << c.station << ',';
    if (c.observation) out << format_full(*c.observation);
    for (int i = 0; i < k; ++i) out << ',' << format_full(c.ensemble[i]);
    out << "\n";
  }
}

BmaParams fit_bma(const std::vector<ForecastCase>& train, int k) {
  const TrainData data = observed_rows(train, k);
  const Eigen::Index n = data.y.size();
  if (n < k + 2) {
    throw InsufficientTraining("BMA needs at least k+2 observed cases, got " +
                               std::to_string(n));
  }
  BmaParams params;
  params.a.resize(k);
  params.b.resize(k);
  const double y_bar = data.y.mean();
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd fi = data.f.col(i);
    const double f_bar = fi.mean();
    const double sxx = (fi.array() - f_bar).square().sum();
    if (sxx <= 1e-12 * static_cast<double>(n)) {
      // Constant member forecasts: collapse to an intercept-only regression.
      params.a[i] = y_bar;
      params.b[i] = 0.0;
    } else {
      const double sxy = ((fi.array() - f_bar) * (data.y.array() - y_bar)).sum();
      params.b[i] = sxy / sxx;
      params.a[i] = y_bar - params.b[i] * f_bar;
    }
  }

  // Component means are fixed after bias correction; EM updates (w, sigma2).
  Eigen::MatrixXd err(n, k);
  for (int i = 0; i < k; ++i) {
    err.col(i) = data.y.array() - (params.a[i] + params.b[i] * data.f.col(i).array());
  }
  params.w = Eigen::VectorXd::Constant(k, 1.0 / k);
  params.sigma2 = std::max(err.array().square().mean(), 1e-8);

  double prev_ll = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd resp(n, k);
  for (int iter = 1; iter <= 500; ++iter) {
    params.em_iterations = iter;
    double ll = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      double best = -std::numeric_limits<double>::infinity();
      Eigen::VectorXd lp(k);
      for (int i = 0; i < k; ++i) {
        lp[i] = params.w[i] > 0.0
                    ? std::log(params.w[i]) + log_normal_pdf(err(t, i), 0.0, params.sigma2)
                    : -std::numeric_limits<double>::infinity();
        best = std::max(best, lp[i]);
      }
      double denom = 0.0;
      for (int i = 0; i < k; ++i) denom += std::exp(lp[i] - best);
      for (int i = 0; i < k; ++i) resp(t, i) = std::exp(lp[i] - best) / denom;
      ll += best + std::log(denom);
    }
    params.w = resp.colwise().mean().transpose();
    params.w /= params.w.sum();
    params.sigma2 =
        std::max((resp.array() * err.array().square()).sum() / static_cast<double>(n),
                 1e-12);
    if (std::abs(ll - prev_ll) < 1e-8) {
      params.converged = true;
      break;
    }
    prev_ll = ll;
  }
  return params;
}

EmosParams fit_emos(const std::vector<ForecastCase>& train, int k) {
  const TrainData data = observed_rows(train, k);
  const Eigen::Index n = data.y.size();
  if (n < k + 3) {
    throw InsufficientTraining("EMOS needs at least k+3 observed cases, got " +
                               std::to_string(n));
  }
  // Optimize over standardized member forecasts; the model is unchanged and
  // the coefficients are mapped back exactly, but gradient descent sees a
  // far better conditioned problem.
  Eigen::VectorXd col_mean(k), col_scale(k);
  Eigen::MatrixXd fs(n, k);
  for (int i = 0; i < k; ++i) {
    col_mean[i] = data.f.col(i).mean();
    const double sd = std::sqrt(
        (data.f.col(i).array() - col_mean[i]).square().sum() / static_cast<double>(n));
    col_scale[i] = sd > 1e-8 ? sd : 0.0;
    if (col_scale[i] > 0.0) {
      fs.col(i) = (data.f.col(i).array() - col_mean[i]) / col_scale[i];
    } else {
      fs.col(i).setZero();
    }
  }

  Eigen::MatrixXd X(n, k + 1);
  X.col(0).setOnes();
  X.rightCols(k) = fs;
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(data.y);

  Eigen::VectorXd s2(n);
  for (Eigen::Index t = 0; t < n; ++t) s2[t] = ensemble_variance(data.f.row(t).transpose());

  const Eigen::VectorXd fitted_residual = data.y - X * beta;
  const double resvar = fitted_residual.squaredNorm() / static_cast<double>(n);
  const double d0 = 0.1;
  const double c0 = std::max(resvar - d0 * s2.mean(), 1e-4);

  // theta = (a~, b~1..b~k, gamma, delta) with c = exp(gamma), d = exp(delta)
  Eigen::VectorXd theta(k + 3);
  theta.head(k + 1) = beta;
  theta[k + 1] = std::log(c0);
  theta[k + 2] = std::log(d0);

  const auto objective_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* grad) {
    const double c = std::exp(th[k + 1]);
    const double d = std::exp(th[k + 2]);
    if (grad) grad->setZero(k + 3);
    double total = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double m = th[0] + fs.row(t).dot(th.segment(1, k));
      const double v = c + d * s2[t];
      const double r = data.y[t] - m;
      total += 0.5 * std::log(kTwoPi * v) + 0.5 * r * r / v;
      if (grad) {
        const double dL_dm = -r / v;
        const double dL_dv = 0.5 / v - 0.5 * r * r / (v * v);
        (*grad)[0] += dL_dm;
        grad->segment(1, k) += dL_dm * fs.row(t).transpose();
        (*grad)[k + 1] += dL_dv * c;
        (*grad)[k + 2] += dL_dv * d * s2[t];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    if (grad) *grad *= inv_n;
    return total * inv_n;
  };

  EmosParams params;
  Eigen::VectorXd grad(k + 3);
  double value = objective_grad(theta, &grad);
  for (int iter = 1; iter <= 2000; ++iter) {
    params.iterations = iter;
    const double gnorm = grad.norm();
    if (gnorm < 1e-8) {
      params.converged = true;
      break;
    }
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      const Eigen::VectorXd trial = theta - step * grad;
      const double trial_value = objective_grad(trial, nullptr);
      if (std::isfinite(trial_value) &&
          trial_value <= value - 1e-4 * step * gnorm * gnorm) {
        theta = trial;
        value = objective_grad(theta, &grad);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step available at this scale
  }

  params.b.resize(k);
  double intercept = theta[0];
  for (int i = 0; i < k; ++i) {
    params.b[i] = col_scale[i] > 0.0 ? theta[1 + i] / col_scale[i] : 0.0;
    intercept -= params.b[i] * col_mean[i];
  }
  params.a = intercept;
  params.c = std::exp(theta[k + 1]);
  params.d = std::exp(theta[k + 2]);
  return params;
}

Density bma_predictive(const BmaParams& params, const Eigen::VectorXd& ensemble) {
  const int k = static_cast<int>(params.w.size());
  std::vector<Density> comps;
  comps.reserve(static_cast<std::size_t>(k));
  const double sigma = std::sqrt(params.sigma2);
  for (int i = 0; i < k; ++i) {
    comps.push_back(Density::normal(params.a[i] + params.b[i] * ensemble[i], sigma));
  }
  Eigen::VectorXd w = params.w / params.w.sum();
  return mixture(w, std::move(comps));
}

Density emos_predictive(const EmosParams& params, const Eigen::VectorXd& ensemble) {
  const double m = params.a + params.b.dot(ensemble);
  const double v = params.c + params.d * ensemble_variance(ensemble);
  return Density::normal(m, std::sqrt(v));
}

double ensemble_variance(const Eigen::VectorXd& ensemble) {
  const double m = ensemble.mean();
  return (ensemble.array() - m).square().sum() / static_cast<double>(ensemble.size());
}

Density smoothed_ensemble(const ForecastCase& c) {
  const double v = ensemble_variance(c.ensemble);
  if (v <= 1e-12) {
    throw DegenerateEnsemble("ensemble variance vanishes for case " + c.case_id);
  }
  return Density::normal(c.ensemble.mean(), std::sqrt(v));
}

namespace {

using Scorer = std::function<double(double, const Density&)>;

std::vector<std::pair<std::string, Scorer>> make_scorers(
    const std::vector<std::string>& ids) {
  std::vector<std::pair<std::string, Scorer>> out;
  for (const auto& id : ids) {
    if (id == "ls" || id == "hs" || id == "lcs") {
      const LocalScore s = id == "ls"   ? logarithmic_score()
                           : id == "hs" ? hyvarinen_score()
                                        : log_cosh_score();
      out.emplace_back(id, [s](double x, const Density& q) { return eval_local(s, x, q); });
    } else if (id == "qs") {
      out.emplace_back(id, [](double x, const Density& q) { return quadratic_score(x, q); });
    } else if (id == "sphs") {
      out.emplace_back(id, [](double x, const Density& q) { return spherical_score(x, q); });
    } else {
      throw ValidationError("unknown score id for evaluation: " + id);
    }
  }
  return out;
}

struct DateBlock {
  std::vector<std::string> case_ids;
  std::vector<Eigen::MatrixXd> values;
  std::vector<SkipRecord> skipped;
};

}  // namespace

Evaluation rolling_evaluate(const std::vector<ForecastCase>& cases,
                            const EvaluateConfig& config) {
  const auto scorers = make_scorers(config.scores);
  std::vector<std::string> methods{"BMA", "EMOS", "SmoothedEnsemble"};
  if (config.truth) methods.push_back("Truth");

  // Group case indices by distinct valid date, in order of appearance.
  std::vector<std::string> dates;
  std::map<std::string, int> date_index;
  std::vector<std::vector<int>> by_date;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const std::string date = cases[ci].valid_time.substr(0, 10);
    auto it = date_index.find(date);
    if (it == date_index.end()) {
      it = date_index.emplace(date, static_cast<int>(dates.size())).first;
      dates.push_back(date);
      by_date.emplace_back();
    }
    by_date[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(ci));
  }

  const int warmup = std::max(config.train_len_bma, config.train_len_emos);
  if (static_cast<int>(dates.size()) <= warmup) {
    throw InsufficientTraining("need more than " + std::to_string(warmup) +
                               " distinct valid dates before evaluation can start");
  }
  const int k = static_cast<int>(cases.front().ensemble.size());

  std::vector<int> eval_dates;
  for (int di = warmup; di < static_cast<int>(dates.size()); ++di) eval_dates.push_back(di);

  const auto window_cases = [&](int di, int len) {
    std::vector<ForecastCase> out;
    for (int w = di - len; w < di; ++w) {
      for (int ci : by_date[static_cast<std::size_t>(w)]) {
        out.push_back(cases[static_cast<std::size_t>(ci)]);
      }
    }
    return out;
  };

  const auto process_date = [&](int di) {
    DateBlock block;
    std::optional<BmaParams> bma;
    std::optional<EmosParams> emos;
    std::string fit_failure;
    try {
      bma = fit_bma(window_cases(di, config.train_len_bma), k);
      emos = fit_emos(window_cases(di, config.train_len_emos), k);
    } catch (const Error& e) {
      fit_failure = e.what();
    }
    for (int ci : by_date[static_cast<std::size_t>(di)]) {
      const ForecastCase& c = cases[static_cast<std::size_t>(ci)];
      if (!fit_failure.empty()) {
        block.skipped.push_back({c.case_id, "fit failed: " + fit_failure});
        continue;
      }
      if (!c.observation) {
        block.skipped.push_back({c.case_id, "missing observation"});
        continue;
      }
      try {
        std::vector<Density> densities;
        densities.push_back(bma_predictive(*bma, c.ensemble));
        densities.push_back(emos_predictive(*emos, c.ensemble));
        densities.push_back(smoothed_ensemble(c));
        if (config.truth) densities.push_back(config.truth(c));
        Eigen::MatrixXd values(static_cast<Eigen::Index>(densities.size()),
                               static_cast<Eigen::Index>(scorers.size()));
        for (std::size_t mi = 0; mi < densities.size(); ++mi) {
          for (std::size_t si = 0; si < scorers.size(); ++si) {
            const double v = scorers[si].second(*c.observation, densities[mi]);
            if (!std::isfinite(v)) throw NumericError("non-finite score");
            values(static_cast<Eigen::Index>(mi), static_cast<Eigen::Index>(si)) = v;
          }
        }
        block.case_ids.push_back(c.case_id);
        block.values.push_back(std::move(values));
      } catch (const Error& e) {
        block.skipped.push_back({c.case_id, e.what()});
      }
    }
    return block;
  };

  std::vector<DateBlock> blocks(eval_dates.size());
  const int n_threads = std::max(1, config.threads);
  if (n_threads == 1) {
    for (std::size_t j = 0; j < eval_dates.size(); ++j) blocks[j] = process_date(eval_dates[j]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < eval_dates.size();
             j = next.fetch_add(1)) {
          blocks[j] = process_date(eval_dates[j]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Reduce in date order then file order, so the means are bit-stable for any
  // thread count.
  Evaluation ev;
  ev.report.methods = methods;
  ev.report.scores = config.scores;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(methods.size()),
                                              static_cast<Eigen::Index>(scorers.size()));
  for (auto& block : blocks) {
    for (std::size_t i = 0; i < block.case_ids.size(); ++i) {
      sum += block.values[i];
      ev.case_ids.push_back(block.case_ids[i]);
      ev.per_case.push_back(std::move(block.values[i]));
    }
    for (auto& s : block.skipped) ev.skipped.push_back(std::move(s));
  }
  ev.report.n_cases = static_cast<int>(ev.case_ids.size());
  ev.report.n_skipped = static_cast<int>(ev.skipped.size());
  ev.report.means = ev.report.n_cases > 0
                        ? Eigen::MatrixXd(sum / static_cast<double>(ev.report.n_cases))
                        : Eigen::MatrixXd::Zero(sum.rows(), sum.cols());
  ev.report.metadata = {
      "emos objective: mean logarithmic score (minimum CRPS is out of scope)",
      "training windows count distinct valid dates; parameters pooled across stations",
      "smoothed ensemble uses population (divisor k) variance",
  };
  return ev;
}

std::vector<ForecastCase> synth_generate(const SynthConfig& config) {
  if (config.n_days < 1 || config.n_stations < 1 || config.k < 2) {
    throw ValidationError("synth_generate needs n_days >= 1, stations >= 1, k >= 2");
  }
  const int truth_k = std::holds_alternative<BmaParams>(config.truth)
                          ? static_cast<int>(std::get<BmaParams>(config.truth).w.size())
                          : static_cast<int>(std::get<EmosParams>(config.truth).b.size());
  if (truth_k != config.k) {
    throw ValidationError("truth parameters are for k=" + std::to_string(truth_k) +
                          " but config.k=" + std::to_string(config.k));
  }

  const long epoch = days_from_civil(2000, 1, 1);
  const CounterRng root(config.seed);
  std::vector<ForecastCase> cases;
  cases.reserve(static_cast<std::size_t>(config.n_days * config.n_stations));
  for (int day = 0; day < config.n_days; ++day) {
    CounterRng day_rng = root.split(static_cast<std::uint64_t>(day));
    for (int st = 0; st < config.n_stations; ++st) {
      CounterRng rng = day_rng.split(static_cast<std::uint64_t>(st));
      const double offset = config.station_offset_scale * ((st % 5) - 2);
      const double latent = config.latent_base +
                            config.latent_season_amp * std::sin(kTwoPi * day / 365.0) +
                            offset + config.latent_daily_sd * rng.next_normal();
      ForecastCase c;
      char id[32];
      std::snprintf(id, sizeof(id), "D%04dS%02d", day, st);
      c.case_id = id;
      c.valid_time = iso_timestamp(epoch + day);
      char station[16];
      std::snprintf(station, sizeof(station), "S%02d", st);
      c.station = station;
      const double spread =
          config.member_spread *
          (1.0 + config.member_spread_jitter * (2.0 * rng.next_uniform() - 1.0));
      c.ensemble.resize(config.k);
      for (int i = 0; i < config.k; ++i) {
        c.ensemble[i] = latent + spread * rng.next_normal();
      }
      if (const auto* bma = std::get_if<BmaParams>(&config.truth)) {
        const double u = rng.next_uniform();
        double cum = 0.0;
        int j = config.k - 1;
        for (int i = 0; i < config.k; ++i) {
          cum += bma->w[i];
          if (u < cum) {
            j = i;
            break;
          }
        }
        c.observation = bma->a[j] + bma->b[j] * c.ensemble[j] +
                        std::sqrt(bma->sigma2) * rng.next_normal();
      } else {
        const auto& emos = std::get<EmosParams>(config.truth);
        const double m = emos.a + emos.b.dot(c.ensemble);
        const double v = emos.c + emos.d * ensemble_variance(c.ensemble);
        c.observation = m + std::sqrt(v) * rng.next_normal();
      }
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

BmaParams default_bma_truth(int k) {
  BmaParams p;
  p.a.resize(k);
  p.b = Eigen::VectorXd::Ones(k);
  p.w.resize(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += static_cast<double>(k + 1 - i);
  for (int i = 0; i < k; ++i) {
    p.a[i] = k > 1 ? -1.0 + 2.0 * i / (k - 1) : 0.0;
    p.w[i] = static_cast<double>(k + 1 - i) / total;
  }
  p.sigma2 = 2.25;
  p.converged = true;
  return p;
}

EmosParams default_emos_truth(int k) {
  EmosParams p;
  p.a = 1.0;
  p.b.resize(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += static_cast<double>(k + 1 - i);
  for (int i = 0; i < k; ++i) p.b[i] = static_cast<double>(k + 1 - i) / total;
  p.c = 0.25;
  p.d = 0.05;
  p.converged = true;
  return p;
}

std::string format_report_table(const ScoreReport& report) {
  std::ostringstream out;
  const int name_w = 18;
  out << std::string("method").append(name_w - 6, ' ');
  for (const auto& s : report.scores) {
    char cell[32];
    std::snprintf(cell, sizeof(cell), " %14s", s.c_str());
    out << cell;
  }
  out << "\n";
  for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
    std::string name = report.methods[mi];
    if (name.size() < static_cast<std::size_t>(name_w)) {
      name.append(static_cast<std::size_t>(name_w) - name.size(), ' ');
    }
    out << name;
    for (std::size_t si = 0; si < report.scores.size(); ++si) {
      char cell[40];
      std::snprintf(cell, sizeof(cell), " %14.10g",
                    report.means(static_cast<Eigen::Index>(mi),
                                 static_cast<Eigen::Index>(si)));
      out << cell;
    }
    out << "\n";
  }
  out << "n_cases: " << report.n_cases << "  skipped: " << report.n_skipped << "\n";
  return out.str();
}

std::string format_report_json(const Evaluation& evaluation) {
  nlohmann::json j;
  j["n_cases"] = evaluation.report.n_cases;
  j["n_skipped"] = evaluation.report.n_skipped;
  j["scores"] = evaluation.report.scores;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t mi = 0; mi < evaluation.report.methods.size(); ++mi) {
    nlohmann::json row;
    row["method"] = evaluation.report.methods[mi];
    nlohmann::json means;
    for (std::size_t si = 0; si < evaluation.report.scores.size(); ++si) {
      means[evaluation.report.scores[si]] =
          evaluation.report.means(static_cast<Eigen::Index>(mi),
                                  static_cast<Eigen::Index>(si));
    }
    row["means"] = means;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["metadata"] = evaluation.report.metadata;
  nlohmann::json skips = nlohmann::json::array();
  for (const auto& s : evaluation.skipped) {
    skips.push_back({{"case_id", s.case_id}, {"reason", s.reason}});
  }
  j["skipped"] = skips;
  return j.dump(2);
}

}  // namespace scorelab
