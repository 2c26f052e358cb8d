#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "scorelab/analysis.hpp"
#include "scorelab/construction.hpp"
#include "scorelab/density.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/grammar.hpp"
#include "scorelab/harness.hpp"
#include "scorelab/scores.hpp"

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  if (!field.empty()) out.push_back(field);
  return out;
}

std::vector<scorelab::LabeledDensity> parse_family(const std::string& spec) {
  if (spec == "standard") return scorelab::standard_family();
  std::vector<scorelab::LabeledDensity> fam;
  for (const auto& item : split_list(spec)) {
    scorelab::Density d = scorelab::parse_density(item);
    fam.emplace_back(d.label(), std::move(d));
  }
  if (fam.empty()) throw scorelab::ParseError("empty density family");
  return fam;
}

int run(int argc, char** argv) {
  CLI::App app{"scorelab: second-order local proper scoring rules for density forecasts"};
  app.name("scorelab");
  app.require_subcommand(1);

  std::string format = "table";
  std::string rule_id, density_spec, kernel_id, p_spec, q_spec, family_spec = "standard";
  std::string input_path, out_path, skip_log_path;
  double x = 0.0, y0 = 0.0, y1 = 0.0, y2 = 0.0;
  double z2_probe = 0.0, z3_probe = 0.5;
  double grid_lo = -3.0, grid_hi = 3.0;
  int grid_n = 21;
  double tol = 1e-6;
  int points = 33;
  int days = 100, stations = 10, members = 5, threads = 1;
  std::uint64_t seed = 42;
  std::string truth_kind = "bma";
  int train_bma = 25, train_emos = 40;
  std::string scores_list = "ls,hs,lcs,qs,sphs";

  auto* score_cmd = app.add_subcommand("score", "evaluate a scoring rule at a point");
  score_cmd->add_option("--rule", rule_id, "ls|hs|lcs|qs|sphs|power:n:c")->required();
  score_cmd->add_option("--density", density_spec, "forecast density spec")->required();
  score_cmd->add_option("--x", x, "realized value")->required();
  score_cmd->add_option("--format", format, "table|json");

  auto* construct_cmd =
      app.add_subcommand("construct", "build a score from a kernel and certify concavity");
  construct_cmd->add_option("--kernel", kernel_id, "power:n:c|logcosh|log")->required();
  auto* cx = construct_cmd->add_option("--x", x, "evaluation point x");
  construct_cmd->add_option("--y0", y0, "evaluation point y0");
  construct_cmd->add_option("--y1", y1, "evaluation point y1");
  construct_cmd->add_option("--y2", y2, "evaluation point y2");
  construct_cmd->add_option("--grid-lo", grid_lo, "concavity grid lower bound");
  construct_cmd->add_option("--grid-hi", grid_hi, "concavity grid upper bound");
  construct_cmd->add_option("--grid-n", grid_n, "concavity grid points per axis");
  construct_cmd->add_option("--format", format, "table|json");

  auto* recover_cmd = app.add_subcommand("recover", "reconstruct the kernel of a score");
  recover_cmd->add_option("--rule", rule_id, "ls|hs|lcs|power:n:c")->required();
  recover_cmd->add_option("--z2", z2_probe, "z2 probe value");
  recover_cmd->add_option("--z3", z3_probe, "z3 probe value");
  recover_cmd->add_option("--format", format, "table|json");

  auto* check_cmd = app.add_subcommand("check", "propriety scan over a density family");
  auto* check_rule = check_cmd->add_option("--rule", rule_id, "ls|hs|lcs|qs|sphs|power:n:c");
  check_cmd->add_option("--score", rule_id, "alias for --rule")->excludes(check_rule);
  check_cmd->add_option("--family", family_spec, "'standard' or comma-separated specs");
  check_cmd->add_option("--tol", tol, "strictness tolerance");
  check_cmd->add_option("--format", format, "table|json");

  auto* diverge_cmd = app.add_subcommand("diverge", "divergence between two densities");
  diverge_cmd->add_option("--rule", rule_id, "ls|hs|lcs|power:n:c|kl|fi")->required();
  diverge_cmd->add_option("--p", p_spec, "data density spec")->required();
  diverge_cmd->add_option("--q", q_spec, "forecast density spec")->required();
  diverge_cmd->add_option("--format", format, "table|json");

  auto* euler_cmd = app.add_subcommand("euler", "Euler stationarity residual on a grid");
  euler_cmd->add_option("--rule", rule_id, "ls|hs|lcs|power:n:c")->required();
  euler_cmd->add_option("--density", density_spec, "density spec")->required();
  euler_cmd->add_option("--points", points, "grid points across mean +- 4 stdev");
  euler_cmd->add_option("--format", format, "table|json");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic ensemble world");
  synth_cmd->add_option("--days", days, "number of days");
  synth_cmd->add_option("--stations", stations, "stations per day");
  synth_cmd->add_option("--members", members, "ensemble members k");
  synth_cmd->add_option("--seed", seed, "random seed");
  synth_cmd->add_option("--truth", truth_kind, "bma|emos");
  synth_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* eval_cmd = app.add_subcommand("evaluate", "rolling forecast evaluation");
  eval_cmd->add_option("--input", input_path, "input CSV path")->required();
  eval_cmd->add_option("--train-bma", train_bma, "BMA training window (distinct days)");
  eval_cmd->add_option("--train-emos", train_emos, "EMOS training window (distinct days)");
  eval_cmd->add_option("--scores", scores_list, "comma-separated score ids");
  eval_cmd->add_option("--threads", threads, "worker threads (means are bit-stable)");
  eval_cmd->add_option("--skip-log", skip_log_path, "write skipped cases to CSV");
  eval_cmd->add_option("--format", format, "table|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (format != "table" && format != "json") {
    std::cerr << "unknown format '" << format << "' (expected table or json)\n";
    return 2;
  }

  if (score_cmd->parsed()) {
    const scorelab::ScoreRule rule = scorelab::parse_score_rule(rule_id);
    const scorelab::Density q = scorelab::parse_density(density_spec);
    const double value = rule.point(x, q);
    if (format == "json") {
      json j{{"rule", rule_id}, {"density", q.label()}, {"x", x}, {"value", value}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << num(value) << "\n";
    }
    return 0;
  }

  if (construct_cmd->parsed()) {
    const scorelab::Kernel K = scorelab::parse_kernel(kernel_id);
    const scorelab::LocalScore s = scorelab::construct_score(K);
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(grid_n, grid_lo, grid_hi);
    const scorelab::ConcavityReport rep = scorelab::concavity_report(K, grid, grid);
    const scorelab::GrowthProbe growth = scorelab::growth_probe(K, grid, grid);
    const bool have_point = cx->count() > 0;
    const double value = have_point ? s.eval(x, y0, y1, y2) : 0.0;
    if (format == "json") {
      json j{{"kernel", kernel_id},
             {"c_ok", rep.c_ok},
             {"min_d11", rep.min_d11},
             {"max_d11", rep.max_d11},
             {"verdict", rep.verdict},
             {"growth", {{"C", growth.C}, {"r", growth.r}}},
             {"grid", {{"lo", grid_lo}, {"hi", grid_hi}, {"n", grid_n}}}};
      if (have_point) j["value"] = value;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "kernel " << kernel_id << ": " << rep.verdict
                << " (c_ok=" << (rep.c_ok ? "yes" : "no") << ", min d11 " << num(rep.min_d11)
                << ", max d11 " << num(rep.max_d11) << ")\n";
      std::cout << "growth envelope: C = " << num(growth.C) << ", r = " << num(growth.r)
                << " (descriptive, grid only)\n";
      if (have_point) {
        std::cout << "s(" << num(x) << "," << num(y0) << "," << num(y1) << "," << num(y2)
                  << ") = " << num(value) << "\n";
      }
    }
    return 0;
  }

  if (recover_cmd->parsed()) {
    const scorelab::ScoreRule rule = scorelab::parse_score_rule(rule_id);
    if (!rule.is_local) throw scorelab::ParseError("recover needs a local rule");
    const scorelab::KernelRecovery rec =
        scorelab::recover_kernel(rule.local, z2_probe, z3_probe);
    json samples = json::array();
    for (double yy : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      samples.push_back({{"x", 0.0}, {"y1", yy}, {"k0", rec.kernel.k0(0.0, yy)}});
    }
    if (format == "json") {
      json j{{"rule", rule_id},
             {"c", rec.c},
             {"d2_residual", rec.d2_residual},
             {"d0_residual", rec.d0_residual},
             {"z2_probe", rec.z2_probe},
             {"z3_probe", rec.z3_probe},
             {"k0_samples", samples}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "c = " << num(rec.c) << "\nd2 residual = " << num(rec.d2_residual)
                << "\nd0 residual = " << num(rec.d0_residual) << "\nK0(0, y1):\n";
      for (const auto& s : samples) {
        std::cout << "  y1 = " << num(s["y1"].get<double>()) << "  K0 = "
                  << num(s["k0"].get<double>()) << "\n";
      }
    }
    return 0;
  }

  if (check_cmd->parsed()) {
    const scorelab::ScoreRule rule = scorelab::parse_score_rule(rule_id);
    const auto family = parse_family(family_spec);
    const scorelab::ProprietyReport rep = scorelab::propriety_scan(rule.point, family, tol);
    if (format == "json") {
      json j = scorelab::propriety_report_to_json(rep);
      j["rule"] = rule_id;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "rule " << rule_id << " over " << family.size() << " densities\n"
                << "min margin = " << num(rep.min_margin) << "\n"
                << "strict violations: " << rep.strict_violations.size() << "\n";
      for (const auto& v : rep.strict_violations) {
        std::cout << "  " << v.p_id << " vs " << v.q_id << ": " << num(v.margin) << "\n";
      }
    }
    return 0;
  }

  if (diverge_cmd->parsed()) {
    const scorelab::Density p = scorelab::parse_density(p_spec);
    const scorelab::Density q = scorelab::parse_density(q_spec);
    double value = 0.0;
    if (rule_id == "kl") {
      value = scorelab::kl_divergence(p, q);
    } else if (rule_id == "fi") {
      value = scorelab::fisher_divergence(p, q);
    } else {
      const scorelab::ScoreRule rule = scorelab::parse_score_rule(rule_id);
      value = scorelab::divergence(rule.point, p, q);
    }
    if (format == "json") {
      json j{{"rule", rule_id}, {"p", p.label()}, {"q", q.label()}, {"value", value}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << num(value) << "\n";
    }
    return 0;
  }

  if (euler_cmd->parsed()) {
    const scorelab::ScoreRule rule = scorelab::parse_score_rule(rule_id);
    if (!rule.is_local) throw scorelab::ParseError("euler needs a local rule");
    const scorelab::Density p = scorelab::parse_density(density_spec);
    const scorelab::EulerReport rep =
        scorelab::euler_residual(rule.local, p, scorelab::default_euler_grid(p, points));
    if (format == "json") {
      json j = scorelab::euler_report_to_json(rep);
      j["rule"] = rule_id;
      j["density"] = p.label();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "c_p = " << num(rep.c_p_estimate)
                << "\nmax |residual - c_p| = " << num(rep.max_abs_deviation) << "\n";
    }
    return 0;
  }

  if (synth_cmd->parsed()) {
    scorelab::SynthConfig cfg;
    cfg.n_days = days;
    cfg.n_stations = stations;
    cfg.k = members;
    cfg.seed = seed;
    if (truth_kind == "bma") {
      cfg.truth = scorelab::default_bma_truth(members);
    } else if (truth_kind == "emos") {
      cfg.truth = scorelab::default_emos_truth(members);
    } else {
      throw scorelab::ParseError("unknown truth kind '" + truth_kind + "'");
    }
    const auto cases = scorelab::synth_generate(cfg);
    scorelab::write_cases_csv(out_path, cases);
    std::cerr << "wrote " << cases.size() << " cases to " << out_path << "\n";
    return 0;
  }

  if (eval_cmd->parsed()) {
    const auto cases = scorelab::load_cases(input_path);
    scorelab::EvaluateConfig cfg;
    cfg.train_len_bma = train_bma;
    cfg.train_len_emos = train_emos;
    cfg.scores = split_list(scores_list);
    cfg.threads = threads;
    const scorelab::Evaluation ev = scorelab::rolling_evaluate(cases, cfg);
    if (!skip_log_path.empty()) {
      std::ofstream skip_out(skip_log_path);
      skip_out << "case_id,reason\n";
      for (const auto& s : ev.skipped) skip_out << s.case_id << ",\"" << s.reason << "\"\n";
    }
    if (format == "json") {
      std::cout << scorelab::format_report_json(ev) << "\n";
    } else {
      std::cout << scorelab::format_report_table(ev.report);
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const scorelab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const scorelab::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
