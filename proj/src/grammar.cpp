#include "scorelab/grammar.hpp"

#include <cstdlib>
#include <vector>

#include "scorelab/errors.hpp"

namespace scorelab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double to_number(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size()) {
    throw ParseError("expected a number for " + what + ", got '" + tok + "'");
  }
  return v;
}

Density parse_leaf(const std::vector<std::string>& toks, std::size_t& pos) {
  if (pos >= toks.size()) throw ParseError("truncated density spec");
  const std::string kind = toks[pos++];
  const auto need = [&](const std::string& what) -> double {
    if (pos >= toks.size()) throw ParseError("density spec missing " + what);
    return to_number(toks[pos++], what);
  };
  if (kind == "normal") {
    const double mu = need("mu");
    const double sigma = need("sigma");
    return Density::normal(mu, sigma);
  }
  if (kind == "logistic") {
    const double loc = need("location");
    const double scale = need("scale");
    return Density::logistic(loc, scale);
  }
  if (kind == "huber") {
    return Density::two_piece_gamma(need("alpha"));
  }
  throw ParseError("unknown density kind '" + kind + "'");
}

}  // namespace

Density parse_density(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') {
    try {
      return parse_density_json(nlohmann::json::parse(spec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad density JSON: ") + e.what());
    }
  }
  const auto toks = split(spec, ':');
  std::size_t pos = 0;
  if (toks.empty()) throw ParseError("empty density spec");
  if (toks[0] == "mix") {
    pos = 1;
    std::vector<double> weights;
    std::vector<Density> components;
    while (pos < toks.size()) {
      weights.push_back(to_number(toks[pos++], "mixture weight"));
      components.push_back(parse_leaf(toks, pos));
    }
    if (weights.empty()) throw ParseError("mixture spec has no components");
    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                                    static_cast<Eigen::Index>(weights.size()));
    return mixture(w, std::move(components));
  }
  Density d = parse_leaf(toks, pos);
  if (pos != toks.size()) throw ParseError("trailing tokens in density spec '" + spec + "'");
  return d;
}

Density parse_density_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ParseError("density JSON must be an object with a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "normal") {
      return Density::normal(j.at("mu").get<double>(), j.at("sigma").get<double>());
    }
    if (kind == "logistic") {
      return Density::logistic(j.at("location").get<double>(),
                               j.at("scale").get<double>());
    }
    if (kind == "two_piece_gamma" || kind == "huber") {
      return Density::two_piece_gamma(j.at("alpha").get<double>());
    }
    if (kind == "mixture") {
      const auto& jw = j.at("weights");
      const auto& jc = j.at("components");
      Eigen::VectorXd w(static_cast<Eigen::Index>(jw.size()));
      for (std::size_t i = 0; i < jw.size(); ++i) {
        w[static_cast<Eigen::Index>(i)] = jw.at(i).get<double>();
      }
      std::vector<Density> comps;
      comps.reserve(jc.size());
      for (const auto& c : jc) comps.push_back(parse_density_json(c));
      return mixture(w, std::move(comps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad density JSON: ") + e.what());
  }
  throw ParseError("unknown density kind '" + kind + "'");
}

nlohmann::json density_to_json(const Density& d) {
  nlohmann::json j;
  switch (d.kind()) {
    case Density::Kind::Normal:
      j["kind"] = "normal";
      j["mu"] = d.param1();
      j["sigma"] = d.param2();
      break;
    case Density::Kind::Logistic:
      j["kind"] = "logistic";
      j["location"] = d.param1();
      j["scale"] = d.param2();
      break;
    case Density::Kind::TwoPieceGamma:
      j["kind"] = "two_piece_gamma";
      j["alpha"] = d.param1();
      break;
    case Density::Kind::Mixture: {
      j["kind"] = "mixture";
      nlohmann::json weights = nlohmann::json::array();
      nlohmann::json comps = nlohmann::json::array();
      for (Eigen::Index i = 0; i < d.weights().size(); ++i) {
        weights.push_back(d.weights()[i]);
        comps.push_back(density_to_json(d.components()[static_cast<std::size_t>(i)]));
      }
      j["weights"] = weights;
      j["components"] = comps;
      break;
    }
  }
  return j;
}

ScoreRule parse_score_rule(const std::string& id) {
  ScoreRule rule;
  rule.id = id;
  if (id == "ls" || id == "hs" || id == "lcs") {
    rule.local = id == "ls"   ? logarithmic_score()
                 : id == "hs" ? hyvarinen_score()
                              : log_cosh_score();
  } else if (id.rfind("power:", 0) == 0) {
    const auto toks = split(id, ':');
    if (toks.size() != 3) throw ParseError("power rule is power:n:c");
    const double n = to_number(toks[1], "power order n");
    if (n != static_cast<int>(n) || static_cast<int>(n) < 2 ||
        static_cast<int>(n) % 2 != 0) {
      throw InvalidOrder("power score: n must be even and >= 2");
    }
    rule.local = power_score(static_cast<int>(n), to_number(toks[2], "power coefficient c"));
  } else if (id == "qs") {
    rule.is_local = false;
    rule.point = [](double x, const Density& q) { return quadratic_score(x, q); };
    return rule;
  } else if (id == "sphs") {
    rule.is_local = false;
    rule.point = [](double x, const Density& q) { return spherical_score(x, q); };
    return rule;
  } else {
    throw ParseError("unknown score rule '" + id +
                     "' (expected ls, hs, lcs, qs, sphs or power:n:c)");
  }
  rule.point = as_point_score(rule.local);
  return rule;
}

Kernel parse_kernel(const std::string& id) {
  if (id == "logcosh") return log_cosh_kernel();
  if (id == "log") return log_score_kernel();
  if (id.rfind("power:", 0) == 0) {
    const auto toks = split(id, ':');
    if (toks.size() != 3) throw ParseError("power kernel is power:n:c");
    const double n = to_number(toks[1], "power order n");
    if (n != static_cast<int>(n) || static_cast<int>(n) < 2 ||
        static_cast<int>(n) % 2 != 0) {
      throw InvalidOrder("power kernel: n must be even and >= 2");
    }
    return power_kernel(static_cast<int>(n), to_number(toks[2], "power coefficient c"));
  }
  throw ParseError("unknown kernel '" + id + "' (expected power:n:c, logcosh or log)");
}

nlohmann::json propriety_report_to_json(const ProprietyReport& report) {
  nlohmann::json j;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"p", p.p_id}, {"q", p.q_id}, {"margin", p.margin}});
  }
  j["pairs"] = pairs;
  j["min_margin"] = report.min_margin;
  nlohmann::json viol = nlohmann::json::array();
  for (const auto& p : report.strict_violations) {
    viol.push_back({{"p", p.p_id}, {"q", p.q_id}, {"margin", p.margin}});
  }
  j["strict_violations"] = viol;
  j["strictness_tol"] = report.strictness_tol;
  return j;
}

nlohmann::json euler_report_to_json(const EulerReport& report) {
  nlohmann::json j;
  nlohmann::json xs = nlohmann::json::array();
  nlohmann::json rs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.x.size(); ++i) {
    xs.push_back(report.x[i]);
    rs.push_back(report.residual[i]);
  }
  j["x"] = xs;
  j["residual"] = rs;
  j["c_p_estimate"] = report.c_p_estimate;
  j["max_abs_deviation"] = report.max_abs_deviation;
  return j;
}

nlohmann::json class_p_report_to_json(const ClassPReport& report) {
  nlohmann::json j;
  j["p1_positive"] = report.p1_positive;
  j["p1_failures"] = report.p1_failures;
  j["p3_decay"] = report.p3_decay;
  j["p3_failures"] = report.p3_failures;
  j["p4_log_derivative_decay"] = report.p4_log_derivative_decay;
  j["p4_failures"] = report.p4_failures;
  j["probe_exponent_a"] = report.probe_exponent_a;
  j["declared_member"] = report.declared_member;
  j["note"] = report.note;
  return j;
}

}  // namespace scorelab
