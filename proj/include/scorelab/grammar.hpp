#pragma once

#include <string>

#include <json.hpp>

#include "scorelab/analysis.hpp"
#include "scorelab/construction.hpp"
#include "scorelab/density.hpp"
#include "scorelab/scores.hpp"

namespace scorelab {

/// Shell-friendly density mini-grammar:
///   normal:mu:sigma | logistic:loc:scale | huber:alpha |
///   mix:w1:spec1:w2:spec2:...  (component specs must be leaf kinds)
/// Throws ParseError on malformed specs.
Density parse_density(const std::string& spec);

/// JSON density grammar:
///   {"kind":"normal","mu":0,"sigma":1}
///   {"kind":"logistic","location":0,"scale":1}
///   {"kind":"two_piece_gamma","alpha":0.3}   ("huber" accepted as alias)
///   {"kind":"mixture","weights":[...],"components":[...]}
Density parse_density_json(const nlohmann::json& j);
nlohmann::json density_to_json(const Density& d);

/// Score rule identifiers: ls, hs, lcs, qs, sphs, power:n:c. Local rules
/// carry a LocalScore; qs/sphs are pointwise-only.
struct ScoreRule {
  std::string id;
  bool is_local = true;
  LocalScore local;    // valid when is_local
  PointScore point;    // always valid
};

ScoreRule parse_score_rule(const std::string& id);

/// Kernel identifiers: power:n:c, logcosh, log.
Kernel parse_kernel(const std::string& id);

nlohmann::json propriety_report_to_json(const ProprietyReport& report);
nlohmann::json euler_report_to_json(const EulerReport& report);
nlohmann::json class_p_report_to_json(const ClassPReport& report);

}  // namespace scorelab
