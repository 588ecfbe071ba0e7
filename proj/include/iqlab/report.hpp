#pragma once

#include <json.hpp>

#include <string>

namespace iqlab {

/**
 * Outcome of measuring a quantity against a closed-form right-hand side with
 * implied constant 1.  elapsed is wall time and is never part of the
 * byte-stable serialization.
 */
struct BoundReport {
  double value{0};
  double rhs{0};
  double ratio{0};
  nlohmann::json params = nlohmann::json::object();
  double elapsed{0};

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["rhs"] = rhs;
    j["ratio"] = ratio;
    j["params"] = params;
    return j;
  }
};

inline BoundReport make_report(double value, double rhs, nlohmann::json params) {
  BoundReport r;
  r.value = value;
  r.rhs = rhs;
  r.ratio = rhs > 0 ? value / rhs : 0;
  r.params = std::move(params);
  return r;
}

}  // namespace iqlab
