#pragma once

// JSON report building blocks shared by the CLI subcommands.

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qtomo/error.hpp"
#include "qtomo/state.hpp"

#ifndef QTOMO_VERSION
#define QTOMO_VERSION "0.0.0"
#endif

namespace qtomo::io {

using nlohmann::json;

inline constexpr std::string_view kToolName = "qtomo";
inline constexpr std::string_view kToolVersion = QTOMO_VERSION;

/// {"value": v, "uncertainty": u or null, "method": m or null}
inline json metric(double value, std::optional<double> uncertainty = std::nullopt,
                   std::optional<std::string> method = std::nullopt) {
  json j;
  j["value"] = value;
  j["uncertainty"] = uncertainty ? json(*uncertainty) : json(nullptr);
  j["method"] = method ? json(*method) : json(nullptr);
  return j;
}

inline json base_report(std::string_view analysis) {
  json j;
  j["analysis"] = analysis;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  return j;
}

inline json matrix_to_json(const Matrix4c& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < 4; ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

/// Accepts {"re": 4x4, "im": 4x4} or a report object carrying it under "rho".
inline Matrix4c matrix_from_json(const json& j) {
  const json& body = j.contains("rho") ? j.at("rho") : j;
  auto bad = [](const std::string& what) { return Error(ErrorKind::SchemaMismatch, "rho file: " + what); };
  if (!body.is_object() || !body.contains("re")) throw bad("expected an object with \"re\" and \"im\"");
  Matrix4c m = Matrix4c::Zero();
  for (const char* part : {"re", "im"}) {
    if (!body.contains(part)) {
      if (std::string_view(part) == "im") continue;
      throw bad(std::string("missing \"") + part + "\"");
    }
    const json& rows = body.at(part);
    if (!rows.is_array() || rows.size() != 4) throw bad(std::string(part) + " must have 4 rows");
    for (int r = 0; r < 4; ++r) {
      if (!rows[r].is_array() || rows[r].size() != 4) throw bad(std::string(part) + " rows must have 4 entries");
      for (int c = 0; c < 4; ++c) {
        if (!rows[r][c].is_number()) throw bad("non-numeric entry");
        const double v = rows[r][c].get<double>();
        if (std::string_view(part) == "re")
          m(r, c).real(v);
        else
          m(r, c).imag(v);
      }
    }
  }
  return m;
}

}  // namespace qtomo::io
