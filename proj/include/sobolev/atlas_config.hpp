#pragma once

// JSON atlas descriptors, schema "v1":
//
// {
//   "schema": "v1",
//   "manifold": "s1-stereo" | "s2-stereo" | "torus1" | "torus2",
//   "charts": [
//     { "name": "north", "kind": "stereo-north" | "stereo-south" | "box",
//       "center": [0.5],                 // box only
//       "half_width": 0.5,               // box only
//       "truncation_half_width": 4,
//       "bump": { "plateau": 1.5, "support": 3 } }
//   ]
// }
//
// Chart order is significant: it fixes the order of the partition-of-unity
// product construction. Unknown keys are rejected.

#include <fstream>
#include <set>
#include <string>

#include "json.hpp"
#include "sobolev/atlas.hpp"

namespace sobolev {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object", 0);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError("unknown key '" + it.key() + "' in " + where, 0);
}

inline int manifold_dim(const std::string& m) {
  if (m == "s1-stereo" || m == "torus1") return 1;
  if (m == "s2-stereo" || m == "torus2") return 2;
  throw InvalidArgument("unknown manifold '" + m + "'");
}

}  // namespace detail

inline Json chart_to_json(const Chart& c) {
  Json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["image"] = to_string(c.image);
  if (c.kind == ChartKind::TorusBox) {
    j["center"] = c.center;
    j["half_width"] = c.half_width;
    j["truncation_half_width"] = (c.truncation.hi[0] - c.truncation.lo[0]) / 2.0;
  } else {
    j["truncation_half_width"] = c.truncation.hi[0];
  }
  j["bump"] = {{"plateau", c.bump.plateau}, {"support", c.bump.support}};
  return j;
}

/// Descriptor that atlas_from_json reads back (the "image" key is output only).
inline Json atlas_to_json(const Atlas& atlas) {
  Json j;
  j["schema"] = "v1";
  j["manifold"] = atlas.manifold();
  j["dimension"] = atlas.dim();
  j["classification"] = to_string(atlas.classification());
  j["self_gl_compatible"] = atlas.self_gl_compatible();
  j["charts"] = Json::array();
  for (const auto& c : atlas.charts()) j["charts"].push_back(chart_to_json(c));
  return j;
}

inline Atlas atlas_from_json(const Json& j) {
  detail::reject_unknown(j, {"schema", "manifold", "charts", "dimension", "classification", "self_gl_compatible"},
                         "atlas config");
  if (j.value("schema", "") != "v1") throw ParseError("atlas config must declare \"schema\": \"v1\"", 0);
  const std::string manifold = j.at("manifold").get<std::string>();
  const int n = detail::manifold_dim(manifold);
  const bool sphere = manifold.rfind("s", 0) == 0;
  std::vector<Chart> charts;
  for (const auto& c : j.at("charts")) {
    detail::reject_unknown(c, {"name", "kind", "image", "center", "half_width", "truncation_half_width", "bump"},
                           "chart");
    const std::string kind = c.at("kind").get<std::string>();
    BumpSpec bump;
    if (c.contains("bump")) {
      detail::reject_unknown(c["bump"], {"plateau", "support"}, "bump");
      bump = {c["bump"].at("plateau").get<double>(), c["bump"].at("support").get<double>()};
    }
    if (kind == "stereo-north" || kind == "stereo-south") {
      if (!sphere) throw InvalidArgument("stereographic chart on " + manifold);
      if (!c.contains("bump")) bump = {1.5, 3.0};
      Chart ch = stereo_chart(kind == "stereo-north", n, bump, c.value("truncation_half_width", kStereoTruncation));
      if (c.contains("name")) ch.name = c["name"].get<std::string>();
      charts.push_back(std::move(ch));
    } else if (kind == "box") {
      if (sphere) throw InvalidArgument("box chart on " + manifold);
      auto center = c.at("center").get<std::vector<double>>();
      if (static_cast<int>(center.size()) != n) throw InvalidArgument("box center has the wrong dimension");
      if (!c.contains("bump")) bump = {0.3, 0.45};
      charts.push_back(torus_chart(c.value("name", "box" + std::to_string(charts.size())), center,
                                   c.value("half_width", 0.5), bump, c.value("truncation_half_width", 0.48)));
    } else {
      throw ParseError("unknown chart kind '" + kind + "'", 0);
    }
  }
  return Atlas(manifold, n, std::move(charts));
}

inline Atlas load_atlas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open atlas config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("atlas config: ") + e.what(), e.byte);
  }
  return atlas_from_json(j);
}

}  // namespace sobolev
