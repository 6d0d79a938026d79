#pragma once

// JSON encodings of every report type. Top-level documents carry
// "schema": "v1"; nested objects do not.

#include "sobolev/atlas_config.hpp"
#include "sobolev/exponents.hpp"
#include "sobolev/manifold_norms.hpp"
#include "sobolev/operators.hpp"
#include "sobolev/quadrature.hpp"

namespace sobolev {

inline Json to_json(const Exponent& e) {
  return Json{{"s", to_string(e.s)}, {"p", e.p_infinite ? std::string("inf") : to_string(e.p)}};
}

inline Json to_json(const Condition& c) {
  return Json{{"theorem", c.theorem},        {"hypothesis", c.text},
              {"lhs", to_string(c.lhs)},     {"relation", to_string(c.relation)},
              {"rhs", to_string(c.rhs)},     {"satisfied", c.satisfied}};
}

inline Json to_json(const Verdict& v) {
  Json j;
  j["result"] = to_string(v.result);
  j["theorem"] = v.theorem_tag.empty() ? Json(nullptr) : Json(v.theorem_tag);
  j["conditions"] = Json::array();
  for (const auto& c : v.conditions) j["conditions"].push_back(to_json(c));
  j["attempts"] = Json::array();
  for (const auto& a : v.attempts) {
    Json aj{{"theorem", a.theorem}, {"holds", a.holds()}, {"conditions", Json::array()}};
    for (const auto& c : a.conditions) aj["conditions"].push_back(to_json(c));
    j["attempts"].push_back(aj);
  }
  if (v.target) j["target"] = to_json(*v.target);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline Json to_json(const BoxDomain& b) { return Json{{"lo", b.lo}, {"hi", b.hi}}; }

inline Json to_json(const NormReport& r) {
  Json j{{"value", r.value},     {"error_estimate", r.error_estimate}, {"s", r.s}, {"p", r.p},
         {"variant", r.variant}, {"box", to_json(r.box)},               {"grid", r.grid}};
  j["terms"] = Json::array();
  for (const auto& t : r.terms)
    j["terms"].push_back(Json{{"label", t.label},
                              {"multi_index", t.multi_index},
                              {"kind", t.kind},
                              {"value", t.value},
                              {"error_estimate", t.error_estimate}});
  return j;
}

inline Json to_json(const ManifoldNormReport& r) {
  Json j{{"kind", r.kind},       {"combination", r.combination}, {"value", r.value},
         {"error_estimate", r.error_estimate}, {"e", r.e},        {"q", r.q},
         {"grid", r.grid},       {"atlas", r.atlas_id},           {"partition_of_unity", r.pou_id}};
  j["terms"] = Json::array();
  for (const auto& t : r.terms)
    j["terms"].push_back(Json{{"chart", t.chart_name},
                              {"component", t.component},
                              {"label", t.label},
                              {"value", t.value},
                              {"error_estimate", t.error_estimate}});
  return j;
}

inline Json to_json(const LqReport& r) {
  return Json{{"intrinsic", to_json(r.def2)}, {"charts", to_json(r.def1)}, {"ratio_charts_over_intrinsic", r.ratio}};
}

inline Json to_json(const ComparisonReport& r) {
  Json j{{"norm_a", r.label_a}, {"norm_b", r.label_b}, {"e", r.e},         {"q", r.q},
         {"grid", r.grid},      {"lower", r.lower},     {"upper", r.upper}, {"scale_deviation", r.scale_deviation}};
  j["entries"] = Json::array();
  for (const auto& e : r.entries)
    j["entries"].push_back(
        Json{{"function", e.function}, {"a", e.a}, {"b", e.b}, {"ratio", e.ratio}, {"ratio_scaled", e.ratio_scaled}});
  return j;
}

inline Json to_json(const BoundReport& r) {
  Json j{{"operator", to_string(r.op)}, {"from", to_json(r.from)}, {"to", to_json(r.to)},
         {"norm", to_string(r.norm)},   {"grid", r.grid},          {"sup", r.sup},
         {"sup_refined", r.sup_refined}, {"refined_grid", 2 * r.grid},
         {"relative_change", r.relative_change}, {"scale_deviation", r.scale_deviation}};
  if (r.prescreen) {
    Json ps{{"domain", to_string(r.prescreen->domain)},
            {"admissible", r.prescreen->admissible()},
            {"derivative", to_json(r.prescreen->derivative)}};
    ps["embedding"] = r.prescreen->embedding ? to_json(*r.prescreen->embedding) : Json(nullptr);
    j["prescreen"] = ps;
  }
  j["entries"] = Json::array();
  for (const auto& e : r.entries)
    j["entries"].push_back(Json{{"function", e.function},
                                {"source_norm", e.source_norm},
                                {"target_norm", e.target_norm},
                                {"ratio", e.ratio},
                                {"ratio_refined", e.ratio_refined},
                                {"ratio_scaled", e.ratio_scaled}});
  return j;
}

inline Json to_json(const IntegralReport& r) {
  return Json{{"value", r.value}, {"error_estimate", r.error_estimate}, {"grid", r.grid}};
}

/// Wraps a payload as a versioned top-level document.
inline Json document(const std::string& command, Json config, Json result) {
  Json j;
  j["schema"] = "v1";
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

}  // namespace sobolev
