#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ccr.hpp"
#include "geometry.hpp"
#include "regions.hpp"
#include "report.hpp"

namespace chiral {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument(path + ": expected a rational string \"p/q\"");
}

template <class V>
Json scalar_json(const V& v) {
  if constexpr (scalar_traits<V>::exact) {
    if (v.is_rational()) return rational_json(v.rational());
    Json num = Json::array(), den = Json::array();
    for (const auto& c : v.numerator()) num.push_back(rational_json(c));
    for (const auto& c : v.denominator()) den.push_back(rational_json(c));
    return Json{{"pi_num", num}, {"pi_den", den}};
  } else {
    return v;
  }
}

template <class V>
V scalar_from_json(const Json& j, const std::string& path) {
  if constexpr (scalar_traits<V>::exact) {
    if (j.is_object()) {
      pipoly::Coeffs num, den;
      for (std::size_t i = 0; i < j.at("pi_num").size(); ++i) num.push_back(rational_from_json(j["pi_num"][i], path + ".pi_num"));
      for (std::size_t i = 0; i < j.at("pi_den").size(); ++i) den.push_back(rational_from_json(j["pi_den"][i], path + ".pi_den"));
      return V::from_fraction(std::move(num), std::move(den));
    }
    return V(rational_from_json(j, path));
  } else {
    if (j.is_number()) return j.get<double>();
    return rational_from_json(j, path).get_d();
  }
}

inline Json geometry_json(const Geometry& g) {
  Json j{{"kind", g.name()}, {"chirality", g.chirality_str()}};
  if (g.kind == Kind::Cylinder) j["inner_radius"] = rational_json(g.inner_radius);
  return j;
}

inline int parse_chirality(const Json& j, const std::string& path) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "+" || s == "+1" || s == "plus") return 1;
    if (s == "-" || s == "-1" || s == "minus") return -1;
  }
  if (j.is_number_integer() && (j.get<int>() == 1 || j.get<int>() == -1)) return j.get<int>();
  throw std::invalid_argument(path + ": chirality must be \"+\" or \"-\"");
}

inline Geometry geometry_from_json(const Json& j, const std::string& path) {
  auto kind = j.at("kind").get<std::string>();
  int e = parse_chirality(j.at("chirality"), path + ".chirality");
  if (kind == "half_space") return Geometry::half_space(e);
  if (kind == "cylinder") return Geometry::cylinder(e, j.contains("inner_radius") ? rational_from_json(j["inner_radius"], path + ".inner_radius") : Rational(1, 4));
  throw std::invalid_argument(path + ".kind: unknown geometry '" + kind + "'");
}

template <class V>
Json field_json(const CoeffField<V>& f) {
  Json knots = Json::array();
  for (int d = 0; d < 3; ++d) {
    Json k = Json::array();
    for (const auto& x : f.knots()[d]) k.push_back(rational_json(x));
    knots.push_back(k);
  }
  Json cells = Json::array();
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    Json c = Json::array();
    for (const auto& [key, v] : f.cell(i))
      c.push_back(Json{{"exp", {key_exp(key, 0), key_exp(key, 1), key_exp(key, 2)}}, {"trig", key_trig(key)}, {"c", scalar_json(v)}});
    cells.push_back(c);
  }
  return Json{{"circle", f.circle_y()}, {"knots", knots}, {"cells", cells}};
}

template <class V>
CoeffField<V> field_from_json(const Json& j, const std::string& path) {
  std::array<std::vector<Rational>, 3> knots;
  for (int d = 0; d < 3; ++d)
    for (const auto& x : j.at("knots").at(d)) knots[d].push_back(rational_from_json(x, path + ".knots"));
  std::vector<MPoly<V>> cells;
  for (const auto& c : j.at("cells")) {
    MPoly<V> p;
    for (const auto& t : c) {
      const auto& e = t.at("exp");
      p.emplace_back(make_key(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(), t.at("trig").get<int>()), scalar_from_json<V>(t.at("c"), path + ".cells"));
    }
    cells.push_back(std::move(p));
  }
  std::size_t want = (knots[0].size() + 1) * (knots[1].size() + 1) * (knots[2].size() + 1);
  if (cells.size() != want) throw std::invalid_argument(path + ".cells: expected " + std::to_string(want) + " cells");
  return CoeffField<V>::from_parts(j.at("circle").get<bool>(), std::move(knots), std::move(cells));
}

template <class V>
Json form_json(const Form<V>& f) {
  Json comps = Json::array();
  for (const auto& [m, c] : f.components()) comps.push_back(Json{{"legs", m}, {"field", field_json(c)}});
  return Json{{"geometry", geometry_json(f.geometry())}, {"space", space_name(f.space())}, {"degree", f.degree()}, {"shift", f.shift()}, {"components", comps}};
}

template <class V>
Form<V> form_from_json(const Json& j, const std::string& path = "form") {
  Geometry g = geometry_from_json(j.at("geometry"), path + ".geometry");
  Form<V> out(g, parse_space(j.at("space").get<std::string>()), j.at("degree").get<int>(), j.at("shift").get<int>());
  for (const auto& c : j.at("components")) out.set(c.at("legs").get<unsigned>(), field_from_json<V>(c.at("field"), path + ".components"));
  return out;
}

inline Json interval_json(const Interval& iv) {
  return Json::array({iv.lo ? Json(rational_json(*iv.lo)) : Json(nullptr), iv.hi ? Json(rational_json(*iv.hi)) : Json(nullptr)});
}

// Boxes are maps direction -> [lo, hi]; ends are open unless listed under "closed".
inline Json region_json(const Region& r, const Geometry& g) {
  auto names = directions(g);
  Json boxes = Json::array();
  for (const auto& b : r.boxes()) {
    Json jb = Json::object(), closed = Json::object();
    for (int d = 0; d < 3; ++d) {
      if (!(r.dims() & bit(d))) continue;
      jb[names[d].name] = interval_json(b[d]);
      if (b[d].lo_closed || b[d].hi_closed) closed[names[d].name] = {b[d].lo_closed, b[d].hi_closed};
    }
    if (!closed.empty()) jb["closed"] = closed;
    boxes.push_back(jb);
  }
  return Json{{"space", space_name(r.space())}, {"boxes", boxes}};
}

inline Region region_from_json(const Json& j, const Geometry& g, const std::string& path) {
  if (!j.is_object() || !j.contains("boxes")) throw std::invalid_argument(path + ": region needs a 'boxes' list");
  Space s = j.contains("space") ? parse_space(j["space"].get<std::string>()) : Space::Bulk;
  auto names = directions(g);
  Region out(s, g.circle());
  for (std::size_t i = 0; i < j["boxes"].size(); ++i) {
    const auto& jb = j["boxes"][i];
    std::string bp = path + ".boxes[" + std::to_string(i) + "]";
    Box b;
    for (const auto& [key, val] : jb.items()) {
      if (key == "closed") continue;
      int d = -1;
      for (int k = 0; k < 3; ++k)
        if (names[k].name == key) d = k;
      if (d < 0 || !(out.dims() & bit(d))) throw std::invalid_argument(bp + "." + key + ": unknown direction");
      if (!val.is_array() || val.size() != 2) throw std::invalid_argument(bp + "." + key + ": expected [lo, hi]");
      Interval iv = Interval::all();
      if (!val[0].is_null()) iv.lo = rational_from_json(val[0], bp + "." + key + "[0]");
      if (!val[1].is_null()) iv.hi = rational_from_json(val[1], bp + "." + key + "[1]");
      if (jb.contains("closed") && jb["closed"].contains(key)) {
        iv.lo_closed = jb["closed"][key].at(0).get<bool>();
        iv.hi_closed = jb["closed"][key].at(1).get<bool>();
      }
      b[d] = iv;
    }
    out.add(b);
  }
  return out;
}

inline Json record_json(const CheckRecord& r) {
  Json j{{"identity", r.identity}, {"sample", r.sample}, {"residual", r.residual}, {"pass", r.pass}};
  if (!r.value.empty()) j["value"] = r.value;
  if (!r.detail.empty()) {
    auto parsed = Json::parse(r.detail, nullptr, false);
    j["replay"] = parsed.is_discarded() ? Json(r.detail) : parsed;
  }
  return j;
}

template <class V>
Json ccr_element_json(const CCRElement<V>& e) {
  Json terms = Json::array();
  const auto& g = *e.generators();
  for (const auto& [w, c] : e.terms()) {
    Json word = Json::array();
    for (int k : w) word.push_back(g.label(static_cast<std::size_t>(k)));
    terms.push_back(Json{{"word", word}, {"re", scalar_json(c.re)}, {"im", scalar_json(c.im)}});
  }
  return terms;
}

}  // namespace chiral
