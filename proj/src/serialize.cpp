#include "uconvex/serialize.hpp"

#include <cmath>

#include "uconvex/error.hpp"

namespace uconvex {

namespace {

// Non-finite doubles have no JSON literal; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::vector<double> coords_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers, got " + j.dump());
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("expected a number, got " + v.dump());
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json to_json(const Point& x) {
  if (const auto* v = std::get_if<VectorPoint>(&x)) {
    Json arr = Json::array();
    for (double c : v->coords) arr.push_back(number(c));
    return arr;
  }
  const auto& c = std::get<ConePoint>(x);
  Json dir = Json::array();
  for (double d : c.direction) dir.push_back(number(d));
  return Json{{"dir", dir}, {"r", number(c.radius)}};
}

Point point_from_json(const SpaceHandle& s, const Json& j) {
  Point p;
  if (s->kind() == SpaceKind::cone) {
    if (!j.is_object() || !j.contains("dir") || !j.contains("r")) {
      throw ConfigError("cone points are objects {\"dir\": [...], \"r\": t}, got " + j.dump());
    }
    p = cone_point(coords_from_json(j.at("dir")), j.at("r").get<double>());
  } else {
    p = vec(coords_from_json(j));
  }
  try {
    s->validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid point ") + j.dump() + ": " + e.what());
  }
  return p;
}

std::vector<Point> points_from_json(const SpaceHandle& s, const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of points");
  std::vector<Point> out;
  for (const auto& e : j) out.push_back(point_from_json(s, e));
  return out;
}

Json to_json(const DiscreteMeasure& mu) {
  Json pts = Json::array();
  for (const auto& x : mu.support()) pts.push_back(to_json(x));
  Json w = Json::array();
  for (double v : mu.weights()) w.push_back(number(v));
  return Json{{"points", pts}, {"weights", w}};
}

DiscreteMeasure measure_from_json(const SpaceHandle& s, const Json& j) {
  if (!j.is_object() || !j.contains("points")) {
    throw ConfigError("measures are objects {\"points\": [...], \"weights\": [...]}");
  }
  auto pts = points_from_json(s, j.at("points"));
  try {
    if (!j.contains("weights")) return DiscreteMeasure::uniform(std::move(pts));
    return DiscreteMeasure(std::move(pts), coords_from_json(j.at("weights")));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid measure: ") + e.what());
  }
}

SequenceSpec sequence_from_json(const SpaceHandle& s, const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("sequence needs a \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  auto length = [&] {
    if (!j.contains("length")) throw ConfigError("sequence needs a \"length\"");
    return j.at("length").get<std::size_t>();
  };
  if (kind == "orthonormal") return SequenceSpec::orthonormal(length(), j.value("scale", 1.0));
  if (kind == "explicit") return SequenceSpec::explicit_list(points_from_json(s, j.at("points")));
  if (kind == "constant") return SequenceSpec::constant(point_from_json(s, j.at("value")), length());
  if (kind == "alternating") {
    return SequenceSpec::alternating(point_from_json(s, j.at("even")), point_from_json(s, j.at("odd")),
                                     length());
  }
  if (kind == "convergent") {
    return SequenceSpec::convergent(point_from_json(s, j.at("limit")), point_from_json(s, j.at("start")),
                                    j.value("ratio", 0.5), length());
  }
  throw ConfigError("unknown sequence kind: " + kind);
}

Json to_json(const CheckReport& r) {
  Json j;
  j["property"] = r.property;
  j["p"] = r.p;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  j["worst"] = r.samples == 0 ? Json(nullptr) : number(r.worst);
  Json w = Json::array();
  for (const auto& x : r.witness) w.push_back(to_json(x));
  j["witness"] = w;
  j["status"] = to_string(r.status);
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = number(v);
  j["metrics"] = m;
  Json s = Json::object();
  for (const auto& [k, v] : r.series) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(number(x));
    s[k] = arr;
  }
  j["series"] = s;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const CouplingPlan& plan) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < plan.rows; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < plan.cols; ++k) row.push_back(number(plan.at(i, k)));
    rows.push_back(row);
  }
  return Json{{"mass", rows}, {"cost", number(plan.cost)}};
}

Json to_json(const ModulusTable& t) {
  auto opt = [](const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); };
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json w = Json::array();
    for (const auto& x : r.witness) w.push_back(to_json(x));
    rows.push_back(Json{{"epsilon", number(r.epsilon)},
                        {"rho_raw", opt(r.rho_raw)},
                        {"rho_hat", opt(r.rho_hat)},
                        {"rho_tilde", opt(r.rho_tilde)},
                        {"samples", r.samples},
                        {"attempts", r.attempts},
                        {"witness", w}});
  }
  return Json{{"p", t.p.str()}, {"rows", rows}};
}

Json to_json(const BarycenterResult& r) {
  Json j;
  j["point"] = to_json(r.point);
  j["value"] = number(r.value);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["global"] = r.global;
  j["oracle_gap"] = r.oracle_gap ? number(*r.oracle_gap) : Json(nullptr);
  j["unique"] = r.unique ? Json(*r.unique) : Json(nullptr);
  return j;
}

}  // namespace uconvex
