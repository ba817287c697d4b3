#pragma once

#include <json.hpp>

#include "expr.hpp"
#include "families.hpp"

namespace cgc {

using json = nlohmann::json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Cx cx_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError("expected a number or a [re, im] pair, got " + j.dump());
}

inline json cx_to_json(Cx z) { return json::array({z.real(), z.imag()}); }

template <class T>
T get_or(json& spec, const std::string& key, T def) {
  if (!spec.contains(key)) spec[key] = def;
  try {
    return spec[key].get<T>();
  } catch (const json::exception&) {
    throw SchemaError("field '" + key + "' has the wrong type");
  }
}

inline Cx cx_or(json& spec, const std::string& key, Cx def) {
  if (!spec.contains(key)) spec[key] = cx_to_json(def);
  return cx_from_json(spec[key]);
}

inline std::string spec_name(const json& spec) {
  if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string())
    throw SchemaError("catalog entry needs a string 'name'");
  return spec["name"].get<std::string>();
}

inline Expr::Vars chart_vars(double x, double y) {
  return {{"x", x},
          {"y", y},
          {"X", std::sin(x) * std::cos(y)},
          {"Y", std::sin(x) * std::sin(y)},
          {"Z", std::cos(x)}};
}

// default chart for a metric, filled into the resolved config when absent
inline json default_chart(const json& metric) {
  std::string n = spec_name(metric);
  const double pi = std::numbers::pi;
  if (n == "hyperbolic-cylinder") {
    double l = metric.value("ell", 1.5);
    return {{"x", {0.0, l}}, {"y", {-0.2, 0.2}}, {"nx", 64}, {"ny", 64}, {"deck_period", l}};
  }
  if (n == "round-sphere")
    return {{"x", {0.3, pi - 0.3}}, {"y", {0.0, 2 * pi}}, {"nx", 64}, {"ny", 64}, {"periodic_y", true}};
  if (n == "flat-torus")
    return {{"x", {0.0, 1.0}}, {"y", {0.0, 1.0}}, {"nx", 32}, {"ny", 32}, {"periodic_x", true}, {"periodic_y", true}};
  if (n == "conformal" && metric.contains("base")) return default_chart(metric["base"]);
  if (n == "landslide" && metric.contains("h")) return default_chart(metric["h"]);
  return {{"x", {-0.05, 0.05}}, {"y", {0.95, 1.05}}, {"nx", 64}, {"ny", 64}};
}

inline ChartDomain chart_from_spec(json& c) {
  if (!c.is_object()) throw SchemaError("chart must be an object");
  ChartDomain d;
  auto range = [&](const char* k, double& a, double& b) {
    if (!c.contains(k) || !c[k].is_array() || c[k].size() != 2) throw SchemaError(std::string("chart needs '") + k + "': [lo, hi]");
    a = c[k][0].get<double>();
    b = c[k][1].get<double>();
  };
  range("x", d.x0, d.x1);
  range("y", d.y0, d.y1);
  d.nx = get_or(c, "nx", 64);
  d.ny = get_or(c, "ny", 64);
  if (d.nx < 8 || d.ny < 8 || d.nx > 4096 || d.ny > 4096) throw SchemaError("chart resolution must lie in [8, 4096]");
  d.periodic_x = get_or(c, "periodic_x", false);
  d.periodic_y = get_or(c, "periodic_y", false);
  if (!c.contains("deck_period")) c["deck_period"] = nullptr;
  if (!c["deck_period"].is_null()) d.deck_period = c["deck_period"].get<double>();
  if (!(d.x1 > d.x0) || !(d.y1 > d.y0)) throw SchemaError("chart ranges must be increasing");
  if (d.deck_period && !(*d.deck_period > 0)) throw SchemaError("deck_period must be positive");
  return d;
}

inline ShapeField shape_from_spec(json& s);

inline MetricField metric_from_spec(json& m) {
  std::string n = spec_name(m);
  if (n == "hyperbolic-plane") return hyperbolic_plane();
  if (n == "hyperbolic-cylinder") {
    double l = get_or(m, "ell", 1.5);
    if (!(l > 0)) throw SchemaError("ell must be positive");
    MetricField g = hyperbolic_cylinder();
    g.name = "hyperbolic-cylinder";
    return g;
  }
  if (n == "round-sphere") {
    Cx r = cx_or(m, "r", 1.0);
    return {[r](double th, double) -> Mat2 {
              Mat2 g = Mat2::Zero();
              g(0, 0) = r * r;
              g(1, 1) = r * r * std::sin(th) * std::sin(th);
              return g;
            },
            "round-sphere"};
  }
  if (n == "flat-torus") return {[](double, double) -> Mat2 { return Mat2::Identity(); }, "flat-torus"};
  if (n == "conformal") {
    if (!m.contains("base")) throw SchemaError("conformal metric needs 'base'");
    MetricField base = metric_from_spec(m["base"]);
    Expr f = Expr::parse(get_or<std::string>(m, "f", "1"));
    f(chart_vars(0.5, 0.5));
    return {[base, f](double x, double y) -> Mat2 { return f(chart_vars(x, y)) * base(x, y); },
            "conformal(" + base.name + ")"};
  }
  if (n == "landslide") {
    if (!m.contains("h")) m["h"] = {{"name", "hyperbolic-cylinder"}, {"ell", 1.5}};
    if (!m.contains("b")) m["b"] = {{"name", "scalar"}, {"c", 1.0}};
    RegularPair p{metric_from_spec(m["h"]), shape_from_spec(m["b"])};
    Cx z = cx_or(m, "z", 0.0);
    int o = get_or(m, "orientation", 1);
    return landslide_metric(p, z, o);
  }
  if (n == "expr") {
    Expr a = Expr::parse(get_or<std::string>(m, "xx", "1"));
    Expr b = Expr::parse(get_or<std::string>(m, "xy", "0"));
    Expr c = Expr::parse(get_or<std::string>(m, "yy", "1"));
    return {[a, b, c](double x, double y) -> Mat2 {
              auto v = chart_vars(x, y);
              Mat2 g;
              g << a(v), b(v), b(v), c(v);
              return g;
            },
            "expr"};
  }
  throw SchemaError("unknown metric '" + n + "'");
}

inline ShapeField shape_from_spec(json& s) {
  std::string n = spec_name(s);
  if (n == "zero") return ShapeField::zero();
  if (n == "scalar") return ShapeField::scalar(cx_or(s, "c", 0.0));
  if (n == "diag") {
    Cx a = cx_or(s, "a", 1.0), b = cx_or(s, "b", 1.0);
    return {[a, b](double, double) -> Mat2 {
              Mat2 m = Mat2::Zero();
              m(0, 0) = a;
              m(1, 1) = b;
              return m;
            },
            "diag"};
  }
  if (n == "cylinder-regular") return cylinder_regular_b(get_or(s, "C", 1.0));
  if (n == "expr") {
    Expr a = Expr::parse(get_or<std::string>(s, "xx", "0"));
    Expr b = Expr::parse(get_or<std::string>(s, "xy", "0"));
    Expr c = Expr::parse(get_or<std::string>(s, "yx", "0"));
    Expr d = Expr::parse(get_or<std::string>(s, "yy", "0"));
    return {[a, b, c, d](double x, double y) -> Mat2 {
              auto v = chart_vars(x, y);
              Mat2 m;
              m << a(v), b(v), c(v), d(v);
              return m;
            },
            "expr"};
  }
  throw SchemaError("unknown shape '" + n + "'");
}

// Immersion data from either {metric, shape} or {family: landslide-family}
inline ImmersionData data_from_config(json& cfg) {
  if (cfg.contains("family")) {
    json& f = cfg["family"];
    std::string n = spec_name(f);
    if (n != "landslide-family") throw SchemaError("unknown family '" + n + "'");
    if (!f.contains("h")) f["h"] = {{"name", "hyperbolic-cylinder"}, {"ell", 1.5}};
    if (!f.contains("b")) f["b"] = {{"name", "scalar"}, {"c", 1.0}};
    if (!cfg.contains("chart")) cfg["chart"] = default_chart(f["h"]);
    ChartDomain d = chart_from_spec(cfg["chart"]);
    RegularPair p{metric_from_spec(f["h"]), shape_from_spec(f["b"])};
    return landslide_family(p, cx_or(f, "z", 0.0), d);
  }
  if (!cfg.contains("metric")) throw SchemaError("config needs 'metric' or 'family'");
  if (!cfg.contains("shape")) cfg["shape"] = {{"name", "zero"}};
  if (!cfg.contains("chart")) cfg["chart"] = default_chart(cfg["metric"]);
  ImmersionData d;
  d.domain = chart_from_spec(cfg["chart"]);
  d.g = metric_from_spec(cfg["metric"]);
  d.psi = shape_from_spec(cfg["shape"]);
  return d;
}

}  // namespace cgc
