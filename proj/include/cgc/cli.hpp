#pragma once

#include <chrono>
#include <filesystem>

#include "catalog.hpp"
#include "io.hpp"
#include "sampling.hpp"

namespace cgc::cli {

enum Exit { kPass = 0, kGateFail = 1, kUsage = 2, kNumerical = 3 };

struct Gate {
  std::string name;
  double value;
  double threshold;
  std::string op;  // "<=" or ">="
  bool pass;
};

struct Context {
  json cfg;
  std::string out;
  int refine = 0;
  uint64_t seed = 1;
  json summary = json::object();
  std::vector<Gate> gates;
  std::vector<std::string> artifacts;

  std::string path(const std::string& file) {
    artifacts.push_back(file);
    return (std::filesystem::path(out) / file).string();
  }

  double tol(const std::string& name, double def) {
    json& t = cfg["tolerances"];
    if (!t.is_object()) throw SchemaError("tolerances must be an object");
    double v = get_or(t, name, def);
    if (!(v > 0)) throw SchemaError("tolerance '" + name + "' must be positive");
    return v;
  }

  json& section(const std::string& name) {
    if (!cfg.contains(name)) cfg[name] = json::object();
    if (!cfg[name].is_object()) throw SchemaError("'" + name + "' must be an object");
    return cfg[name];
  }

  void gate(const std::string& name, double value, double threshold, const std::string& op = "<=") {
    bool ok = op == "<=" ? value <= threshold : value >= threshold;
    gates.push_back({name, value, threshold, op, ok && std::isfinite(value)});
  }
};

inline ChartDomain refined(ChartDomain d, int levels) {
  for (int k = 0; k < levels; ++k) d = d.refined();
  return d;
}

inline json ratios(const std::vector<double>& v) {
  json r = json::array();
  for (size_t k = 1; k < v.size(); ++k) r.push_back(v[k] > 0 ? v[k - 1] / v[k] : std::numeric_limits<double>::infinity());
  return r;
}

inline void cmd_check_gc(Context& c) {
  ImmersionData data = data_from_config(c.cfg);
  double gt = c.tol("gauss", 1e-4), ct = c.tol("codazzi", 1e-4);
  std::vector<double> gmax, cmax, fmax;
  json levels = json::array();
  for (int lv = 0; lv <= c.refine; ++lv) {
    ImmersionData d = data;
    d.domain = refined(data.domain, lv);
    OmegaField om(d);
    GridField g = gauss_residual(om), f = flatness_residual(om), cz = codazzi_residual(om);
    gmax.push_back(g.max_abs());
    cmax.push_back(cz.max_abs());
    fmax.push_back(f.max_abs());
    levels.push_back({{"nx", d.domain.nx}, {"ny", d.domain.ny}, {"gauss_max", g.max_abs()}, {"gauss_mean", g.mean_abs()},
                      {"codazzi_max", cz.max_abs()}, {"codazzi_mean", cz.mean_abs()},
                      {"flatness_max", f.max_abs()}, {"flatness_mean", f.mean_abs()}});
    if (lv == 0) {
      std::vector<std::string> h{"x", "y"};
      for (auto n : {"gauss", "codazzi1", "codazzi2"}) push_cx_header(h, n);
      h.push_back("flatness");
      CsvWriter w(c.path("residuals.csv"), h);
      const ChartDomain& dm = d.domain;
      for (int j = 0; j < dm.ny; ++j)
        for (int i = 0; i < dm.nx; ++i) {
          if (!dm.interior(i, j)) continue;
          double x = dm.x(i), y = dm.y(j);
          std::vector<double> row{x, y};
          push_cx(row, g.values(i, j));
          Vec2 cv = codazzi_at(om, x, y);
          push_cx(row, cv(0));
          push_cx(row, cv(1));
          row.push_back(f.values(i, j).real());
          w.row(row);
        }
    }
  }
  c.summary["levels"] = levels;
  c.summary["gauss_ratio"] = ratios(gmax);
  c.summary["codazzi_ratio"] = ratios(cmax);
  c.summary["flatness_ratio"] = ratios(fmax);
  c.gate("gauss", gmax[0], gt);
  c.gate("codazzi", cmax[0], ct);
}

inline void cmd_develop(Context& c) {
  ImmersionData data = data_from_config(c.cfg);
  json& s = c.section("develop");
  bool codim0 = get_or(s, "codim0", false);
  double gate = c.tol("gate", 1e-4), pt = c.tol("pullback", 1e-4);
  std::vector<double> errs;
  json levels = json::array();
  for (int lv = 0; lv <= c.refine; ++lv) {
    ImmersionData d = data;
    d.domain = refined(data.domain, lv);
    OmegaField om(d);
    GCSummary gs = gc_summary(om);
    if (lv == 0) c.gate("gc", gs.max(), gate);
    if (gs.max() > gate) return;
    DevelopOptions opt;
    opt.check_gate = false;
    if (s.contains("basepoint")) {
      opt.i0 = s["basepoint"][0].get<int>() << lv;
      opt.j0 = s["basepoint"][1].get<int>() << lv;
    }
    Development dev;
    std::vector<Cx> f1, f2;
    double drift = 0.0;
    if (codim0) {
      Codim0Development cd = develop_codim0(d.g, d.domain, gate, opt);
      dev = cd.dev;
      f1 = cd.f1;
      f2 = cd.f2;
      drift = cd.normal_drift;
    } else {
      dev = develop(om, opt);
      drift = normal_drift(dev);
    }
    double pe = pullback_error(dev, d.g);
    double sr = shape_recovery_error(dev, d.psi);
    errs.push_back(pe);
    levels.push_back({{"nx", d.domain.nx}, {"ny", d.domain.ny}, {"pullback_error", pe}, {"normal_drift", drift},
                      {"shape_recovery_error", sr}});
    if (lv == 0) {
      std::vector<std::string> h{"x", "y"};
      for (int k = 1; k <= 4; ++k) push_cx_header(h, "sigma" + std::to_string(k));
      for (int k = 1; k <= 4; ++k) push_cx_header(h, "nu" + std::to_string(k));
      if (codim0) {
        push_cx_header(h, "f1");
        push_cx_header(h, "f2");
      }
      CsvWriter w(c.path("development.csv"), h);
      const ChartDomain& dm = d.domain;
      for (int j = 0; j < dm.ny; ++j)
        for (int i = 0; i < dm.nx; ++i) {
          std::vector<double> row{dm.x(i), dm.y(j)};
          CVec sg = dev.sigma(i, j), nu = dev.normal(i, j);
          for (int k = 0; k < 4; ++k) push_cx(row, sg(k));
          for (int k = 0; k < 4; ++k) push_cx(row, nu(k));
          if (codim0) {
            push_cx(row, f1[dev.idx(i, j)]);
            push_cx(row, f2[dev.idx(i, j)]);
          }
          w.row(row);
        }
      c.gate("pullback", pe, pt);
      if (codim0) c.gate("normal_drift", drift, c.tol("normal_drift", 1e-6));
    }
  }
  c.summary["levels"] = levels;
  c.summary["pullback_ratio"] = ratios(errs);
}

inline json pair_json(const Monodromy& m) {
  return {{"generator", m.generator},
          {"Q", mat_to_json(m.q)},
          {"A", mat_to_json(m.pair.a)},
          {"B", mat_to_json(m.pair.b)},
          {"trace", cx_to_json(m.trace)},
          {"sign_convention", "(A,B) acts by M -> A M B^-1 through F; sign fixed by Re tr A >= 0, ties by Im tr A >= 0"}};
}

inline void cmd_monodromy(Context& c) {
  ImmersionData data = data_from_config(c.cfg);
  json& s = c.section("monodromy");
  double x0 = get_or(s, "x0", data.domain.x0);
  double y0 = get_or(s, "y0", 0.5 * (data.domain.y0 + data.domain.y1));
  std::vector<int> powers = get_or(s, "powers", std::vector<int>{1, 2});
  bool check = get_or(s, "check_gate", true);
  std::optional<double> expected;
  if (s.contains("expected_abs_trace")) expected = s["expected_abs_trace"].get<double>();
  else if (c.cfg.contains("metric") && spec_name(c.cfg["metric"]) == "hyperbolic-cylinder" &&
           spec_name(c.cfg["shape"]) == "zero" && y0 == 0.0 && data.domain.deck_period)
    expected = 2 * std::cosh(*data.domain.deck_period / 2);
  json levels = json::array();
  for (int lv = 0; lv <= c.refine; ++lv) {
    ImmersionData d = data;
    d.domain = refined(data.domain, lv);
    OmegaField om(d);
    if (check && lv == 0) {
      GCSummary gs = gc_summary(om);
      c.gate("gc", gs.max(), c.tol("gate", 1e-4));
      if (gs.max() > c.tol("gate", 1e-4)) return;
    }
    Monodromy m1 = monodromy(om, x0, y0, 1);
    json lvl = {{"nx", d.domain.nx}, {"trace", cx_to_json(m1.trace)}};
    if (lv == 0) {
      json mj = pair_json(m1);
      json pw = json::array();
      for (int k : powers) {
        if (k == 1) continue;
        Monodromy mk = monodromy(om, x0, y0, k);
        Mat4 qk = Mat4::Identity();
        for (int t = 0; t < k; ++t) qk = qk * m1.q;
        double dev = (mk.q - qk).norm();
        pw.push_back(pair_json(mk));
        c.gate("homomorphism_" + std::to_string(k), dev, c.tol("homomorphism", 1e-6));
      }
      mj["powers"] = pw;
      write_json(c.path("monodromy.json"), mj);
      c.summary["trace"] = cx_to_json(m1.trace);
      c.summary["abs_trace"] = std::abs(m1.trace);
      if (expected) {
        c.summary["expected_abs_trace"] = *expected;
        c.gate("trace", std::abs(std::abs(m1.trace) - *expected), c.tol("trace", 1e-4));
      }
    }
    levels.push_back(lvl);
  }
  c.summary["levels"] = levels;
}

inline void cmd_sweep(Context& c) {
  json& cfg = c.cfg;
  if (!cfg.contains("family")) cfg["family"] = {{"name", "landslide-family"}};
  json& f = cfg["family"];
  if (spec_name(f) != "landslide-family") throw SchemaError("sweep supports the landslide-family only");
  if (!f.contains("h")) f["h"] = {{"name", "hyperbolic-cylinder"}, {"ell", 1.5}};
  if (!f.contains("b")) f["b"] = {{"name", "cylinder-regular"}, {"C", 1.0}};
  f.erase("z");
  if (!cfg.contains("chart")) {
    cfg["chart"] = default_chart(f["h"]);
  }
  ChartDomain dom = chart_from_spec(cfg["chart"]);
  RegularPair pair{metric_from_spec(f["h"]), shape_from_spec(f["b"])};
  json& s = c.section("sweep");
  HoloFamily fam;
  fam.center = cx_or(s, "center", 0.0);
  fam.radius = get_or(s, "radius", 0.2);
  fam.m = get_or(s, "m", 7);
  if (fam.m < 5) throw SchemaError("sweep.m must be at least 5");
  double amp = get_or(s, "perturbation", 0.0);
  SweepOptions so;
  so.check_gate = get_or(s, "check_gate", amp == 0.0);
  so.gate = c.tol("gate", 1e-4);
  so.x0 = get_or(s, "x0", dom.x0);
  so.y0 = get_or(s, "y0", 0.0);
  fam.name = "landslide-family";
  fam.eval = [pair, dom, amp](Cx z) {
    ImmersionData d = landslide_family(pair, z, dom);
    if (amp != 0.0) {
      MetricField g = d.g, h = pair.h;
      d.g = {[g, h, z, amp](double x, double y) -> Mat2 { return g(x, y) + amp * std::conj(z) * h(x, y); }, "perturbed"};
    }
    return d;
  };
  std::vector<double> cr;
  json levels = json::array();
  for (int lv = 0; lv <= c.refine; ++lv) {
    HoloFamily fl = fam;
    for (int k = 0; k < lv; ++k) fl = fl.refined();
    TraceSurface ts = sweep_monodromy(fl, so);
    double common = cr_residual(ts.values, ts.spacing, ts.spacing, 1 << lv);
    cr.push_back(common);
    levels.push_back({{"m", fl.m}, {"cr_residual", ts.cr}, {"cr_residual_common", common}, {"flagged", ts.flagged.size()}});
    if (lv == 0) {
      CsvWriter w(c.path("trace_surface.csv"), {"re_lambda", "im_lambda", "re_tr", "im_tr"});
      for (int j = 0; j < fl.m; ++j)
        for (int i = 0; i < fl.m; ++i) {
          std::vector<double> row;
          push_cx(row, fl.lambda(i, j));
          push_cx(row, ts.values(i, j));
          w.row(row);
        }
      int cc = fl.m / 2;
      c.summary["center_trace"] = cx_to_json(ts.values(cc, cc));
      if (amp == 0.0 && fam.center == Cx(0.0) && so.y0 == 0.0 && spec_name(f["h"]) == "hyperbolic-cylinder" &&
          dom.deck_period)
        c.gate("center_trace", std::abs(std::abs(ts.values(cc, cc)) - 2 * std::cosh(*dom.deck_period / 2)),
               c.tol("trace", 1e-4));
    }
  }
  json sj = {{"cr_residual", cr[0]}, {"refinement_ratio", ratios(cr)}};
  write_json(c.path("sweep_summary.json"), sj);
  c.summary["levels"] = levels;
  c.summary["cr_residual"] = cr[0];
  c.summary["refinement_ratio"] = ratios(cr);
  if (amp == 0.0 && cr.size() > 1) c.gate("cr_ratio", cr[0] / cr[1], c.tol("cr_ratio", 3.5), ">=");
  if (amp != 0.0) c.gate("perturbation_detected", cr.back(), c.tol("cr_plateau", 5e-3), ">=");
}

inline void cmd_gauss_bonnet(Context& c) {
  json& cfg = c.cfg;
  json& s = c.section("gauss_bonnet");
  if (!cfg.contains("metric")) cfg["metric"] = {{"name", "flat-torus"}};
  std::string base = spec_name(cfg["metric"]);
  bool sph = base == "round-sphere" ||
             (base == "conformal" && cfg["metric"].contains("base") && spec_name(cfg["metric"]["base"]) == "round-sphere");
  std::string surface = get_or<std::string>(s, "surface", sph ? "sphere" : "torus");
  int orient = get_or(s, "orientation", 1);
  if (!cfg.contains("chart")) cfg["chart"] = default_chart(surface == "sphere" ? json{{"name", "round-sphere"}} : json{{"name", "flat-torus"}});
  ChartDomain dom = chart_from_spec(cfg["chart"]);
  MetricField g = metric_from_spec(cfg["metric"]);
  const double pi = std::numbers::pi;
  CsvWriter w(c.path("gauss_bonnet.csv"), {"nx", "ny", "re_total", "im_total", "re_region", "im_region", "winding_value"});
  json levels = json::array();
  GaussBonnetResult base_r;
  for (int lv = 0; lv <= c.refine; ++lv) {
    ChartDomain d = refined(dom, lv);
    GaussBonnetResult r;
    if (surface == "torus") {
      if (!d.periodic_x || !d.periodic_y) throw SchemaError("torus chart must set periodic_x and periodic_y");
      r = gauss_bonnet_torus(g, d, orient);
    } else if (surface == "sphere") {
      r = gauss_bonnet_sphere(g, d.x0, d.nx, d.ny, orient);
    } else {
      throw SchemaError("gauss_bonnet.surface must be torus or sphere");
    }
    if (lv == 0) base_r = r;
    std::vector<double> row{double(d.nx), double(d.ny)};
    push_cx(row, r.total);
    push_cx(row, r.region);
    row.push_back(r.winding_value);
    w.row(row);
    json caps = json::array();
    for (Cx v : r.caps) caps.push_back(cx_to_json(v));
    levels.push_back({{"nx", d.nx}, {"ny", d.ny}, {"total", cx_to_json(r.total)}, {"region", cx_to_json(r.region)},
                      {"caps", caps}, {"degrees", r.degrees}, {"winding_value", r.winding_value},
                      {"quantization_gap", r.quantization_gap}});
  }
  c.summary["levels"] = levels;
  double chi = surface == "torus" ? 0.0 : 2.0;
  c.summary["expected"] = 2 * pi * chi;
  if (surface == "torus") {
    c.gate("gauss_bonnet", std::abs(base_r.total), c.tol("gauss_bonnet_abs", 1e-8));
  } else {
    c.gate("gauss_bonnet", std::abs(base_r.total - 4 * pi) / (4 * pi), c.tol("gauss_bonnet_rel", 0.01));
    c.gate("quantization", base_r.quantization_gap / pi, c.tol("quantization_rel", 0.01));
  }
}

struct GeodesicTrial {
  int dim, sample;
  double t;
  Cx vv;
  double deviation, residual;
  bool isotropic;
};

// closed form against RK4; v rescaled to Euclidean norm in [0.2, 1.5]
inline std::vector<GeodesicTrial> geodesic_trials(uint64_t seed, const std::vector<int>& dims, int samples, double tmax,
                                                  int steps, double frac, double* iso_err = nullptr) {
  Sampler rng(seed);
  std::vector<GeodesicTrial> out;
  double iso = 0.0;
  for (int n : dims) {
    for (int k = 0; k < samples; ++k) {
      XPoint p = rng.xpoint(n);
      bool near = k < static_cast<int>(frac * samples);
      bool exact = near && k % 2 == 0;
      CVec v = near ? rng.near_isotropic(p, exact ? 0.0 : 1e-10) : rng.tangent(p);
      v *= rng.uniform(0.2, 1.5) / v.norm();
      double t = rng.uniform(0.0, tmax);
      double res = 0.0;
      XPoint a = x_exp(p, t * v);
      XPoint b = x_geodesic_ode(p, v, t, steps, &res);
      res = std::max(res, quadric_residual(a.z));
      if (exact) iso = std::max(iso, (x_exp(p, v).z - (p.z + v)).norm() / (p.z + v).norm());
      out.push_back({n, k, t, dot0(v, v), (a.z - b.z).norm(), res, exact});
    }
  }
  if (iso_err) *iso_err = iso;
  return out;
}

inline void cmd_geodesic(Context& c) {
  json& s = c.section("geodesic");
  std::vector<int> dims = get_or(s, "dims", std::vector<int>{2, 3});
  int samples = get_or(s, "samples", 50);
  double tmax = get_or(s, "t_max", 2.0);
  int steps = get_or(s, "steps", 1000);
  double frac = get_or(s, "near_isotropic_fraction", 0.2);
  if (samples < 1 || steps < 1) throw SchemaError("geodesic.samples and geodesic.steps must be positive");
  for (int n : dims)
    if (n < 1 || n > 16) throw SchemaError("geodesic.dims entries must lie in [1, 16]");
  double iso = 0.0;
  std::vector<GeodesicTrial> trials = geodesic_trials(c.seed, dims, samples, tmax, steps, frac, &iso);
  CsvWriter w(c.path("geodesics.csv"), {"dim", "sample", "t", "re_vv", "im_vv", "deviation", "quadric_residual"});
  double maxdev = 0.0, maxres = 0.0;
  for (const GeodesicTrial& g : trials) {
    maxdev = std::max(maxdev, g.deviation);
    maxres = std::max(maxres, g.residual);
    std::vector<double> row{double(g.dim), double(g.sample), g.t};
    push_cx(row, g.vv);
    row.push_back(g.deviation);
    row.push_back(g.residual);
    w.row(row);
  }
  c.summary["max_deviation"] = maxdev;
  c.summary["max_quadric_residual"] = maxres;
  c.summary["isotropic_exactness"] = iso;
  c.gate("max_deviation", maxdev, c.tol("max_deviation", 1e-8));
  c.gate("quadric_residual", maxres, c.tol("quadric_residual", 1e-10));
  c.gate("isotropic_exactness", iso, c.tol("isotropic_exactness", 1e-14));
}

inline void cmd_models(Context& c) {
  json& s = c.section("models");
  int n = get_or(s, "samples", 100);
  if (n < 1) throw SchemaError("models.samples must be positive");
  Sampler rng(c.seed);
  double fpol = 0.0, fdet = 0.0, finv = 0.0, pair = 0.0, orth = 0.0, hom = 0.0, ver = 0.0, cov = 0.0, gmet = 0.0,
         pse = 0.0;
  for (int k = 0; k < n; ++k) {
    CVec z = rng.cvec(4), w = rng.cvec(4);
    fpol = std::max(fpol, std::abs(mat2_inner(f_iso(z), f_iso(w)) - dot0(z, w)));
    XPoint p = rng.xpoint(3);
    fdet = std::max(fdet, std::abs(f_iso(p.z).determinant() - 1.0));
    finv = std::max(finv, (f_iso_inv(f_iso(z)) - z).norm());

    Mat2 a = rng.sl2(), b = rng.sl2(), a2 = rng.sl2(), b2 = rng.sl2();
    Mat4 q = sl2_pair_to_so4(a, b);
    orth = std::max({orth, orth_defect(q), std::abs(q.determinant() - 1.0)});
    SL2Pair back = so4_to_sl2_pair(q);
    double e1 = (back.a - a).norm() + (back.b - b).norm(), e2 = (back.a + a).norm() + (back.b + b).norm();
    pair = std::max(pair, std::min(e1, e2));
    hom = std::max(hom, (sl2_pair_to_so4(a * a2, b * b2) - q * sl2_pair_to_so4(a2, b2)).norm());

    CVec t(2);
    t << rng.cx(), rng.cx();
    PPoint tv = veronese(PPoint(t));
    ver = std::max(ver, std::abs(dot0(tv.h, tv.h)));
    CVec t2(2);
    t2 << rng.cx(), rng.cx();
    PPoint u = g_cover(PPoint(t), PPoint(t2));
    cov = std::max({cov, std::abs(dot0(u.h, veronese(PPoint(t)).h)), chordal(u, g_cover(PPoint(t2), PPoint(t)))});

    Mat2 m = rng.sl2();
    Cx z1 = rng.cx(), z2 = rng.cx();
    Cx lhs = g_metric_coeff(mobius(m, z1), mobius(m, z2)) * mobius_deriv(m, z1) * mobius_deriv(m, z2);
    gmet = std::max(gmet, std::abs(lhs - g_metric_coeff(z1, z2)) / std::abs(g_metric_coeff(z1, z2)));

    int dim = 2 + k % 3, neg = k % (dim + 1);
    int pos = dim - neg;
    Eigen::VectorXd x(dim + 1);
    for (int i = 0; i < pos; ++i) x(i) = rng.real();
    double r2 = 1.0;
    for (int i = 0; i < pos; ++i) r2 += x(i) * x(i);
    Eigen::VectorXd tail(neg + 1);
    for (int i = 0; i <= neg; ++i) tail(i) = rng.real();
    tail *= std::sqrt(r2) / tail.norm();
    x.tail(neg + 1) = tail;
    pse = std::max(pse, quadric_residual(pseudo_embed(pos, neg, x).z));
  }
  struct Row {
    const char* name;
    double v, t;
  };
  std::vector<Row> rows{{"f_iso_polarization", fpol, 1e-12}, {"f_iso_det", fdet, 1e-12},
                        {"f_iso_roundtrip", finv, 1e-13}, {"so4_orthogonal", orth, 1e-10},
                        {"sl2_pair_roundtrip", pair, 1e-10}, {"so4_homomorphism", hom, 1e-10},
                        {"veronese_on_conic", ver, 1e-12}, {"g_cover", cov, 1e-12},
                        {"g_metric_invariance", gmet, 1e-10}, {"pseudo_embed", pse, 1e-12}};
  CsvWriter w(c.path("models.csv"), {"check", "value", "threshold"});
  for (const Row& r : rows) {
    double t = c.tol(r.name, r.t);
    w.row({r.name}, {r.v, t});
    c.gate(r.name, r.v, t);
    c.summary[r.name] = r.v;
  }
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> v{"check-gc", "develop", "monodromy", "sweep", "gauss-bonnet", "geodesic", "models"};
  return v;
}

struct Options {
  std::string command;
  std::string config;
  std::string out = "out";
  std::optional<int> refine;
  std::optional<uint64_t> seed;
  bool wall_time = false;
};

inline int run(const Options& o, std::ostream& log) {
  Context c;
  c.out = o.out;
  json report;
  int code = kPass;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (std::find(commands().begin(), commands().end(), o.command) == commands().end())
      throw SchemaError("unknown command '" + o.command + "'");
    if (!o.config.empty()) {
      std::ifstream in(o.config);
      if (!in) throw SchemaError("cannot read config " + o.config);
      try {
        c.cfg = json::parse(in, nullptr, true, true);
      } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config parse error: ") + e.what());
      }
      if (!c.cfg.is_object()) throw SchemaError("config must be an object");
    } else {
      c.cfg = json::object();
    }
    if (c.cfg.contains("command") && c.cfg["command"] != o.command)
      throw SchemaError("config is for command '" + c.cfg["command"].get<std::string>() + "'");
    c.cfg["command"] = o.command;
    if (o.seed) c.cfg["seed"] = *o.seed;
    if (o.refine) c.cfg["refine"] = *o.refine;
    c.seed = get_or<uint64_t>(c.cfg, "seed", 1);
    c.refine = get_or(c.cfg, "refine", 0);
    if (c.refine < 0 || c.refine > 4) throw SchemaError("refine must lie in [0, 4]");
    if (!c.cfg.contains("tolerances")) c.cfg["tolerances"] = json::object();
    std::filesystem::create_directories(c.out);

    if (o.command == "check-gc") cmd_check_gc(c);
    else if (o.command == "develop") cmd_develop(c);
    else if (o.command == "monodromy") cmd_monodromy(c);
    else if (o.command == "sweep") cmd_sweep(c);
    else if (o.command == "gauss-bonnet") cmd_gauss_bonnet(c);
    else if (o.command == "geodesic") cmd_geodesic(c);
    else cmd_models(c);

    for (const Gate& g : c.gates)
      if (!g.pass) code = kGateFail;
  } catch (const SchemaError& e) {
    report["error"] = e.what();
    code = kUsage;
  } catch (const ArgumentError& e) {
    report["error"] = e.what();
    code = kUsage;
  } catch (const json::exception& e) {
    report["error"] = std::string("config: ") + e.what();
    code = kUsage;
  } catch (const GateError& e) {
    report["error"] = e.what();
    code = kGateFail;
  } catch (const std::exception& e) {
    report["error"] = e.what();
    code = kNumerical;
  }
  report["command"] = o.command;
  report["config"] = c.cfg;
  report["summary"] = c.summary;
  json gates = json::array();
  for (const Gate& g : c.gates)
    gates.push_back({{"name", g.name}, {"value", g.value}, {"threshold", g.threshold}, {"op", g.op}, {"pass", g.pass}});
  report["gates"] = gates;
  report["pass"] = code == kPass;
  report["exit_code"] = code;
  c.artifacts.push_back("report.json");
  report["artifacts"] = c.artifacts;
  if (o.wall_time)
    report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report.contains("error")) log << "error: " << report["error"].get<std::string>() << "\n";
  for (const Gate& g : c.gates)
    log << (g.pass ? "PASS " : "FAIL ") << g.name << " " << fmt17(g.value) << " " << g.op << " " << fmt17(g.threshold) << "\n";
  try {
    std::filesystem::create_directories(c.out);
    write_json((std::filesystem::path(c.out) / "report.json").string(), report);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    if (code == kPass) code = kNumerical;
  }
  return code;
}

}  // namespace cgc::cli
