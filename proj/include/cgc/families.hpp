#pragma once

#include <deque>

#include "immersion.hpp"

namespace cgc {

struct RegularPair {
  MetricField h;
  ShapeField b;
};

inline MetricField hyperbolic_plane() {
  return {[](double, double y) -> Mat2 { return Mat2::Identity() / (y * y); }, "hyperbolic-plane"};
}

// h = cosh^2(y) dx^2 + dy^2, x periodic with the deck period
inline MetricField hyperbolic_cylinder() {
  return {[](double, double y) -> Mat2 {
            Mat2 m = Mat2::Zero();
            double c = std::cosh(y);
            m(0, 0) = c * c;
            m(1, 1) = 1.0;
            return m;
          },
          "hyperbolic-cylinder"};
}

// diag(l, 1/l) with l = sqrt(1 + c / cosh^2 y): h-self-adjoint, det 1, Codazzi for the cylinder metric
inline ShapeField cylinder_regular_b(double c) {
  return {[c](double, double y) -> Mat2 {
            double ch = std::cosh(y);
            double l = std::sqrt(1.0 + c / (ch * ch));
            Mat2 m = Mat2::Zero();
            m(0, 0) = l;
            m(1, 1) = 1.0 / l;
            return m;
          },
          "cylinder-regular"};
}

inline ImmersionData landslide_family(const RegularPair& p, Cx z, const ChartDomain& dom, double tol = 1e-10) {
  Cx ch = std::cosh(z);
  if (std::abs(ch) <= tol) throw PoleError("landslide_family: cosh(z) vanishes");
  Cx c2 = ch * ch, th = std::tanh(z);
  MetricField h = p.h;
  ShapeField b = p.b;
  ImmersionData d;
  d.domain = dom;
  d.g = {[h, c2](double x, double y) -> Mat2 { return c2 * h(x, y); }, "landslide-family(" + h.name + ")"};
  d.psi = {[b, th](double x, double y) -> Mat2 { return -th * b(x, y); }, "landslide-shape"};
  return d;
}

// h((cos z - sin z J b) ., (cos z - sin z J b) .)
inline MetricField landslide_metric(const RegularPair& p, Cx z, int orientation = 1) {
  MetricField h = p.h;
  ShapeField b = p.b;
  return {[h, b, z, orientation](double x, double y) -> Mat2 {
            Mat2 hm = h(x, y);
            Mat2 m = std::cos(z) * Mat2::Identity() - std::sin(z) * bicomplex_at(hm, orientation) * b(x, y);
            return m.transpose() * hm * m;
          },
          "landslide(" + h.name + ")"};
}

// max over interior nodes of |(df/dRe + i df/dIm)/2|; f indexed (re, im).
// With stride k only the nodes of the k-times coarser grid are visited, so a
// refined grid can be compared with its parent on the same parameter points.
inline double cr_residual(const CMat& f, double hre, double him, int stride = 1) {
  if (f.rows() < 5 || f.cols() < 5) throw ArgumentError("cr_residual: grid must be at least 5x5");
  if (!all_finite(f)) throw ArgumentError("cr_residual: non-finite samples");
  double m = 0.0;
  for (Eigen::Index j = stride; j + stride < f.cols(); j += stride)
    for (Eigen::Index i = stride; i + stride < f.rows(); i += stride) {
      Cx fx = (f(i + 1, j) - f(i - 1, j)) / (2 * hre);
      Cx fy = (f(i, j + 1) - f(i, j - 1)) / (2 * him);
      m = std::max(m, std::abs(0.5 * (fx + I1 * fy)));
    }
  return m;
}

struct HoloFamily {
  Cx center = 0.0;
  double radius = 0.2;
  int m = 7;
  std::function<ImmersionData(Cx)> eval;
  std::string name = "family";

  double spacing() const { return 2 * radius / (m - 1); }
  Cx lambda(int i, int j) const { return center + Cx(-radius + i * spacing(), -radius + j * spacing()); }
  HoloFamily refined() const {
    HoloFamily f = *this;
    f.m = 2 * (m - 1) + 1;
    return f;
  }
};

struct TraceSurface {
  std::string generator = "delta", family;
  CMat values;  // (re index, im index)
  std::vector<std::pair<int, int>> flagged;
  double spacing = 0.0;
  double cr = 0.0;
};

struct SweepOptions {
  double x0 = 0.0, y0 = 0.0;
  double gate = 1e-4;
  bool check_gate = true;
  double sign_flag = 1e-3;
};

inline TraceSurface sweep_monodromy(const HoloFamily& fam, const SweepOptions& opt = {}) {
  TraceSurface ts;
  ts.family = fam.name;
  ts.spacing = fam.spacing();
  ts.values = CMat::Zero(fam.m, fam.m);
  for (int j = 0; j < fam.m; ++j)
    for (int i = 0; i < fam.m; ++i) {
      ImmersionData d = fam.eval(fam.lambda(i, j));
      OmegaField om(d);
      if (opt.check_gate) {
        GCSummary s = gc_summary(om);
        if (s.max() > opt.gate) throw GateError("sweep_monodromy: sample fails the Gauss-Codazzi gate");
      }
      ts.values(i, j) = monodromy(om, opt.x0, opt.y0).trace;
    }
  // sign continuation outward from the centre
  int c = fam.m / 2;
  std::vector<char> done(fam.m * fam.m, 0);
  std::deque<std::pair<int, int>> queue{{c, c}};
  done[c * fam.m + c] = 1;
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int a = i + di[k], b = j + dj[k];
      if (a < 0 || b < 0 || a >= fam.m || b >= fam.m || done[b * fam.m + a]) continue;
      Cx ref = ts.values(i, j), v = ts.values(a, b);
      if (std::abs(v + ref) < std::abs(v - ref)) ts.values(a, b) = -v;
      if (std::abs(v) < opt.sign_flag) ts.flagged.push_back({a, b});
      done[b * fam.m + a] = 1;
      queue.push_back({a, b});
    }
  }
  ts.cr = cr_residual(ts.values, ts.spacing, ts.spacing);
  return ts;
}

struct RegularReport {
  double self_adjoint = 0.0, codazzi = 0.0, det = 0.0;
  bool self_adjoint_ok = false, codazzi_ok = false, det_ok = false;
  bool ok() const { return self_adjoint_ok && codazzi_ok && det_ok; }
};

inline RegularReport regular_check(const RegularPair& p, const ChartDomain& dom, double tol = 1e-6,
                                   double codazzi_tol = 1e-4) {
  RegularReport r;
  OmegaField om(FrameField(p.h, dom), p.b);
  r.codazzi = codazzi_residual(om).max_abs();
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      double x = dom.x(i), y = dom.y(j);
      Mat2 b = p.b(x, y);
      r.self_adjoint = std::max(r.self_adjoint, self_adjoint_defect(p.h(x, y), b));
      r.det = std::max(r.det, std::abs(b.determinant() - 1.0));
    }
  r.self_adjoint_ok = r.self_adjoint <= tol;
  r.codazzi_ok = r.codazzi <= codazzi_tol;
  r.det_ok = r.det <= tol;
  return r;
}

}  // namespace cgc
