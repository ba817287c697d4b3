#pragma once

#include <array>
#include <numbers>

#include "calg.hpp"
#include "chart.hpp"

namespace cgc {

using SeedFn = std::function<std::pair<Vec2, Vec2>(double, double)>;

inline SeedFn coordinate_seeds() {
  return [](double, double) { return std::pair<Vec2, Vec2>{Vec2(1.0, 0.0), Vec2(0.0, 1.0)}; };
}

// Orthonormal frame field (columns X1, X2 of T) with square-root branches
// continued across the grid nodes in row-major order.
class FrameField {
 public:
  FrameField(MetricField g, ChartDomain dom, SeedFn seeds = coordinate_seeds())
      : g_(std::move(g)), dom_(std::move(dom)), seeds_(std::move(seeds)) {
    dom_.validate();
    roots_.assign(static_cast<size_t>(dom_.nx) * dom_.ny, {Cx(1.0), Cx(1.0)});
    std::array<Cx, 2> prev{};
    bool have_prev = false;
    for (int j = 0; j < dom_.ny; ++j) {
      for (int i = 0; i < dom_.nx; ++i) {
        std::array<Cx, 2> ref = prev;
        if (i == 0 && j > 0) ref = roots_[idx(0, j - 1)];
        double x = dom_.x(i), y = dom_.y(j);
        std::array<Cx, 2> r;
        try {
          r = compute(x, y, have_prev ? &ref : nullptr).roots;
        } catch (const DegenerateFrameError& e) {
          throw DegenerateFrameError(std::string(e.what()) + " at (" + std::to_string(x) + ", " +
                                     std::to_string(y) + ")");
        }
        roots_[idx(i, j)] = r;
        prev = r;
        have_prev = true;
      }
    }
    for (int j = 0; j < dom_.ny; ++j)
      for (int i = 0; i < dom_.nx; ++i) {
        const auto& a = roots_[idx(i, j)];
        auto flip = [&](const std::array<Cx, 2>& b) {
          return (a[0] * std::conj(b[0])).real() < 0.0 || (a[1] * std::conj(b[1])).real() < 0.0;
        };
        if (i + 1 < dom_.nx && flip(roots_[idx(i + 1, j)])) ++flips_;
        if (j + 1 < dom_.ny && flip(roots_[idx(i, j + 1)])) ++flips_;
        if (dom_.periodic_x && i == dom_.nx - 1 && flip(roots_[idx(0, j)])) ++flips_;
        if (dom_.periodic_y && j == dom_.ny - 1 && flip(roots_[idx(i, 0)])) ++flips_;
      }
  }

  struct Local {
    Mat2 t;  // columns X1, X2
    Mat2 c;  // coframe rows theta^1, theta^2
    std::array<Cx, 2> roots;
  };

  Local local(double x, double y) const {
    auto [i, j] = dom_.nearest(x, y);
    return compute(x, y, &roots_[idx(i, j)]);
  }
  Mat2 frame(double x, double y) const { return local(x, y).t; }
  Mat2 coframe(double x, double y) const { return local(x, y).c; }

  // theta^1_2 as (dx, dy) components; d theta = -Gamma ^ theta
  Vec2 connection(double x, double y) const {
    double hx = dom_.hx(), hy = dom_.hy();
    Mat2 c = coframe(x, y);
    Mat2 cxp = coframe(x + hx, y), cxm = coframe(x - hx, y);
    Mat2 cyp = coframe(x, y + hy), cym = coframe(x, y - hy);
    Cx d = c.determinant();
    Cx dth1 = (cxp(0, 1) - cxm(0, 1)) / (2 * hx) - (cyp(0, 0) - cym(0, 0)) / (2 * hy);
    Cx dth2 = (cxp(1, 1) - cxm(1, 1)) / (2 * hx) - (cyp(1, 0) - cym(1, 0)) / (2 * hy);
    Cx a = -dth1 / d, b = -dth2 / d;
    return a * c.row(0).transpose() + b * c.row(1).transpose();
  }

  // d(theta^1_2) as the dx^dy coefficient
  Cx d_connection(double x, double y) const {
    double hx = dom_.hx(), hy = dom_.hy();
    return (connection(x + hx, y)(1) - connection(x - hx, y)(1)) / (2 * hx) -
           (connection(x, y + hy)(0) - connection(x, y - hy)(0)) / (2 * hy);
  }

  // d theta^1_2 = K theta^1 ^ theta^2
  Cx curvature(double x, double y) const { return d_connection(x, y) / coframe(x, y).determinant(); }

  Cx curvature_node(int i, int j) const {
    if (!dom_.interior(i, j)) throw ArgumentError("curvature: boundary node has no centered stencil");
    return curvature(dom_.x(i), dom_.y(j));
  }

  const ChartDomain& domain() const { return dom_; }
  const MetricField& metric() const { return g_; }
  int flips() const { return flips_; }
  const std::array<Cx, 2>& node_roots(int i, int j) const { return roots_[idx(i, j)]; }

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(j) * dom_.nx + i; }

  Local compute(double x, double y, const std::array<Cx, 2>* ref) const {
    CBilinearForm form(g_(x, y));
    auto [s1, s2] = seeds_(x, y);
    std::vector<SqrtBranch> br;
    if (ref) br = {SqrtBranch::near((*ref)[0]), SqrtBranch::near((*ref)[1])};
    auto gs = gram_schmidt_ex(form, {s1, s2}, br);
    Local l;
    l.t.col(0) = gs.vectors[0];
    l.t.col(1) = gs.vectors[1];
    l.c = l.t.inverse();
    l.roots = {gs.roots[0], gs.roots[1]};
    return l;
  }

  MetricField g_;
  ChartDomain dom_;
  SeedFn seeds_;
  std::vector<std::array<Cx, 2>> roots_;
  int flips_ = 0;
};

inline Cx curvature(const MetricField& g, const ChartDomain& dom, int i, int j) {
  return FrameField(g, dom).curvature_node(i, j);
}

// K over the interior nodes; boundary entries are left as NaN
inline CMat curvature_grid(const FrameField& f) {
  const ChartDomain& d = f.domain();
  double nan = std::numeric_limits<double>::quiet_NaN();
  CMat k = CMat::Constant(d.nx, d.ny, Cx(nan, nan));
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i)
      if (d.interior(i, j)) k(i, j) = f.curvature(d.x(i), d.y(j));
  return k;
}

struct Classification {
  bool positive = false;
  std::string subkind;
  Cx mu1, mu2;
  bool mu2_infinite = false;
};

inline std::string kind_name(const Classification& c) { return c.positive ? "positive" : "non-positive"; }

inline Classification classify(const Mat2& gm, double tol = 1e-10) {
  Mat2 g = 0.5 * (gm + gm.transpose());
  double scale = g.norm();
  Cx det = g.determinant();
  if (!(std::abs(det) > tol * scale * scale))
    throw ClassificationError("classify: double isotropic direction (degenerate metric)");
  Classification c;
  Cx a = g(1, 1), b = g(0, 1), e = g(0, 0);
  Cx disc = std::sqrt(-det);
  if (std::abs(a) <= tol * scale) {
    c.mu1 = -e / (2.0 * b);
    c.mu2 = Cx(std::numeric_limits<double>::infinity());
    c.mu2_infinite = true;
  } else {
    c.mu1 = (-b + disc) / a;
    c.mu2 = (-b - disc) / a;
  }
  double im1 = c.mu1.imag(), im2 = c.mu2_infinite ? 0.0 : c.mu2.imag();
  c.positive = im1 * im2 < 0.0 && std::abs(im1) > tol && std::abs(im2) > tol;
  bool real = g.imag().norm() <= tol * scale;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.real());
    auto ev = es.eigenvalues();
    if (ev(0) > 0) c.subkind = "riemannian";
    else if (ev(1) < 0) c.subkind = "negative-definite";
    else c.subkind = "real-indefinite";
  } else if (std::abs(im1) <= tol && (c.mu2_infinite || std::abs(im2) <= tol)) {
    c.subkind = "real-indefinite";
  } else {
    c.subkind = c.positive ? "generic-positive" : "generic-non-positive";
  }
  return c;
}

// J with eigenvalue +i on the isotropic direction with Im(mu) < 0 (orientation +1)
inline Mat2 bicomplex_at(const Mat2& g, int orientation = 1) {
  Classification c = classify(g);
  if (!c.positive) throw ClassificationError("bicomplex: metric is not positive");
  Vec2 v1(1.0, c.mu1), v2(1.0, c.mu2);
  Mat2 p;
  p.col(0) = v1;
  p.col(1) = v2;
  Cx l1 = c.mu1.imag() < 0 ? I1 : -I1;
  Mat2 d = Mat2::Zero();
  d(0, 0) = l1;
  d(1, 1) = -l1;
  return double(orientation) * p * d * p.inverse();
}

inline std::function<Mat2(double, double)> bicomplex(const MetricField& g, int orientation = 1) {
  return [g, orientation](double x, double y) { return bicomplex_at(g(x, y), orientation); };
}

// coefficient of dx^dy in dA = g(J., .)
inline Cx area_form_at(const Mat2& g, int orientation = 1) {
  Mat2 j = bicomplex_at(g, orientation);
  return (j.col(0).transpose() * g * Vec2(0.0, 1.0))(0, 0);
}

struct GaussBonnetResult {
  Cx total;
  Cx region;
  std::vector<Cx> caps;
  std::vector<double> degrees;  // deg of e^{2i alpha} per boundary circle
  double winding_value = 0.0;   // pi * signed sum of degrees
  double quantization_gap = 0.0;
  int flips = 0;
};

namespace detail {
inline Cx orientation_sign(const FrameField& f, double x, double y, int orientation) {
  Cx a = area_form_at(f.metric()(x, y), orientation);
  return a / f.coframe(x, y).determinant();
}

inline double pi_gap(Cx v) {
  double q = v.real() / std::numbers::pi;
  return std::hypot(std::abs(v.real() - std::round(q) * std::numbers::pi), v.imag());
}
}  // namespace detail

// Periodic chart in both axes: the sum of centered differences of d(theta^1_2) telescopes.
inline GaussBonnetResult gauss_bonnet_torus(const MetricField& g, const ChartDomain& dom, int orientation = 1) {
  if (!dom.periodic_x || !dom.periodic_y) throw ArgumentError("gauss_bonnet: torus chart must be doubly periodic");
  FrameField f(g, dom);
  GaussBonnetResult r;
  r.flips = f.flips();
  if (r.flips) throw DegenerateFrameError("gauss_bonnet: frame branch flips on the torus; refine the grid");
  Cx sum = 0.0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      double x = dom.x(i), y = dom.y(j);
      Cx s = detail::orientation_sign(f, x, y, orientation);
      if (std::abs(std::abs(s.real()) - 1.0) > 1e-6 || std::abs(s.imag()) > 1e-6)
        throw ClassificationError("gauss_bonnet: area form does not match the frame orientation");
      sum += (s.real() > 0 ? 1.0 : -1.0) * f.d_connection(x, y);
    }
  r.region = sum * dom.hx() * dom.hy();
  r.total = r.region;
  r.quantization_gap = detail::pi_gap(r.total);
  return r;
}

// Metric on the polar chart x = theta in (0, pi), y = phi periodic, with the two caps
// theta < theta_c and theta > pi - theta_c handled through cap-local frames.
inline GaussBonnetResult gauss_bonnet_sphere(const MetricField& g, double theta_c, int ntheta, int nphi,
                                             int orientation = 1) {
  const double pi = std::numbers::pi;
  ChartDomain dom;
  dom.x0 = theta_c, dom.x1 = pi - theta_c, dom.nx = ntheta;
  dom.y0 = 0.0, dom.y1 = 2 * pi, dom.ny = nphi, dom.periodic_y = true;
  dom.excised = {{0.0, 0.0, theta_c}, {pi, 0.0, theta_c}};
  FrameField f(g, dom);
  GaussBonnetResult r;
  r.flips = f.flips();
  if (r.flips) throw DegenerateFrameError("gauss_bonnet: frame branch flips; refine the grid");

  Cx region = 0.0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      double x = dom.x(i), y = dom.y(j);
      double w = (i == 0 || i == dom.nx - 1) ? 0.5 : 1.0;
      region += w * f.curvature(x, y) * area_form_at(g(x, y), orientation);
    }
  r.region = region * dom.hx() * dom.hy();

  Cx total = r.region;
  double signed_deg = 0.0;
  for (int cap = 0; cap < 2; ++cap) {
    bool north = cap == 0;
    double tc = north ? theta_c : pi - theta_c;
    SeedFn seeds = [north, pi](double th, double ph) {
      double rho = north ? th : pi - th;
      double dr = north ? 1.0 : -1.0;
      Vec2 u(dr * std::cos(ph), -std::sin(ph) / rho);
      Vec2 v(dr * std::sin(ph), std::cos(ph) / rho);
      return std::pair<Vec2, Vec2>{u, v};
    };
    ChartDomain ring = dom;
    ring.excised.clear();
    ring.nx = 9;
    ring.x0 = tc - 4 * dom.hx();
    ring.x1 = tc + 4 * dom.hx();
    FrameField fk(g, ring, seeds);
    if (fk.flips()) throw DegenerateFrameError("gauss_bonnet: cap frame branch flips; refine the grid");
    Cx s = detail::orientation_sign(fk, tc, 0.0, orientation);
    double sgn = s.real() > 0 ? 1.0 : -1.0;
    Cx line = 0.0;
    double wind = 0.0;
    Cx prev = 0.0;
    for (int j = 0; j <= dom.ny; ++j) {
      double ph = dom.y(j % dom.ny);
      if (j < dom.ny) line += fk.connection(tc, ph)(1);
      Mat2 gm = g(tc, ph);
      Vec2 xk = fk.frame(tc, ph).col(0);
      Mat2 t = f.frame(tc, ph);
      Cx ca = (xk.transpose() * gm * t.col(0))(0, 0);
      Cx sa = (xk.transpose() * gm * t.col(1))(0, 0);
      Cx e2 = (ca + I1 * sa) * (ca + I1 * sa);
      if (std::abs(e2) < 1e-8) throw DegenerateFrameError("gauss_bonnet: angle function vanishes on a boundary circle");
      if (j > 0) wind += std::arg(e2 / prev);
      prev = e2;
    }
    line *= dom.hy();
    Cx capv = (north ? 1.0 : -1.0) * sgn * line;
    r.caps.push_back(capv);
    total += capv;
    double deg = wind / (2 * pi);
    r.degrees.push_back(deg);
    Cx sm = detail::orientation_sign(f, tc, 0.0, orientation);
    signed_deg += (north ? -1.0 : 1.0) * (sm.real() > 0 ? 1.0 : -1.0) * std::round(deg);
  }
  r.total = total;
  r.winding_value = pi * signed_deg;
  r.quantization_gap = detail::pi_gap(r.total);
  return r;
}

}  // namespace cgc
