#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include "cmetric.hpp"
#include "spaceforms.hpp"

namespace cgc {

using OmegaFn = std::function<CMat(double, double, double, double)>;

inline double self_adjoint_defect(const Mat2& g, const Mat2& psi) {
  Mat2 gp = g * psi;
  return (gp - gp.transpose()).norm() / std::max(1.0, g.norm());
}

class OmegaField {
 public:
  explicit OmegaField(const ImmersionData& d) : frame_(d.g, d.domain), psi_(d.psi) {}
  OmegaField(FrameField f, ShapeField psi) : frame_(std::move(f)), psi_(std::move(psi)) {}

  // Psi^i as (dx, dy) components: row i of C * Psi
  Mat2 psi_forms(double x, double y) const { return frame_.coframe(x, y) * psi_(x, y); }

  std::array<Mat4, 2> omega(double x, double y) const {
    Mat2 c = frame_.coframe(x, y);
    Mat2 pf = c * psi_(x, y);
    Vec2 gam = frame_.connection(x, y);
    std::array<Mat4, 2> w;
    for (int a = 0; a < 2; ++a) {
      Mat4 m = Mat4::Zero();
      m(0, 1) = gam(a);
      m(1, 0) = -gam(a);
      for (int i = 0; i < 2; ++i) {
        m(i, 2) = -pf(i, a);
        m(2, i) = pf(i, a);
        m(i, 3) = -I1 * c(i, a);
        m(3, i) = I1 * c(i, a);
      }
      w[a] = m;
    }
    return w;
  }

  CMat operator()(double x, double y, double vx, double vy) const {
    auto w = omega(x, y);
    return vx * w[0] + vy * w[1];
  }

  OmegaFn fn() const {
    return [this](double x, double y, double vx, double vy) { return (*this)(x, y, vx, vy); };
  }

  const FrameField& frame() const { return frame_; }
  const ShapeField& psi() const { return psi_; }
  const ChartDomain& domain() const { return frame_.domain(); }

 private:
  FrameField frame_;
  ShapeField psi_;
};

inline OmegaField assemble_omega(const ImmersionData& d) { return OmegaField(d); }

// (d^nabla Psi)(X1, X2) as frame components
inline Vec2 codazzi_at(const OmegaField& om, double x, double y) {
  const ChartDomain& dom = om.domain();
  double hx = dom.hx(), hy = dom.hy();
  Mat2 pxp = om.psi_forms(x + hx, y), pxm = om.psi_forms(x - hx, y);
  Mat2 pyp = om.psi_forms(x, y + hy), pym = om.psi_forms(x, y - hy);
  Mat2 p = om.psi_forms(x, y);
  Vec2 gam = om.frame().connection(x, y);
  Cx d = om.frame().coframe(x, y).determinant();
  Vec2 out;
  for (int i = 0; i < 2; ++i) {
    Cx dpsi = (pxp(i, 1) - pxm(i, 1)) / (2 * hx) - (pyp(i, 0) - pym(i, 0)) / (2 * hy);
    int j = 1 - i;
    Cx sgn = i == 0 ? 1.0 : -1.0;
    Cx wedge = sgn * (gam(0) * p(j, 1) - gam(1) * p(j, 0));
    out(i) = (dpsi + wedge) / d;
  }
  return out;
}

struct GridField {
  ChartDomain domain;
  CMat values;  // nx by ny, NaN outside the interior
  double max_abs() const {
    double m = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k)
      if (std::isfinite(values(k).real())) m = std::max(m, std::abs(values(k)));
    return m;
  }
  double mean_abs() const {
    double s = 0.0;
    int n = 0;
    for (Eigen::Index k = 0; k < values.size(); ++k)
      if (std::isfinite(values(k).real())) s += std::abs(values(k)), ++n;
    return n ? s / n : 0.0;
  }
};

namespace detail {
template <class F>
GridField interior_field(const ChartDomain& dom, F&& f) {
  double nan = std::numeric_limits<double>::quiet_NaN();
  GridField out{dom, CMat::Constant(dom.nx, dom.ny, Cx(nan, nan))};
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i)
      if (dom.interior(i, j) && !dom.excised_at(dom.x(i), dom.y(j))) out.values(i, j) = f(dom.x(i), dom.y(j));
  return out;
}
}  // namespace detail

// norm of the Codazzi vector per node
inline GridField codazzi_residual(const OmegaField& om) {
  return detail::interior_field(om.domain(), [&](double x, double y) { return Cx(codazzi_at(om, x, y).norm()); });
}

inline GridField codazzi_residual(const ImmersionData& d) { return codazzi_residual(OmegaField(d)); }

inline GridField gauss_residual(const OmegaField& om) {
  return detail::interior_field(om.domain(), [&](double x, double y) {
    return om.frame().curvature(x, y) - om.psi()(x, y).determinant() + 1.0;
  });
}

inline GridField gauss_residual(const ImmersionData& d) { return gauss_residual(OmegaField(d)); }

inline CMat flatness_at(const OmegaFn& w, double x, double y, double hx, double hy) {
  CMat wx = w(x, y, 1, 0), wy = w(x, y, 0, 1);
  CMat dwy = (w(x + hx, y, 0, 1) - w(x - hx, y, 0, 1)) / (2 * hx);
  CMat dwx = (w(x, y + hy, 1, 0) - w(x, y - hy, 1, 0)) / (2 * hy);
  return dwy - dwx + wx * wy - wy * wx;
}

// Frobenius norm of d omega + omega ^ omega per interior node
inline GridField flatness_residual(const OmegaField& om) {
  const ChartDomain& d = om.domain();
  OmegaFn w = om.fn();
  return detail::interior_field(d, [&](double x, double y) {
    return Cx(flatness_at(w, x, y, d.hx(), d.hy()).norm());
  });
}

struct GCSummary {
  double gauss_max = 0.0, codazzi_max = 0.0, self_adjoint_max = 0.0;
  double max() const { return std::max({gauss_max, codazzi_max, self_adjoint_max}); }
};

inline GCSummary gc_summary(const OmegaField& om) {
  GCSummary s;
  s.gauss_max = gauss_residual(om).max_abs();
  s.codazzi_max = codazzi_residual(om).max_abs();
  const ChartDomain& d = om.domain();
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i)
      s.self_adjoint_max = std::max(s.self_adjoint_max,
                                    self_adjoint_defect(om.frame().metric()(d.x(i), d.y(j)), om.psi()(d.x(i), d.y(j))));
  return s;
}

using Point2 = std::array<double, 2>;

// RK4 for Phi' = Phi * omega(gamma'), retracting after every polyline segment
inline CMat integrate_path(const OmegaFn& w, const std::vector<Point2>& path, const CMat& phi0,
                           int substeps = 8) {
  CMat phi = phi0;
  double arc = 0.0;
  for (size_t s = 0; s + 1 < path.size(); ++s) {
    double ax = path[s][0], ay = path[s][1];
    double vx = path[s + 1][0] - ax, vy = path[s + 1][1] - ay;
    double h = 1.0 / substeps;
    for (int k = 0; k < substeps; ++k) {
      double t = k * h;
      auto f = [&](double tt, const CMat& p) -> CMat { return p * w(ax + tt * vx, ay + tt * vy, vx, vy); };
      CMat k1 = f(t, phi);
      CMat k2 = f(t + 0.5 * h, phi + 0.5 * h * k1);
      CMat k3 = f(t + 0.5 * h, phi + 0.5 * h * k2);
      CMat k4 = f(t + h, phi + h * k3);
      phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    arc += std::hypot(vx, vy);
    if (!all_finite(phi)) throw IntegrationError("integrate_path: non-finite values at arc length " + std::to_string(arc));
    phi = orth_retract(phi);
  }
  return phi;
}

inline CVec e_last(int n) {
  CVec e = CVec::Zero(n);
  e(n - 1) = I1;
  return e;
}

struct Development {
  ChartDomain domain;
  int i0 = 0, j0 = 0;
  std::vector<Mat4> phi;
  std::vector<Mat2> coframe;

  size_t idx(int i, int j) const { return static_cast<size_t>(j) * domain.nx + i; }
  const Mat4& frame(int i, int j) const { return phi[idx(i, j)]; }
  CVec sigma(int i, int j) const { return frame(i, j) * e_last(4); }
  CVec normal(int i, int j) const { return -frame(i, j).col(2); }
  // images of the coordinate vectors d/dx, d/dy
  Eigen::Matrix<Cx, 4, 2> dsigma(int i, int j) const {
    return frame(i, j).leftCols<2>() * coframe[idx(i, j)];
  }
};

struct DevelopOptions {
  int i0 = -1, j0 = -1;  // basepoint node, default centre
  Mat4 phi0 = Mat4::Identity();
  double gate = 1e-4;
  bool check_gate = true;
  int substeps = 8;
};

// Spanning tree: along the basepoint row, then up and down every column.
inline Development develop(const OmegaField& om, const DevelopOptions& opt = {}) {
  const ChartDomain& dom = om.domain();
  if (opt.check_gate) {
    GCSummary s = gc_summary(om);
    if (s.max() > opt.gate)
      throw GateError("develop: Gauss-Codazzi gate failed (gauss " + std::to_string(s.gauss_max) + ", codazzi " +
                      std::to_string(s.codazzi_max) + ", self-adjoint " + std::to_string(s.self_adjoint_max) + ")");
  }
  Development dev;
  dev.domain = dom;
  dev.i0 = opt.i0 >= 0 ? opt.i0 : dom.nx / 2;
  dev.j0 = opt.j0 >= 0 ? opt.j0 : dom.ny / 2;
  dev.phi.assign(static_cast<size_t>(dom.nx) * dom.ny, Mat4::Zero());
  dev.coframe.resize(dev.phi.size());
  OmegaFn w = om.fn();
  auto step = [&](int ia, int ja, int ib, int jb) {
    CMat p = integrate_path(w, {{dom.x(ia), dom.y(ja)}, {dom.x(ib), dom.y(jb)}}, dev.phi[dev.idx(ia, ja)], opt.substeps);
    dev.phi[dev.idx(ib, jb)] = p;
  };
  dev.phi[dev.idx(dev.i0, dev.j0)] = opt.phi0;
  for (int i = dev.i0 + 1; i < dom.nx; ++i) step(i - 1, dev.j0, i, dev.j0);
  for (int i = dev.i0 - 1; i >= 0; --i) step(i + 1, dev.j0, i, dev.j0);
  for (int i = 0; i < dom.nx; ++i) {
    for (int j = dev.j0 + 1; j < dom.ny; ++j) step(i, j - 1, i, j);
    for (int j = dev.j0 - 1; j >= 0; --j) step(i, j + 1, i, j);
  }
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) dev.coframe[dev.idx(i, j)] = om.frame().coframe(dom.x(i), dom.y(j));
  return dev;
}

inline Development develop(const ImmersionData& d, const DevelopOptions& opt = {}) {
  return develop(OmegaField(d), opt);
}

// max relative deviation of the finite-difference pull-back of sigma from g
inline double pullback_error(const Development& dev, const MetricField& g) {
  const ChartDomain& d = dev.domain;
  double err = 0.0;
  for (int j = 1; j < d.ny - 1; ++j)
    for (int i = 1; i < d.nx - 1; ++i) {
      Eigen::Matrix<Cx, 4, 2> s;
      s.col(0) = (dev.sigma(i + 1, j) - dev.sigma(i - 1, j)) / (2 * d.hx());
      s.col(1) = (dev.sigma(i, j + 1) - dev.sigma(i, j - 1)) / (2 * d.hy());
      Mat2 gm = g(d.x(i), d.y(j));
      err = std::max(err, (Mat2(s.transpose() * s) - gm).norm() / gm.norm());
    }
  return err;
}

inline double normal_drift(const Development& dev) {
  CVec n0 = dev.normal(dev.i0, dev.j0);
  double m = 0.0;
  for (int j = 0; j < dev.domain.ny; ++j)
    for (int i = 0; i < dev.domain.nx; ++i) m = std::max(m, (dev.normal(i, j) - n0).norm());
  return m;
}

// max deviation between the FD derivative of the normal and sigma_*(Psi .)
inline double shape_recovery_error(const Development& dev, const ShapeField& psi) {
  const ChartDomain& d = dev.domain;
  double err = 0.0;
  for (int j = 1; j < d.ny - 1; ++j)
    for (int i = 1; i < d.nx - 1; ++i) {
      Eigen::Matrix<Cx, 4, 2> dn;
      dn.col(0) = (dev.normal(i + 1, j) - dev.normal(i - 1, j)) / (2 * d.hx());
      dn.col(1) = (dev.normal(i, j + 1) - dev.normal(i, j - 1)) / (2 * d.hy());
      Eigen::Matrix<Cx, 4, 2> expect = dev.dsigma(i, j) * psi(d.x(i), d.y(j));
      err = std::max(err, (dn - expect).norm());
    }
  return err;
}

struct Alignment {
  Mat4 phi;
  double residual = 0.0;
  double orthogonality = 0.0;  // of the raw solve, before retraction
};

inline Alignment align(const Development& a, const Development& b) {
  if (a.domain.nx != b.domain.nx || a.domain.ny != b.domain.ny) throw ArgumentError("align: charts differ");
  int i = a.i0, j = a.j0;
  auto matched = [&](const Development& d) {
    Mat4 m;
    m.col(0) = d.sigma(i, j);
    m.col(1) = d.dsigma(i, j).col(0);
    m.col(2) = d.dsigma(i, j).col(1);
    m.col(3) = d.normal(i, j);
    return m;
  };
  Mat4 ma = matched(a), mb = matched(b);
  Eigen::FullPivLU<Mat4> lu(ma);
  if (lu.rank() < 4) throw DecompositionError("align: matched vectors are rank deficient");
  Alignment out;
  Mat4 raw = mb * lu.inverse();
  out.orthogonality = orth_defect(raw);
  out.phi = orth_retract(raw);
  for (int jj = 0; jj < a.domain.ny; ++jj)
    for (int ii = 0; ii < a.domain.nx; ++ii)
      out.residual = std::max(out.residual, (out.phi * a.sigma(ii, jj) - b.sigma(ii, jj)).norm());
  return out;
}

struct Monodromy {
  std::string generator = "delta";
  Mat4 q = Mat4::Identity();
  bool has_pair = false;
  SL2Pair pair;
  Cx trace = 2.0;
};

inline Monodromy monodromy_from_q(const Mat4& q, const std::string& gen = "delta") {
  Monodromy m;
  m.generator = gen;
  m.q = q;
  m.pair = so4_to_sl2_pair(q, 1e-6);
  m.has_pair = true;
  m.trace = m.pair.a.trace();
  return m;
}

// Q = Phi(delta^k x0) Phi(x0)^{-1} along the straight path from x0 with Phi(x0) = I
inline Monodromy monodromy(const OmegaField& om, double x0, double y0, int power = 1, int substeps = 8) {
  const ChartDomain& d = om.domain();
  if (!d.deck_period) return monodromy_from_q(Mat4::Identity(), "trivial");
  double l = *d.deck_period * power;
  int segs = std::max(1, static_cast<int>(std::lround(std::abs(l) / d.hx())));
  std::vector<Point2> path;
  for (int s = 0; s <= segs; ++s) path.push_back({x0 + l * s / segs, y0});
  Mat4 q = integrate_path(om.fn(), path, Mat4::Identity(), substeps);
  return monodromy_from_q(q, power == 1 ? "delta" : "delta^" + std::to_string(power));
}

struct TargetRecord {
  bool g_real = false;
  std::string signature;  // riemannian, negative-definite, (1,1), mixed, complex
  bool psi_real = false, ipsi_real = false;
  double g_imag = 0.0, psi_imag = 0.0, psi_re = 0.0;
  std::vector<std::string> targets;
  std::string target;
  bool ambiguous = false;
};

inline TargetRecord classify_target(const ImmersionData& d, double tol = 1e-8) {
  TargetRecord r;
  const ChartDomain& dom = d.domain;
  int npos = 0, nneg = 0, nmix = 0, total = 0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      double x = dom.x(i), y = dom.y(j);
      Mat2 g = d.g(x, y), p = d.psi(x, y);
      double gs = std::max(g.norm(), 1e-300);
      r.g_imag = std::max(r.g_imag, g.imag().norm() / gs);
      double ps = std::max(1.0, p.norm());
      r.psi_imag = std::max(r.psi_imag, p.imag().norm() / ps);
      r.psi_re = std::max(r.psi_re, p.real().norm() / ps);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.real());
      auto ev = es.eigenvalues();
      ++total;
      if (ev(0) > 0) ++npos;
      else if (ev(1) < 0) ++nneg;
      else ++nmix;
    }
  auto band = [&](double v) { return v > tol && v <= 100 * tol; };
  r.ambiguous = band(r.g_imag) || band(r.psi_imag) || band(r.psi_re);
  r.g_real = r.g_imag <= tol;
  r.psi_real = r.psi_imag <= tol;
  r.ipsi_real = r.psi_re <= tol;
  if (!r.g_real) r.signature = "complex";
  else if (npos == total) r.signature = "riemannian";
  else if (nneg == total) r.signature = "negative-definite";
  else if (nmix == total) r.signature = "(1,1)";
  else r.signature = "mixed";
  const std::string& s = r.signature;
  if (s == "riemannian" && r.psi_real) r.targets.push_back("H3");
  if ((s == "riemannian" && r.ipsi_real) || (s == "(1,1)" && r.psi_real)) r.targets.push_back("AdS3");
  if ((s == "(1,1)" && r.ipsi_real) || (s == "negative-definite" && r.psi_real)) r.targets.push_back("-dS3");
  if (s == "negative-definite" && r.ipsi_real) r.targets.push_back("-S3");
  r.target = r.targets.empty() ? "generic-X3" : r.targets.front();
  return r;
}

// g = h((id + iJ psi) ., (id + iJ psi) .) with J the complex structure of h
inline MetricField h3_to_g_metric(const MetricField& h, const ShapeField& psi, int orientation = 1) {
  return {[h, psi, orientation](double x, double y) -> Mat2 {
            Mat2 hm = h(x, y);
            Mat2 m = Mat2::Identity() + I1 * bicomplex_at(hm, orientation) * psi(x, y);
            return m.transpose() * hm * m;
          },
          "h3-to-g(" + h.name + ")"};
}

struct DegeneracyReport {
  std::vector<std::pair<int, int>> nodes;
  double min_rel_det = std::numeric_limits<double>::infinity();
};

inline DegeneracyReport degeneracy_report(const MetricField& g, const ChartDomain& d, double tol = 1e-9) {
  DegeneracyReport r;
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      Mat2 m = g(d.x(i), d.y(j));
      double rel = std::abs(m.determinant()) / std::max(m.squaredNorm(), 1e-300);
      r.min_rel_det = std::min(r.min_rel_det, rel);
      if (rel <= tol) r.nodes.push_back({i, j});
    }
  return r;
}

// f1 = (-z2 + i)/(i z1 + z3), f2 = (-z2 - i)/(i z1 + z3) for z in the X2 slice
inline std::pair<Cx, Cx> g_pair_of(const CVec& z) {
  Cx den = I1 * z(0) + z(2);
  return {(-z(1) + I1) / den, (-z(1) - I1) / den};
}

struct Codim0Development {
  Development dev;
  double normal_drift = 0.0;
  double curvature_max = 0.0;
  Mat4 rotation;               // sends the constant normal to v4, det 1
  std::vector<CVec> x2;        // points of X2 per node
  std::vector<Cx> f1, f2;      // G pair per node
  bool swapped = false;

  size_t idx(int i, int j) const { return dev.idx(i, j); }
};

inline double jacobian_sign_value(Cx fx, Cx fy) {
  Cx dz = 0.5 * (fx - I1 * fy), dzb = 0.5 * (fx + I1 * fy);
  return std::norm(dz) - std::norm(dzb);
}

inline Codim0Development develop_codim0(const MetricField& g, const ChartDomain& dom, double gate = 1e-4,
                                        DevelopOptions opt = {}) {
  OmegaField om(FrameField(g, dom), ShapeField::zero());
  Codim0Development out;
  GridField k = detail::interior_field(dom, [&](double x, double y) { return om.frame().curvature(x, y) + 1.0; });
  out.curvature_max = k.max_abs();
  if (out.curvature_max > gate)
    throw GateError("develop_codim0: curvature gate failed, max |K + 1| = " + std::to_string(out.curvature_max));
  opt.check_gate = false;
  out.dev = develop(om, opt);
  out.normal_drift = normal_drift(out.dev);
  // Psi = 0 keeps the normal at -phi0 v3; R sends v3 to v4 and v4 to -v3
  Mat4 r = Mat4::Identity();
  r(2, 2) = 0.0, r(3, 3) = 0.0, r(3, 2) = 1.0, r(2, 3) = -1.0;
  out.rotation = r * opt.phi0.transpose();
  const ChartDomain& d = out.dev.domain;
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      CVec s = out.rotation * out.dev.sigma(i, j);
      CVec z = s.head(3);
      out.x2.push_back(z);
      auto [a, b] = g_pair_of(z);
      out.f1.push_back(a);
      out.f2.push_back(b);
    }
  // order the pair so that f1 preserves the chart orientation at the basepoint
  int i = std::clamp(out.dev.i0, 1, d.nx - 2), j = std::clamp(out.dev.j0, 1, d.ny - 2);
  Cx fx = (out.f1[out.idx(i + 1, j)] - out.f1[out.idx(i - 1, j)]) / (2 * d.hx());
  Cx fy = (out.f1[out.idx(i, j + 1)] - out.f1[out.idx(i, j - 1)]) / (2 * d.hy());
  if (jacobian_sign_value(fx, fy) < 0) {
    std::swap(out.f1, out.f2);
    out.swapped = true;
  }
  return out;
}

}  // namespace cgc
