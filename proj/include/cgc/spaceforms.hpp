#pragma once

#include <array>
#include <cmath>

#include "calg.hpp"

namespace cgc {

struct XPoint {
  CVec z;
  XPoint() = default;
  explicit XPoint(CVec v, double tol = 1e-9) : z(std::move(v)) {
    if (std::abs(dot0(z, z) + 1.0) > tol * std::max(1.0, z.squaredNorm()))
      throw ArgumentError("XPoint: not on the quadric");
  }
  int n() const { return static_cast<int>(z.size()) - 1; }
};

inline double quadric_residual(const CVec& z) { return std::abs(dot0(z, z) + 1.0); }

inline void check_tangent(const XPoint& p, const CVec& v, double tol = 1e-9) {
  if (v.size() != p.z.size()) throw ArgumentError("tangent: dimension mismatch");
  if (std::abs(dot0(p.z, v)) > tol * std::max(1.0, p.z.norm() * v.norm()))
    throw ArgumentError("tangent: vector is not orthogonal to the base point");
}

namespace detail {
// cosh(sqrt w) and sinh(sqrt w)/sqrt w, both entire in w
inline std::pair<Cx, Cx> cosh_sinhc(Cx w, int sign = 1) {
  if (std::abs(w) < 1.0) {
    Cx c = 0.0, s = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
      if (k > 0) term *= w / double((2 * k - 1) * (2 * k));
      c += term;
      s += term / double(2 * k + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return {c, s};
  }
  Cx r = double(sign) * std::sqrt(w);
  return {std::cosh(r), std::sinh(r) / r};
}
}  // namespace detail

// sign = -1 evaluates the closed form with the other square root
inline XPoint x_exp(const XPoint& p, const CVec& v, int sign = 1) {
  check_tangent(p, v);
  Cx w = dot0(v, v);
  if (w == Cx(0.0)) return XPoint(p.z + v, 1e-6);
  auto [c, s] = detail::cosh_sinhc(w, sign);
  XPoint out;
  out.z = c * p.z + s * v;
  return out;
}

// optional: largest quadric residual seen along the discrete flow
inline XPoint x_geodesic_ode(const XPoint& p, const CVec& v, double t, int steps,
                             double* max_residual = nullptr) {
  if (max_residual) *max_residual = quadric_residual(p.z);
  if (steps < 1) throw ArgumentError("x_geodesic_ode: steps must be positive");
  if (t == 0.0) return p;
  CVec g = p.z, gd = v;
  double h = t / steps;
  auto acc = [](const CVec& a, const CVec& b) -> CVec { return dot0(b, b) * a; };
  for (int i = 0; i < steps; ++i) {
    CVec k1x = gd, k1v = acc(g, gd);
    CVec k2x = gd + 0.5 * h * k1v, k2v = acc(g + 0.5 * h * k1x, gd + 0.5 * h * k1v);
    CVec k3x = gd + 0.5 * h * k2v, k3v = acc(g + 0.5 * h * k2x, gd + 0.5 * h * k2v);
    CVec k4x = gd + h * k3v, k4v = acc(g + h * k3x, gd + h * k3v);
    g += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    gd += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (max_residual) *max_residual = std::max(*max_residual, quadric_residual(g));
  }
  XPoint out;
  out.z = g;
  return out;
}

inline Cx x1_geodesic(Cx mu1, Cx mu2, double t) {
  if (mu1 == Cx(0.0)) throw ArgumentError("x1_geodesic: mu1 must be nonzero");
  return mu1 * std::exp(t * mu2);
}

inline Mat2 f_iso(const CVec& z) {
  if (z.size() != 4) throw ArgumentError("f_iso: expects a vector of length 4");
  Mat2 m;
  m << -z(0) - I1 * z(3), -z(1) - I1 * z(2),
       -z(1) + I1 * z(2), z(0) - I1 * z(3);
  return m;
}

inline CVec f_iso_inv(const Mat2& m) {
  Cx a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  CVec z(4);
  z << 0.5 * (d - a), -0.5 * (b + c), 0.5 * I1 * (b - c), 0.5 * I1 * (a + d);
  return z;
}

inline Mat4 sl2_pair_to_so4(const Mat2& a, const Mat2& b, double tol = 1e-9) {
  if (std::abs(a.determinant() - 1.0) > tol || std::abs(b.determinant() - 1.0) > tol)
    throw ArgumentError("sl2_pair_to_so4: determinants must be 1");
  Mat2 binv = b.inverse();
  Mat4 q;
  for (int k = 0; k < 4; ++k) {
    CVec e = CVec::Zero(4);
    e(k) = 1.0;
    q.col(k) = f_iso_inv(a * f_iso(e) * binv);
  }
  return q;
}

struct SL2Pair {
  Mat2 a, b;
};

// Fixes the sign so that tr A has nonnegative real part, ties broken by the imaginary part.
inline void normalize_pair_sign(SL2Pair& p) {
  Cx t = p.a.trace();
  double scale = std::max(1.0, std::abs(t));
  bool flip = t.real() < -1e-12 * scale ||
              (std::abs(t.real()) <= 1e-12 * scale && t.imag() < 0.0);
  if (flip) {
    p.a = -p.a;
    p.b = -p.b;
  }
}

inline SL2Pair so4_to_sl2_pair(const Mat4& q, double tol = 1e-8) {
  double orth = (q.transpose() * q - Mat4::Identity()).norm();
  if (orth > tol * std::max(1.0, q.squaredNorm()))
    throw DecompositionError("so4_to_sl2_pair: matrix is not orthogonal");
  // K acts on column-major vec(M) for M -> F(Q F^{-1}(M)), and K = C^t (x) A with C = B^{-1}
  Mat4 k;
  for (int j = 0; j < 4; ++j) {
    Mat2 e = Mat2::Zero();
    e(j % 2, j / 2) = 1.0;
    Mat2 img = f_iso(q * f_iso_inv(e));
    for (int i = 0; i < 4; ++i) k(i, j) = img(i % 2, i / 2);
  }
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double nb = k.block<2, 2>(2 * i, 2 * j).norm();
      if (nb > best) best = nb, bi = i, bj = j;
    }
  Mat2 blk = k.block<2, 2>(2 * bi, 2 * bj);
  Cx d = blk.determinant();
  if (std::abs(d) < 1e-14 * best * best) throw DecompositionError("so4_to_sl2_pair: singular block");
  SL2Pair out;
  out.a = blk / std::sqrt(d);
  double an = out.a.squaredNorm();
  Mat2 ct;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      ct(i, j) = (out.a.conjugate().cwiseProduct(k.block<2, 2>(2 * i, 2 * j))).sum() / an;
  Mat4 rec;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rec.block<2, 2>(2 * i, 2 * j) = ct(i, j) * out.a;
  if ((rec - k).norm() > tol * std::max(1.0, k.norm()))
    throw DecompositionError("so4_to_sl2_pair: matrix is not in the image of SL2 x SL2");
  Mat2 c = ct.transpose();
  if (std::abs(c.determinant() - 1.0) > 1e-6)
    throw DecompositionError("so4_to_sl2_pair: inconsistent determinant");
  out.b = c.inverse();
  normalize_pair_sign(out);
  return out;
}

// Newton step toward Q^t Q = I, applied twice
inline CMat orth_retract(const CMat& q, int iters = 2) {
  CMat r = q;
  CMat id = CMat::Identity(q.rows(), q.cols());
  for (int i = 0; i < iters; ++i) r = 0.5 * r * (3.0 * id - r.transpose() * r);
  return r;
}

inline double orth_defect(const CMat& q) {
  return (q.transpose() * q - CMat::Identity(q.rows(), q.cols())).norm();
}

// Projective point, max-modulus entry scaled to 1
struct PPoint {
  CVec h;
  PPoint() = default;
  explicit PPoint(const CVec& v) {
    Eigen::Index k;
    double m = v.cwiseAbs().maxCoeff(&k);
    if (!(m > 0.0)) throw ArgumentError("projective point: zero homogeneous vector");
    h = v / v(k);
  }
  static PPoint cp1(Cx z) {
    CVec v(2);
    v << z, 1.0;
    return PPoint(v);
  }
  static PPoint infinity() {
    CVec v(2);
    v << 1.0, 0.0;
    return PPoint(v);
  }
  bool is_infinite(double tol = 1e-12) const { return h.size() == 2 && std::abs(h(1)) <= tol; }
  Cx affine() const { return h(0) / h(1); }
};

// sin of the Fubini-Study angle, via the Lagrange identity to avoid cancellation
inline double chordal(const PPoint& p, const PPoint& q) {
  if (p.h.size() != q.h.size()) throw ArgumentError("chordal: dimension mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.h.size(); ++i)
    for (Eigen::Index j = i + 1; j < p.h.size(); ++j) s += std::norm(p.h(i) * q.h(j) - p.h(j) * q.h(i));
  return std::sqrt(s / (p.h.squaredNorm() * q.h.squaredNorm()));
}

inline bool proj_equal(const PPoint& p, const PPoint& q, double tol = 1e-10) {
  return chordal(p, q) < tol;
}

inline CVec veronese_rep(const CVec& t) {
  CVec z(3);
  z << I1 * (t(0) * t(0) + t(1) * t(1)), 2.0 * t(0) * t(1), t(0) * t(0) - t(1) * t(1);
  return z;
}

inline PPoint veronese(const PPoint& t) {
  if (t.h.size() != 2) throw ArgumentError("veronese: expects a point of CP1");
  return PPoint(veronese_rep(t.h));
}

inline CVec cross3(const CVec& u, const CVec& v) {
  CVec w(3);
  w << u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2), u(0) * v(1) - u(1) * v(0);
  return w;
}

inline PPoint g_cover(const PPoint& p, const PPoint& q) {
  if (proj_equal(p, q)) throw ArgumentError("g_cover: points must be distinct");
  return PPoint(cross3(veronese_rep(p.h), veronese_rep(q.h)));
}

inline Cx g_metric_coeff(Cx z1, Cx z2) {
  Cx d = z1 - z2;
  if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(z1)))
    throw SingularPointError("g_metric_coeff: z1 = z2");
  return -4.0 / (d * d);
}

// signature (n - p, p): the last p + 1 real coordinates are multiplied by i
inline XPoint pseudo_embed(int pos, int neg, const Eigen::VectorXd& x, double tol = 1e-9) {
  if (x.size() != pos + neg + 1) throw ArgumentError("pseudo_embed: wrong coordinate count");
  double q = 0.0;
  for (int k = 0; k < x.size(); ++k) q += (k < pos ? 1.0 : -1.0) * x(k) * x(k);
  if (std::abs(q + 1.0) > tol * std::max(1.0, x.squaredNorm()))
    throw ArgumentError("pseudo_embed: point violates the real quadric constraint");
  CVec z(x.size());
  for (int k = 0; k < x.size(); ++k) z(k) = k < pos ? Cx(x(k)) : I1 * x(k);
  XPoint out;
  out.z = z;
  return out;
}

// Upper half-space: point (w, t), tangent (vw, vt), metric (|dw|^2 + dt^2)/t^2
inline PPoint h3_ray_endpoint(Cx w, double t, Cx vw, double vt, int sign, double tol = 1e-9) {
  double nrm = (std::norm(vw) + vt * vt) / (t * t);
  if (std::abs(nrm - 1.0) > tol) throw ArgumentError("h3_ray_endpoint: tangent is not unit");
  double a = std::abs(vw);
  if (a <= 1e-15 * std::abs(vt)) {
    if (sign * vt > 0) return PPoint::infinity();
    return PPoint::cp1(w);
  }
  Cx u = vw / a;
  double c = t * vt / a;
  double r = std::hypot(c, t);
  return PPoint::cp1(w + (sign > 0 ? c + r : c - r) * u);
}

// Hyperboloid {x1^2+x2^2+x3^2-x4^2 = -1, x4 > 0} to half-space, with differential
struct HalfSpacePoint {
  Cx w;
  double t;
  Cx vw;
  double vt;
};

inline HalfSpacePoint hyperboloid_to_halfspace(const Eigen::Vector4d& x, const Eigen::Vector4d& v) {
  double s = x(0) + x(3), ds = v(0) + v(3);
  Cx num(-x(1), -x(2)), dnum(-v(1), -v(2));
  HalfSpacePoint p;
  p.t = 1.0 / s;
  p.w = num / s;
  p.vt = -ds / (s * s);
  p.vw = dnum / s - num * ds / (s * s);
  return p;
}

// Boundary point of the null direction l (projective limit of the hyperboloid map)
inline PPoint null_to_boundary(const Eigen::Vector4d& l) {
  CVec v(2);
  v << Cx(-l(1), -l(2)), Cx(l(0) + l(3));
  return PPoint(v);
}

}  // namespace cgc
