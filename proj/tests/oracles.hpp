#pragma once

#include <cgc/families.hpp>

namespace oracle {

using namespace cgc;

// Real hyperboloid point and normal of a development of real data into the H3 slice
inline Eigen::Vector4d real_part(const CVec& z) {
  return Eigen::Vector4d(z(0).real(), z(1).real(), z(2).real(), z(3).imag());
}

struct EndpointPair {
  std::vector<Cx> plus, minus;
};

// Endpoints of the normal geodesic rays in both directions, by closed-form half-space geodesics
inline EndpointPair ray_endpoints(const Development& dev) {
  EndpointPair out;
  const ChartDomain& d = dev.domain;
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      Eigen::Vector4d x = real_part(dev.sigma(i, j)), n = real_part(dev.normal(i, j));
      HalfSpacePoint h = hyperboloid_to_halfspace(x, n);
      out.plus.push_back(h3_ray_endpoint(h.w, h.t, h.vw, h.vt, +1, 1e-6).affine());
      out.minus.push_back(h3_ray_endpoint(h.w, h.t, h.vw, h.vt, -1, 1e-6).affine());
    }
  return out;
}

// Pull-back of -4/(z1-z2)^2 dz1 dz2 along (f1, f2) by centered differences, relative error against g
inline double g_pullback_error(const ChartDomain& d, const std::vector<Cx>& f1, const std::vector<Cx>& f2,
                               const MetricField& g, int margin = 1) {
  auto at = [&](const std::vector<Cx>& f, int i, int j) { return f[static_cast<size_t>(j) * d.nx + i]; };
  double err = 0.0;
  for (int j = margin; j < d.ny - margin; ++j)
    for (int i = margin; i < d.nx - margin; ++i) {
      Vec2 a((at(f1, i + 1, j) - at(f1, i - 1, j)) / (2 * d.hx()), (at(f1, i, j + 1) - at(f1, i, j - 1)) / (2 * d.hy()));
      Vec2 b((at(f2, i + 1, j) - at(f2, i - 1, j)) / (2 * d.hx()), (at(f2, i, j + 1) - at(f2, i, j - 1)) / (2 * d.hy()));
      Cx c = g_metric_coeff(at(f1, i, j), at(f2, i, j));
      Mat2 m = c * 0.5 * (a * b.transpose() + b * a.transpose());
      Mat2 gm = g(d.x(i), d.y(j));
      err = std::max(err, (m - gm).norm() / gm.norm());
    }
  return err;
}

struct AntiMobius {
  Mat2 m;
  double residual;
  Cx ratio;  // M conj(M) = ratio * I up to scale
  double ratio_defect;
};

// f2 = M . conj(f1) fitted through the null vector of a(w) + b - c w f2 - d f2 = 0
inline AntiMobius fit_anti_mobius(const std::vector<Cx>& f1, const std::vector<Cx>& f2) {
  CMat a(f1.size(), 4);
  for (size_t k = 0; k < f1.size(); ++k) {
    Cx w = std::conj(f1[k]);
    a.row(k) << w, 1.0, -w * f2[k], -f2[k];
    a.row(k) /= a.row(k).norm();
  }
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinV);
  CVec v = svd.matrixV().col(3);
  AntiMobius out;
  out.m << v(0), v(1), v(2), v(3);
  out.m /= std::sqrt(out.m.determinant());
  out.residual = svd.singularValues()(3) / std::sqrt(double(f1.size()));
  Mat2 p = out.m * out.m.conjugate();
  out.ratio = 0.5 * p.trace();
  out.ratio_defect = (p - out.ratio * Mat2::Identity()).norm() / std::abs(out.ratio);
  return out;
}

// h = f(y)^2 dx^2 + dy^2 with f = 1 + y^3, so K_h = -6y/f changes sign across y = 0;
// psi is h-self-adjoint, Codazzi and satisfies det psi = 1 + K_h
inline MetricField ksign_metric() {
  return {[](double, double y) -> Mat2 {
            double f = 1 + y * y * y;
            Mat2 m = Mat2::Zero();
            m(0, 0) = f * f;
            m(1, 1) = 1.0;
            return m;
          },
          "k-sign"};
}

inline ShapeField ksign_shape() {
  return {[](double, double y) -> Mat2 {
            double f = 1 + y * y * y, f1 = 3 * y * y, f2 = 6 * y;
            double r = std::sqrt(f * f - f1 * f1 + 1);
            Mat2 m = Mat2::Zero();
            m(0, 0) = r / f;
            m(1, 1) = (f - f2) / r;
            return m;
          },
          "k-sign-shape"};
}

}  // namespace oracle
