#pragma once

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "spaceforms.hpp"

namespace cgc {

class Sampler {
 public:
  explicit Sampler(uint64_t seed) : rng_(seed) {}

  double real(double sd = 1.0) { return sd * normal_(rng_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  Cx cx(double sd = 1.0) { return {real(sd), real(sd)}; }

  CVec cvec(int n, double sd = 1.0) {
    CVec v(n);
    for (int k = 0; k < n; ++k) v(k) = cx(sd);
    return v;
  }

  XPoint xpoint(int n, double sd = 0.7) {
    for (;;) {
      CVec z = cvec(n + 1, sd);
      Cx q = dot0(z, z);
      if (std::abs(q) < 0.2) continue;
      XPoint p;
      p.z = z / std::sqrt(-q);
      return p;
    }
  }

  CVec tangent(const XPoint& p, double sd = 0.5) {
    CVec w = cvec(static_cast<int>(p.z.size()), sd);
    return w + dot0(w, p.z) * p.z;
  }

  // tangent vector with <v, v> = eps (up to rounding)
  CVec near_isotropic(const XPoint& p, double eps, double sd = 0.5) {
    for (;;) {
      CVec a = tangent(p, sd), b = tangent(p, sd);
      Cx aa = dot0(a, a), ab = dot0(a, b), bb = dot0(b, b);
      if (std::abs(bb) < 1e-3) continue;
      Cx mu = (-ab + std::sqrt(ab * ab - aa * bb)) / bb;
      CVec v = a + mu * b;
      if (v.norm() > 5.0 || v.norm() < 0.05) continue;
      if (eps != 0.0) {
        CVec c = tangent(p, sd);
        Cx vc = dot0(v, c), cc = dot0(c, c);
        // v + s c with 2 s <v,c> + s^2 <c,c> = eps
        Cx s = std::abs(vc) > 1e-8 ? (-vc + std::sqrt(vc * vc + cc * eps)) / cc : std::sqrt(eps / cc);
        v += s * c;
      }
      return v;
    }
  }

  Mat2 sl2(double sd = 0.7) {
    for (;;) {
      Mat2 m;
      m << cx(sd), cx(sd), cx(sd), cx(sd);
      Cx d = m.determinant();
      if (std::abs(d) < 0.1) continue;
      return m / std::sqrt(d);
    }
  }

  CMat orthogonal(int n, double sd = 0.3) {
    CMat s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = cx(sd);
    CMat k = s - s.transpose();
    return k.exp();
  }

  Mat2 traceless(double sd = 1.0) {
    Mat2 m;
    Cx a = cx(sd);
    m << a, cx(sd), cx(sd), -a;
    return m;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Cx mobius(const Mat2& m, Cx z) { return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1)); }
inline Cx mobius_deriv(const Mat2& m, Cx z) {
  Cx d = m(1, 0) * z + m(1, 1);
  return m.determinant() / (d * d);
}

}  // namespace cgc
