#include <gtest/gtest.h>

#include <cgc/families.hpp>

using namespace cgc;

namespace {

ChartDomain patch(int n, double w = 0.1, double yc = 1.0) {
  return ChartDomain::rect(-w / 2, w / 2, yc - w / 2, yc + w / 2, n, n);
}

RegularPair hyperbolic_pair(double c = 1.0) { return {hyperbolic_plane(), ShapeField::scalar(c)}; }

RegularPair cylinder_pair(double c = 1.0) { return {hyperbolic_cylinder(), cylinder_regular_b(c)}; }

ChartDomain cylinder_chart(double ell, int nx, int ny) {
  ChartDomain d = ChartDomain::rect(0.0, ell, -0.2, 0.2, nx, ny);
  d.deck_period = ell;
  return d;
}

HoloFamily cylinder_family(double ell, Cx center, double radius, int m, int nx = 64, int ny = 33) {
  HoloFamily f;
  f.center = center;
  f.radius = radius;
  f.m = m;
  ChartDomain d = cylinder_chart(ell, nx, ny);
  RegularPair p = cylinder_pair();
  f.eval = [p, d](Cx z) { return landslide_family(p, z, d); };
  return f;
}

}  // namespace

TEST(Landslide, ZeroParameterIsTheSeed) {
  ImmersionData d = landslide_family(hyperbolic_pair(), 0.0, patch(16));
  EXPECT_LT((d.g(0.01, 1.02) - hyperbolic_plane()(0.01, 1.02)).norm(), 1e-15);
  EXPECT_EQ(d.psi(0.01, 1.02).norm(), 0.0);
}

TEST(Landslide, RealAndImaginaryParameterTargets) {
  ChartDomain d = patch(16);
  EXPECT_EQ(classify_target(landslide_family(hyperbolic_pair(), 0.5, d)).target, "H3");
  EXPECT_EQ(classify_target(landslide_family(hyperbolic_pair(), Cx(0.0, 0.5), d)).target, "AdS3");
  EXPECT_EQ(classify_target(landslide_family(hyperbolic_pair(), Cx(0.3, 0.2), d)).target, "generic-X3");
}

TEST(Landslide, PoleThrows) {
  EXPECT_THROW(landslide_family(hyperbolic_pair(), Cx(0.0, M_PI / 2), patch(16)), PoleError);
  EXPECT_NO_THROW(landslide_family(hyperbolic_pair(), Cx(0.0, M_PI / 2 - 1e-3), patch(16)));
}

TEST(Landslide, GaussCodazziAcrossParameters) {
  ChartDomain d = patch(65);
  for (Cx z : {Cx(0.0), Cx(0.4), Cx(-0.7), Cx(0.0, 0.4), Cx(0.0, -0.9), Cx(0.3, 0.2), Cx(-0.5, 0.6), Cx(1.0, 1.0),
               Cx(0.2, -1.2)}) {
    GCSummary s = gc_summary(OmegaField(landslide_family(hyperbolic_pair(), z, d)));
    EXPECT_LT(s.max(), 1e-4) << z;
  }
}

TEST(Landslide, CylinderSeedIsRegular) {
  ChartDomain d = cylinder_chart(1.5, 64, 33);
  RegularReport r = regular_check(cylinder_pair(), d);
  EXPECT_TRUE(r.ok());
  for (Cx z : {Cx(0.5), Cx(0.0, 0.5), Cx(0.3, 0.2)})
    EXPECT_LT(gc_summary(OmegaField(landslide_family(cylinder_pair(), z, d))).max(), 1e-4) << z;
}

TEST(LandslideMetric, Examples) {
  RegularPair p = hyperbolic_pair();
  MetricField h = hyperbolic_plane();
  EXPECT_LT((landslide_metric(p, 0.0)(0.1, 1.3) - h(0.1, 1.3)).norm(), 1e-15);
  EXPECT_LT((landslide_metric(p, 0.7)(0.1, 1.3) - h(0.1, 1.3)).norm(), 1e-14);
}

TEST(LandslideMetric, ImaginaryParameterIsHyperbolic) {
  RegularPair p = cylinder_pair();
  ChartDomain d = ChartDomain::rect(0.0, 0.1, -0.05, 0.05, 64, 64);
  for (double s : {0.3, 0.8}) {
    FrameField f(landslide_metric(p, Cx(0.0, s)), d);
    double err = 0.0;
    for (int j = 1; j < d.ny - 1; j += 5)
      for (int i = 1; i < d.nx - 1; i += 5) err = std::max(err, std::abs(f.curvature_node(i, j) + 1.0));
    EXPECT_LT(err, 1e-5) << s;
  }
}

TEST(CauchyRiemann, Examples) {
  int m = 9;
  double h = 0.05;
  CMat sq(m, m), cj(m, m), ex(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      Cx z(-0.2 + i * h, -0.2 + j * h);
      sq(i, j) = z * z;
      cj(i, j) = std::conj(z);
      ex(i, j) = std::exp(z);
    }
  EXPECT_LT(cr_residual(sq, h, h), 1e-10);
  EXPECT_NEAR(cr_residual(cj, h, h), 1.0, 1e-12);
  EXPECT_LT(cr_residual(ex, h, h), h * h);
  EXPECT_THROW(cr_residual(CMat::Zero(4, 4), h, h), ArgumentError);
}

TEST(CauchyRiemann, HolomorphicStencilIsSecondOrder) {
  auto grid = [](int m, double eps) {
    double h = 0.4 / (m - 1);
    CMat f(m, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        Cx z(-0.2 + i * h, -0.2 + j * h);
        f(i, j) = std::exp(2.0 * z) + std::sin(z) * z + eps * std::conj(z);
      }
    return std::pair{f, h};
  };
  auto [a, ha] = grid(9, 0.0);
  auto [b, hb] = grid(17, 0.0);
  double ra = cr_residual(a, ha, ha), rb = cr_residual(b, hb, hb, 2);
  EXPECT_GT(ra / rb, 3.5);
  EXPECT_LT(ra / rb, 4.5);
  auto [pa, pha] = grid(9, 0.01);
  auto [pb, phb] = grid(17, 0.01);
  double qa = cr_residual(pa, pha, pha), qb = cr_residual(pb, phb, phb, 2);
  EXPECT_NEAR(qb, 0.01, 2 * rb);
  EXPECT_GT(qb, 5e-3);
}

TEST(Sweep, TraceSurfaceIsHolomorphic) {
  double ell = 1.5;
  HoloFamily f = cylinder_family(ell, Cx(0.0, 0.3), 0.2, 5);
  TraceSurface a = sweep_monodromy(f);
  TraceSurface b = sweep_monodromy(f.refined());
  ASSERT_EQ(b.values.rows(), 9);
  EXPECT_LT(b.cr, 1e-3);
  double ca = cr_residual(a.values, a.spacing, a.spacing);
  double cb = cr_residual(b.values, b.spacing, b.spacing, 2);
  EXPECT_GT(ca / cb, 3.5);
  EXPECT_LT(ca / cb, 4.5);
  EXPECT_TRUE(a.flagged.empty());
}

TEST(Sweep, CenterMatchesDirectMonodromy) {
  double ell = 1.5;
  HoloFamily f = cylinder_family(ell, 0.0, 0.2, 5);
  TraceSurface t = sweep_monodromy(f);
  Monodromy m = monodromy(OmegaField(f.eval(0.0)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(t.values(2, 2) - m.trace), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(t.values(2, 2)), 2 * std::cosh(ell / 2), 1e-3);
}

TEST(Sweep, ConstantFamilyIsConstant) {
  double ell = 1.5;
  HoloFamily f;
  f.radius = 0.2;
  f.m = 5;
  ChartDomain d = cylinder_chart(ell, 64, 33);
  f.eval = [d](Cx) { return ImmersionData{d, hyperbolic_cylinder(), ShapeField::zero()}; };
  TraceSurface t = sweep_monodromy(f);
  EXPECT_LT((t.values.array() - t.values(0, 0)).abs().maxCoeff(), 1e-8);
  EXPECT_LT(t.cr, 1e-8);
}

TEST(Sweep, AntiHolomorphicPerturbationDetected) {
  double ell = 1.5;
  HoloFamily f = cylinder_family(ell, 0.0, 0.2, 5);
  RegularPair p = cylinder_pair();
  ChartDomain d = cylinder_chart(ell, 64, 33);
  f.eval = [p, d](Cx z) {
    ImmersionData data = landslide_family(p, z, d);
    MetricField g = data.g, h = p.h;
    data.g = {[g, h, z](double x, double y) -> Mat2 { return g(x, y) + 0.01 * std::conj(z) * h(x, y); }, "perturbed"};
    return data;
  };
  SweepOptions o;
  o.check_gate = false;
  TraceSurface a = sweep_monodromy(f, o), b = sweep_monodromy(f.refined(), o);
  double ca = a.cr, cb = cr_residual(b.values, b.spacing, b.spacing, 2);
  EXPECT_GT(cb, 0.9 * ca);
  EXPECT_GT(cb, 5e-3);
}

TEST(Sweep, GateRejectsInconsistentSamples) {
  HoloFamily f;
  f.m = 5;
  ChartDomain d = cylinder_chart(1.5, 64, 16);
  f.eval = [d](Cx) { return ImmersionData{d, hyperbolic_cylinder(), ShapeField::scalar(1.0)}; };
  EXPECT_THROW(sweep_monodromy(f), GateError);
}

TEST(RegularCheck, Examples) {
  ChartDomain d = patch(33);
  RegularReport id = regular_check(hyperbolic_pair(), d);
  EXPECT_TRUE(id.ok());
  EXPECT_LT(id.codazzi, 1e-12);
  EXPECT_EQ(id.det, 0.0);
  EXPECT_EQ(id.self_adjoint, 0.0);

  RegularReport big = regular_check(hyperbolic_pair(1.1), d);
  EXPECT_NEAR(big.det, 0.21, 1e-12);
  EXPECT_FALSE(big.det_ok);
  EXPECT_TRUE(big.codazzi_ok);

  ShapeField anis{[](double, double) -> Mat2 {
                    Mat2 m = Mat2::Zero();
                    m(0, 0) = 2.0;
                    m(1, 1) = 0.5;
                    return m;
                  },
                  "anisotropic"};
  RegularReport a = regular_check({hyperbolic_plane(), anis}, d);
  EXPECT_LT(a.det, 1e-15);
  EXPECT_TRUE(a.self_adjoint_ok);
  EXPECT_FALSE(a.codazzi_ok);
}

TEST(Consistency, TwoLandslidePresentationsShareMonodromy) {
  double ell = 1.5;
  RegularPair p = cylinder_pair();
  ChartDomain d = cylinder_chart(ell, 256, 64);
  for (double s : {0.3, 0.6}) {
    ImmersionData fam = landslide_family(p, s, d);
    Cx t_fam = monodromy(OmegaField(fam), 0.0, 0.0).trace;
    ImmersionData via_h3{d, h3_to_g_metric(fam.g, fam.psi), ShapeField::zero()};
    ImmersionData via_gz{d, landslide_metric(p, Cx(0.0, s)), ShapeField::zero()};
    Cx t_h3 = monodromy(OmegaField(via_h3), 0.0, 0.0).trace;
    Cx t_gz = monodromy(OmegaField(via_gz), 0.0, 0.0).trace;
    EXPECT_NEAR(std::abs(t_fam - t_gz), 0.0, 1e-4) << s;
    EXPECT_NEAR(std::abs(t_h3 - t_gz), 0.0, 1e-4) << s;
    EXPECT_GT(std::abs(t_fam - 2 * std::cosh(ell / 2)), 1e-2);
  }
}
