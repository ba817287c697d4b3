#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "core.hpp"

namespace cgc {

struct Disk {
  double cx, cy, r;
};

struct ChartDomain {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  int nx = 64, ny = 64;
  std::optional<double> deck_period;
  bool periodic_x = false, periodic_y = false;
  std::vector<Disk> excised;

  static ChartDomain rect(double ax, double bx, double ay, double by, int nx, int ny) {
    ChartDomain d;
    d.x0 = ax, d.x1 = bx, d.y0 = ay, d.y1 = by, d.nx = nx, d.ny = ny;
    d.validate();
    return d;
  }

  void validate() const {
    if (nx < 8 || ny < 8) throw ArgumentError("chart: resolution must be at least 8x8");
    if (!(x1 > x0) || !(y1 > y0)) throw ArgumentError("chart: empty rectangle");
    if (deck_period && !(*deck_period > 0.0)) throw ArgumentError("chart: deck period must be positive");
  }

  double hx() const { return periodic_x ? (x1 - x0) / nx : (x1 - x0) / (nx - 1); }
  double hy() const { return periodic_y ? (y1 - y0) / ny : (y1 - y0) / (ny - 1); }
  double x(int i) const { return x0 + i * hx(); }
  double y(int j) const { return y0 + j * hy(); }

  bool interior(int i, int j) const {
    bool ix = periodic_x || (i > 0 && i < nx - 1);
    bool iy = periodic_y || (j > 0 && j < ny - 1);
    return ix && iy;
  }

  bool excised_at(double px, double py) const {
    for (const Disk& d : excised)
      if (std::hypot(px - d.cx, py - d.cy) < d.r) return true;
    return false;
  }

  // node count doubles the resolution so that the spacing halves
  ChartDomain refined() const {
    ChartDomain d = *this;
    d.nx = periodic_x ? 2 * nx : 2 * (nx - 1) + 1;
    d.ny = periodic_y ? 2 * ny : 2 * (ny - 1) + 1;
    return d;
  }

  // nearest node; x is reduced modulo the deck period or the x-period
  std::pair<int, int> nearest(double px, double py) const {
    double period = deck_period ? *deck_period : (periodic_x ? x1 - x0 : 0.0);
    if (period > 0.0) px = x0 + std::fmod(std::fmod(px - x0, period) + period, period);
    if (periodic_y) {
      double p = y1 - y0;
      py = y0 + std::fmod(std::fmod(py - y0, p) + p, p);
    }
    int i = static_cast<int>(std::lround((px - x0) / hx()));
    int j = static_cast<int>(std::lround((py - y0) / hy()));
    if (periodic_x) i = ((i % nx) + nx) % nx;
    if (periodic_y) j = ((j % ny) + ny) % ny;
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return {i, j};
  }
};

using MatFn = std::function<Mat2(double, double)>;

struct MetricField {
  MatFn g;
  std::string name = "metric";

  Mat2 operator()(double x, double y) const {
    Mat2 m = g(x, y);
    return 0.5 * (m + m.transpose());
  }
};

struct ShapeField {
  MatFn psi;
  std::string name = "shape";

  Mat2 operator()(double x, double y) const { return psi(x, y); }

  static ShapeField zero() {
    return {[](double, double) -> Mat2 { return Mat2::Zero(); }, "zero"};
  }
  static ShapeField scalar(Cx c) {
    return {[c](double, double) -> Mat2 { return c * Mat2::Identity(); }, "scalar"};
  }
};

struct ImmersionData {
  ChartDomain domain;
  MetricField g;
  ShapeField psi;
};

}  // namespace cgc
