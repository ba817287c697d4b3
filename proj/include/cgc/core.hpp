#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgc {

using Cx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr Cx I1{0.0, 1.0};

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateFrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ClassificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const CMat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  return true;
}

}  // namespace cgc
