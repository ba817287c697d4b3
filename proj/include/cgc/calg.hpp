#pragma once

#include <optional>

#include "core.hpp"

namespace cgc {

class CBilinearForm {
 public:
  explicit CBilinearForm(const CMat& m) : m_(0.5 * (m + m.transpose())) {
    if (m.rows() != m.cols()) throw ArgumentError("bilinear form must be square");
  }
  static CBilinearForm identity(int n) { return CBilinearForm(CMat::Identity(n, n)); }

  const CMat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  bool nondegenerate(double tol = 1e-9) const {
    double s = m_.norm();
    if (s == 0.0) return false;
    return std::abs(m_.determinant()) > tol * std::pow(s, dim());
  }

 private:
  CMat m_;
};

inline Cx inner(const CBilinearForm& g, const CVec& u, const CVec& v) {
  if (u.size() != g.dim() || v.size() != g.dim())
    throw ArgumentError("inner: dimension mismatch");
  return (u.transpose() * g.matrix() * v)(0, 0);
}

// standard form <z,w>_0 = z^t w
inline Cx dot0(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) throw ArgumentError("dot0: dimension mismatch");
  return (u.transpose() * v)(0, 0);
}

struct SqrtBranch {
  std::optional<Cx> reference;

  static SqrtBranch principal() { return {}; }
  static SqrtBranch near(Cx ref) { return {ref}; }

  Cx operator()(Cx w) const {
    Cx r = std::sqrt(w);
    if (reference && (r * std::conj(*reference)).real() < 0.0) r = -r;
    return r;
  }
};

struct GramSchmidtResult {
  std::vector<CVec> vectors;
  std::vector<Cx> roots;
};

// Orthonormalize seeds for a symmetric bilinear form. Each normalisation root
// is chosen by the matching entry of `branches` (principal if missing).
inline GramSchmidtResult gram_schmidt_ex(const CBilinearForm& g, const std::vector<CVec>& seeds,
                                         const std::vector<SqrtBranch>& branches = {},
                                         double tol = 1e-9) {
  GramSchmidtResult out;
  double scale = g.matrix().norm();
  for (size_t j = 0; j < seeds.size(); ++j) {
    CVec y = seeds[j];
    for (const CVec& x : out.vectors) y -= inner(g, y, x) * x;
    Cx q = inner(g, y, y);
    double ref = scale * y.squaredNorm();
    if (!(std::abs(q) > tol * ref))
      throw DegenerateFrameError("gram_schmidt: isotropic intermediate vector at index " +
                                 std::to_string(j));
    SqrtBranch b = j < branches.size() ? branches[j] : SqrtBranch::principal();
    Cx r = b(q);
    out.roots.push_back(r);
    out.vectors.push_back(y / r);
  }
  return out;
}

inline std::vector<CVec> gram_schmidt(const CBilinearForm& g, const std::vector<CVec>& seeds,
                                      const SqrtBranch& branch = SqrtBranch::principal(),
                                      double tol = 1e-9) {
  std::vector<SqrtBranch> bs(seeds.size(), branch);
  return gram_schmidt_ex(g, seeds, bs, tol).vectors;
}

inline Cx mat2_inner(const Mat2& m, const Mat2& n) {
  return 0.5 * ((m * n).trace() - m.trace() * n.trace());
}

inline Mat2 sl2_cross(const Mat2& v, const Mat2& w, double tol = 1e-12) {
  if (std::abs(v.trace()) > tol || std::abs(w.trace()) > tol)
    throw ArgumentError("sl2_cross: inputs must be traceless");
  return (v * w - w * v) / (2.0 * I1);
}

class SkewComplexMatrix {
 public:
  SkewComplexMatrix() = default;
  explicit SkewComplexMatrix(const CMat& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) throw ArgumentError("skew matrix must be square");
    m_ = 0.5 * (m - m.transpose());
    correction_ = m.size() ? (m - m_).cwiseAbs().maxCoeff() : 0.0;
    warned_ = correction_ > tol;
  }
  const CMat& matrix() const { return m_; }
  double correction() const { return correction_; }
  bool warned() const { return warned_; }

 private:
  CMat m_;
  double correction_ = 0.0;
  bool warned_ = false;
};

}  // namespace cgc
