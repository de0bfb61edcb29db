#pragma once

// Dense linear and exterior algebra on small ambient spaces (dimension <= 16 or so).
// Wedge products are never expanded into coefficient arrays; only their norms and
// vanishing tests are needed.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

using AmbientVector = Eigen::VectorXd;

/// An ordered list of vectors sharing one ambient dimension.
class VectorList {
 public:
  explicit VectorList(int dim) : dim_(dim) {
    if (dim <= 0) fail(ErrorKind::input, "ambient dimension must be positive");
  }

  VectorList(int dim, std::vector<AmbientVector> vectors) : VectorList(dim) {
    vectors_.reserve(vectors.size());
    for (auto& v : vectors) push_back(std::move(v));
  }

  VectorList(int dim, std::initializer_list<AmbientVector> vectors)
      : VectorList(dim, std::vector<AmbientVector>(vectors)) {}

  void push_back(AmbientVector v) {
    if (v.size() != dim_)
      fail(ErrorKind::input, "vector of dimension " + std::to_string(v.size()) +
                                 " in a list of dimension " + std::to_string(dim_));
    if (!v.allFinite()) fail(ErrorKind::input, "vector has non-finite coordinates");
    vectors_.push_back(std::move(v));
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return vectors_.size(); }
  [[nodiscard]] bool empty() const noexcept { return vectors_.empty(); }
  [[nodiscard]] const AmbientVector& operator[](std::size_t i) const { return vectors_[i]; }
  [[nodiscard]] auto begin() const noexcept { return vectors_.begin(); }
  [[nodiscard]] auto end() const noexcept { return vectors_.end(); }
  [[nodiscard]] const std::vector<AmbientVector>& vectors() const noexcept { return vectors_; }

  /// Vectors as the columns of a dim x size matrix.
  [[nodiscard]] Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m(dim_, static_cast<Eigen::Index>(vectors_.size()));
    for (std::size_t j = 0; j < vectors_.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors_[j];
    return m;
  }

  [[nodiscard]] static VectorList from_columns(const Eigen::MatrixXd& m) {
    VectorList out(static_cast<int>(m.rows()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
    return out;
  }

 private:
  int dim_;
  std::vector<AmbientVector> vectors_;
};

inline AmbientVector unit_vector(int dim, int index) {
  if (index < 0 || index >= dim) fail(ErrorKind::input, "unit vector index out of range");
  return AmbientVector::Unit(dim, index);
}

/// Symmetric matrix of pairwise inner products.
inline Eigen::MatrixXd gram_matrix(const VectorList& vs) {
  if (vs.empty()) fail(ErrorKind::input, "gram_matrix of an empty list");
  const Eigen::MatrixXd m = vs.matrix();
  Eigen::MatrixXd g = m.transpose() * m;
  // Exact symmetry, not just symmetry up to rounding.
  return (0.5 * (g + g.transpose())).eval();
}

/// Norm of v_1 ^ ... ^ v_k, i.e. sqrt(det Gram). Evaluated through a QR factorization
/// (product of |R_ii|), which equals the Gram route but keeps accuracy for
/// near-dependent tuples.
inline double wedge_norm(const VectorList& vs) {
  if (static_cast<int>(vs.size()) > vs.dim())
    fail(ErrorKind::input, "wedge of " + std::to_string(vs.size()) + " vectors in dimension " +
                               std::to_string(vs.dim()) + " is identically zero");
  if (vs.empty()) return 1.0;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(vs.matrix());
  const auto r = qr.matrixQR();
  double prod = 1.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(vs.size()); ++i) prod *= std::abs(r(i, i));
  return prod;
}

/// Singular-value based rank with the detail needed to flag borderline decisions.
struct RankInfo {
  int rank = 0;
  Eigen::VectorXd singular_values;  // descending
  double cutoff = 0.0;              // values strictly above are retained
  bool borderline = false;          // a retained value within 10x of the cutoff, or a near-zero max
};

inline RankInfo rank_info(const VectorList& vs, const TolerancePolicy& tol) {
  RankInfo info;
  if (vs.empty()) return info;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(vs.matrix());
  info.singular_values = svd.singularValues();
  const double smax = info.singular_values.size() > 0 ? info.singular_values(0) : 0.0;
  if (smax < tol.zero_abs_tol) {
    info.cutoff = tol.zero_abs_tol;
    info.borderline = smax > tol.zero_abs_tol / 10.0;
    return info;
  }
  info.cutoff = tol.rank_rel_tol * smax;
  for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
    if (info.singular_values(i) > info.cutoff) ++info.rank;
  const double smallest_kept = info.singular_values(info.rank - 1);
  info.borderline = smallest_kept < 10.0 * info.cutoff || smax < 10.0 * tol.zero_abs_tol;
  return info;
}

inline int numerical_rank(const VectorList& vs, const TolerancePolicy& tol) {
  return rank_info(vs, tol).rank;
}

/// Orthonormal basis (as columns) of span(basis), numerically rank-revealing.
inline Eigen::MatrixXd orthonormal_basis(const VectorList& basis, const TolerancePolicy& tol) {
  if (basis.empty()) return Eigen::MatrixXd(basis.dim(), 0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis.matrix(), Eigen::ComputeThinU);
  const int r = rank_info(basis, tol).rank;
  return svd.matrixU().leftCols(r);
}

/// v minus its orthogonal projection onto span(basis). The basis need not be
/// orthonormal. Projection is applied twice (classical re-orthogonalization) so the
/// result is orthogonal to the basis to working precision.
inline AmbientVector project_orthogonal(const AmbientVector& v, const VectorList& basis,
                                        const TolerancePolicy& tol = {}) {
  if (v.size() != basis.dim()) fail(ErrorKind::input, "project_orthogonal: dimension mismatch");
  if (basis.empty()) return v;
  const Eigen::MatrixXd q = orthonormal_basis(basis, tol);
  AmbientVector w = v - q * (q.transpose() * v);
  w -= q * (q.transpose() * w);
  return w;
}

/// Same as project_orthogonal with an already orthonormal basis in matrix columns.
inline AmbientVector project_out(const AmbientVector& v, const Eigen::MatrixXd& q) {
  AmbientVector w = v - q * (q.transpose() * v);
  w -= q * (q.transpose() * w);
  return w;
}

/// Smallest singular value of the column matrix of vs (0 for an empty list).
inline double smallest_singular_value(const VectorList& vs) {
  if (vs.empty()) return 0.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(vs.matrix());
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

}  // namespace ruled
