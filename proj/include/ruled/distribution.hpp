#pragma once

// The rho map of a ruling distribution, X -> orthogonal part of dX/dt, its rank (the
// degree) along the curve, and frame pivoting so that the last d fields carry the
// full degree.

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/parametric.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

struct RhoSample {
  double t = 0.0;
  VectorList rho_vectors{1};  // rho_t X_1, ..., rho_t X_{m-1}
  int degree = 0;
  bool borderline = false;
  RankInfo rank;
};

/// Maximal run of consecutive non-borderline samples with one degree.
struct DegreeSegment {
  std::size_t first = 0;  // sample indices, inclusive
  std::size_t last = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  int degree = 0;

  [[nodiscard]] std::size_t count() const { return last - first + 1; }
};

struct DegreeProfile {
  std::vector<RhoSample> samples;
  std::optional<int> constant_degree;
  bool cylindrical = false;
  bool noncylindrical = false;
  std::vector<DegreeSegment> segments;
  std::vector<std::size_t> borderline_samples;
};

/// rho_t X_j for every frame field at t.
inline RhoSample rho_at(const FramedCurve& fc, double t, const TolerancePolicy& tol = {}) {
  fc.check_parameter(t);
  const VectorList frame = fc.frame_at(t, 0);
  const Eigen::MatrixXd x = frame.matrix();
  const Eigen::MatrixXd g = x.transpose() * x;
  if ((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > tol.derivative_check_tol)
    fail(ErrorKind::frame, "frame is not orthonormal", t);
  RhoSample sample;
  sample.t = t;
  sample.rho_vectors = VectorList(fc.dim);
  for (const auto& field : fc.frame) sample.rho_vectors.push_back(project_orthogonal(field.eval(t, 1), frame, tol));
  sample.rank = rank_info(sample.rho_vectors, tol);
  sample.degree = sample.rank.rank;
  sample.borderline = sample.rank.borderline;
  const int bound = std::min(fc.m - 1, fc.codim() + 1);
  if (sample.degree > bound)
    fail(ErrorKind::numeric, "degree " + std::to_string(sample.degree) + " exceeds min(m-1, n+1)", t);
  return sample;
}

inline DegreeProfile degree_profile(const FramedCurve& fc, const std::vector<double>& ts,
                                    const TolerancePolicy& tol = {}) {
  DegreeProfile profile;
  for (double t : ts) profile.samples.push_back(rho_at(fc, t, tol));
  if (profile.samples.empty()) return profile;

  bool all_equal = true, all_zero = true, all_positive = true;
  for (const auto& s : profile.samples) {
    all_equal = all_equal && s.degree == profile.samples.front().degree;
    all_zero = all_zero && s.degree == 0;
    all_positive = all_positive && s.degree > 0;
  }
  if (all_equal) profile.constant_degree = profile.samples.front().degree;
  profile.cylindrical = all_zero;
  profile.noncylindrical = all_positive;

  std::optional<DegreeSegment> open;
  for (std::size_t i = 0; i < profile.samples.size(); ++i) {
    const auto& s = profile.samples[i];
    if (s.borderline) {
      profile.borderline_samples.push_back(i);
      if (open) profile.segments.push_back(*open);
      open.reset();
      continue;
    }
    if (open && open->degree == s.degree) {
      open->last = i;
      open->t_end = s.t;
    } else {
      if (open) profile.segments.push_back(*open);
      open = DegreeSegment{i, i, s.t, s.t, s.degree};
    }
  }
  if (open) profile.segments.push_back(*open);
  return profile;
}

inline DegreeProfile degree_profile(const FramedCurve& fc, const SampleGrid& grid, const TolerancePolicy& tol = {}) {
  return degree_profile(fc, grid.t_samples, tol);
}

namespace detail {

inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline double subset_strength(const RhoSample& s, const std::vector<int>& subset) {
  VectorList vs(s.rho_vectors.dim());
  for (int j : subset) vs.push_back(s.rho_vectors[static_cast<std::size_t>(j)]);
  return smallest_singular_value(vs);
}

inline std::string list_parameters(const std::vector<double>& ts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ts.size() && i < 10; ++i) out << (i ? ", " : "") << ts[i];
  if (ts.size() > 10) out << ", ... (" << ts.size() << " total)";
  return out.str();
}

/// Aligns each eigenvector cluster of `current` with `previous` (sign flips for simple
/// eigenvalues, a best-fit rotation inside repeated ones).
inline Eigen::MatrixXd align_eigenbasis(const Eigen::MatrixXd& current, const Eigen::VectorXd& eigenvalues,
                                        const Eigen::MatrixXd& previous, double cluster_tol) {
  Eigen::MatrixXd out = current;
  const Eigen::Index r = current.cols();
  Eigen::Index start = 0;
  while (start < r) {
    Eigen::Index end = start + 1;
    while (end < r && std::abs(eigenvalues(end) - eigenvalues(start)) <= cluster_tol) ++end;
    const Eigen::MatrixXd block = current.middleCols(start, end - start);
    const Eigen::MatrixXd m = block.transpose() * previous.middleCols(start, end - start);
    out.middleCols(start, end - start) = block * polar_orthogonal(m);
    start = end;
  }
  return out;
}

}  // namespace detail

/// Frame with the same pointwise span whose last d fields have rho-images of rank d at
/// every grid sample. Prefers the frame unchanged, then a constant permutation, then a
/// smoothly varying rotation diagonalizing the Gram matrix of the rho-images.
inline FramedCurve pivot_frame(const FramedCurve& fc, const std::vector<double>& ts, int d,
                               const TolerancePolicy& tol = {}) {
  const int r = fc.frame_size();
  if (d <= 0 || d > r) fail(ErrorKind::pivot, "pivot degree must lie in [1, m-1]");
  const DegreeProfile profile = degree_profile(fc, ts, tol);
  std::vector<double> wrong;
  for (const auto& s : profile.samples)
    if (s.degree != d) wrong.push_back(s.t);
  if (!wrong.empty())
    fail(ErrorKind::pivot, "degree is not constantly " + std::to_string(d) + " at t = " + detail::list_parameters(wrong));

  auto score = [&](const std::vector<int>& subset) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : profile.samples) worst = std::min(worst, detail::subset_strength(s, subset));
    return worst;
  };

  std::vector<int> tail;
  for (int j = r - d; j < r; ++j) tail.push_back(j);
  if (score(tail) > tol.zero_abs_tol) return fc;

  std::vector<int> best;
  double best_score = -1.0;
  for (const auto& subset : detail::combinations(r, d)) {
    const double sc = score(subset);
    if (sc > best_score) {
      best_score = sc;
      best = subset;
    }
  }
  if (best_score > tol.zero_abs_tol) {
    FramedCurve out = fc;
    out.frame.clear();
    for (int j = 0; j < r; ++j)
      if (std::find(best.begin(), best.end(), j) == best.end()) out.frame.push_back(fc.frame[static_cast<std::size_t>(j)]);
    for (int j : best) out.frame.push_back(fc.frame[static_cast<std::size_t>(j)]);
    return out;
  }

  // Rotation: eigenvectors of Gram(rho-images), ascending eigenvalue so that the dominant
  // directions come last, kept continuous in t.
  std::vector<Eigen::MatrixXd> rotations;
  for (const auto& s : profile.samples) {
    const Eigen::MatrixXd rho = s.rho_vectors.matrix();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rho.transpose() * rho);
    Eigen::MatrixXd v = eig.eigenvectors();
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (!rotations.empty()) v = detail::align_eigenbasis(v, eig.eigenvalues(), rotations.back(), 1e-6 * scale);
    rotations.push_back(v);
  }
  FramedCurve out = fc;
  out.frame = rotate_frame(fc.frame, ts, rotations, "pivot_rotation");
  out.interval = {ts.front(), ts.back()};
  std::vector<double> failing;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Eigen::MatrixXd rotated = profile.samples[i].rho_vectors.matrix() * rotations[i];
    VectorList last(fc.dim);
    for (int j = r - d; j < r; ++j) last.push_back(rotated.col(j));
    if (rank_info(last, tol).rank < d) failing.push_back(ts[i]);
  }
  if (!failing.empty())
    fail(ErrorKind::pivot, "no frame rotation reaches full sub-degree at t = " + detail::list_parameters(failing));
  return out;
}

}  // namespace ruled
