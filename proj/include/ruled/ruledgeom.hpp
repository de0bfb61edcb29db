#pragma once

// The ruled submanifold sigma(t, u) = gamma(t) + sum_j u^j X_j(t): evaluation, Jacobian,
// second fundamental form along the t direction, first normal space, planar points,
// rank-one test, tangent-space stability along rulings and flatness.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ruled/distribution.hpp"
#include "ruled/error.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

struct RuledPatch {
  FramedCurve fc;
  SampleGrid grid;
  TolerancePolicy tol;

  void validate() const {
    tol.validate();
    grid.validate();
    fc.validate(grid.t_samples, tol);
  }

  [[nodiscard]] int m() const { return fc.m; }
  [[nodiscard]] int dim() const { return fc.dim; }

  /// Same curve on a sub-range of the grid.
  [[nodiscard]] RuledPatch slice(std::size_t first, std::size_t last) const {
    return {fc, grid.slice(first, last), tol};
  }
};

namespace detail {

inline void check_ruling_coords(const RuledPatch& p, const Eigen::VectorXd& u) {
  if (u.size() != p.m() - 1)
    fail(ErrorKind::input, "expected " + std::to_string(p.m() - 1) + " ruling coordinates, got " +
                               std::to_string(u.size()));
}

}  // namespace detail

inline AmbientVector eval_sigma(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  detail::check_ruling_coords(p, u);
  p.fc.check_parameter(t);
  AmbientVector x = p.fc.directrix.eval(t, 0);
  for (Eigen::Index j = 0; j < u.size(); ++j) x += u(j) * p.fc.frame[static_cast<std::size_t>(j)].eval(t, 0);
  return x;
}

/// d sigma/dt, then d sigma/du^j = X_j.
inline VectorList jacobian_sigma(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  detail::check_ruling_coords(p, u);
  p.fc.check_parameter(t);
  AmbientVector dt = p.fc.directrix.eval(t, 1);
  for (Eigen::Index j = 0; j < u.size(); ++j) dt += u(j) * p.fc.frame[static_cast<std::size_t>(j)].eval(t, 1);
  VectorList out(p.dim());
  out.push_back(std::move(dt));
  for (const auto& x : p.fc.frame) out.push_back(x.eval(t, 0));
  return out;
}

inline int jacobian_rank(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  return numerical_rank(jacobian_sigma(p, t, u), p.tol);
}

/// Regular iff the smallest singular value of the Jacobian exceeds rank_rel_tol times the largest.
inline bool is_regular(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  return jacobian_rank(p, t, u) == p.m();
}

/// Second derivative d^2 sigma / dt^2.
inline AmbientVector sigma_tt(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  AmbientVector out = p.fc.directrix.eval(t, 2);
  for (Eigen::Index j = 0; j < u.size(); ++j) out += u(j) * p.fc.frame[static_cast<std::size_t>(j)].eval(t, 2);
  return out;
}

struct PointwiseSecondForm {
  double t = 0.0;
  Eigen::VectorXd u;
  /// II(x0, x0), II(x0, x1), ..., II(x0, x_{m-1}) with x0 = d/dt, x_j = d/du^j.
  std::vector<AmbientVector> ii_vectors;
  int first_normal_dim = 0;
};

namespace detail {

/// Local frame data at a regular point: Jacobian J = Q R with orthonormal Q.
struct PointFrame {
  Eigen::MatrixXd jacobian;
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
};

inline PointFrame point_frame(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  const VectorList jac = jacobian_sigma(p, t, u);
  if (numerical_rank(jac, p.tol) < p.m()) fail(ErrorKind::regularity, "singular point of the ruled patch", t);
  PointFrame f;
  f.jacobian = jac.matrix();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.jacobian);
  const auto m = static_cast<Eigen::Index>(p.m());
  f.q = qr.householderQ() * Eigen::MatrixXd::Identity(p.dim(), m);
  f.r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  return f;
}

}  // namespace detail

inline PointwiseSecondForm second_form_along_directrix(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  const auto frame = detail::point_frame(p, t, u);
  PointwiseSecondForm out;
  out.t = t;
  out.u = u;
  out.ii_vectors.push_back(project_out(sigma_tt(p, t, u), frame.q));
  for (const auto& x : p.fc.frame) out.ii_vectors.push_back(project_out(x.eval(t, 1), frame.q));
  out.first_normal_dim = numerical_rank(VectorList(p.dim(), out.ii_vectors), p.tol);
  return out;
}

/// Every sampled (t, u) with the ruling coordinates on the grid's tensor window.
template <typename Visit>
void for_each_grid_point(const RuledPatch& p, Visit&& visit) {
  const auto us = p.grid.u_points(p.m() - 1);
  for (std::size_t i = 0; i < p.grid.t_samples.size(); ++i)
    for (const auto& u : us) visit(i, p.grid.t_samples[i], u);
}

struct FirstNormalEntry {
  double t = 0.0;
  Eigen::VectorXd u;
  int first_normal_dim = 0;
  int degree = 0;
  bool pass = true;
};

struct FirstNormalReport {
  std::vector<FirstNormalEntry> entries;  // regular sampled points
  std::size_t singular_skipped = 0;
  std::size_t violations = 0;
  int min_dim = 0;
  int max_dim = 0;
};

/// Checks d - 1 <= dim N^1 <= d + 1 at every regular sampled point, d the degree at t.
inline FirstNormalReport first_normal_bounds_check(const RuledPatch& p) {
  const DegreeProfile profile = degree_profile(p.fc, p.grid, p.tol);
  FirstNormalReport report;
  report.min_dim = p.dim();
  for_each_grid_point(p, [&](std::size_t i, double t, const Eigen::VectorXd& u) {
    if (!is_regular(p, t, u)) {
      ++report.singular_skipped;
      return;
    }
    FirstNormalEntry e;
    e.t = t;
    e.u = u;
    e.degree = profile.samples[i].degree;
    e.first_normal_dim = second_form_along_directrix(p, t, u).first_normal_dim;
    e.pass = e.first_normal_dim >= e.degree - 1 && e.first_normal_dim <= e.degree + 1;
    if (!e.pass) ++report.violations;
    report.min_dim = std::min(report.min_dim, e.first_normal_dim);
    report.max_dim = std::max(report.max_dim, e.first_normal_dim);
    report.entries.push_back(std::move(e));
  });
  if (report.entries.empty()) report.min_dim = 0;
  return report;
}

struct SamplePoint {
  double t = 0.0;
  Eigen::VectorXd u;
};

/// Regular sampled points where the second fundamental form vanishes.
inline std::vector<SamplePoint> planar_points(const RuledPatch& p) {
  std::vector<SamplePoint> out;
  for_each_grid_point(p, [&](std::size_t, double t, const Eigen::VectorXd& u) {
    if (!is_regular(p, t, u)) return;
    if (second_form_along_directrix(p, t, u).first_normal_dim == 0) out.push_back({t, u});
  });
  return out;
}

struct RankOneResult {
  bool rank_one = false;
  std::size_t planar_count = 0;
  std::vector<double> t;
  std::vector<double> max_residual;  // max_j |X_j' ^ gamma' ^ X_1 ^ ... ^ X_{m-1}| at each t
  double worst_residual = 0.0;
};

/// Residual of the developability system at t (0 when m + 1 exceeds the ambient dimension,
/// where every such wedge vanishes identically).
inline double developability_residual(const FramedCurve& fc, double t) {
  if (fc.m + 1 > fc.dim) return 0.0;
  double worst = 0.0;
  const VectorList frame = fc.frame_at(t, 0);
  const AmbientVector gd = fc.directrix.eval(t, 1);
  for (const auto& x : fc.frame) {
    VectorList vs(fc.dim);
    vs.push_back(x.eval(t, 1));
    vs.push_back(gd);
    for (const auto& v : frame) vs.push_back(v);
    worst = std::max(worst, wedge_norm(vs));
  }
  return worst;
}

/// Rank-one iff no planar sampled point and the developability system vanishes at every t.
inline RankOneResult rank_one_check(const RuledPatch& p) {
  RankOneResult out;
  out.planar_count = planar_points(p).size();
  for (double t : p.grid.t_samples) {
    const double r = developability_residual(p.fc, t);
    out.t.push_back(t);
    out.max_residual.push_back(r);
    out.worst_residual = std::max(out.worst_residual, r);
  }
  out.rank_one = out.planar_count == 0 && out.worst_residual < p.tol.zero_abs_tol;
  return out;
}

/// Largest principal-angle sine between the tangent spaces at (t, u) and (t, v).
inline double tangent_space_deviation(const RuledPatch& p, double t, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v) {
  const auto a = detail::point_frame(p, t, u);
  const auto b = detail::point_frame(p, t, v);
  const Eigen::MatrixXd ab = b.q - a.q * (a.q.transpose() * b.q);
  const Eigen::MatrixXd ba = a.q - b.q * (b.q.transpose() * a.q);
  return std::max(ab.norm(), ba.norm());
}

/// True iff all listed pairs (u, v) along the ruling at t have the same tangent space.
inline bool tangent_space_stability(const RuledPatch& p, double t,
                                    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs) {
  for (const auto& [u, v] : pairs)
    if (tangent_space_deviation(p, t, u, v) >= p.tol.zero_abs_tol) return false;
  return true;
}

struct StabilitySweep {
  bool stable = true;
  double max_deviation = 0.0;
  std::size_t pairs_checked = 0;
};

/// Random regular pairs inside the sampling window, `pairs_per_t` at every grid t.
inline StabilitySweep tangent_stability_sweep(const RuledPatch& p, int pairs_per_t, std::mt19937_64& rng) {
  StabilitySweep out;
  std::uniform_real_distribution<double> coord(-p.grid.u_extent, p.grid.u_extent);
  auto draw = [&](double t) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      Eigen::VectorXd u(p.m() - 1);
      for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = coord(rng);
      if (is_regular(p, t, u)) return u;
    }
    fail(ErrorKind::regularity, "no regular point found on the ruling", t);
  };
  for (double t : p.grid.t_samples)
    for (int k = 0; k < pairs_per_t; ++k) {
      const Eigen::VectorXd u = draw(t), v = draw(t);
      const double dev = tangent_space_deviation(p, t, u, v);
      out.max_deviation = std::max(out.max_deviation, dev);
      out.stable = out.stable && dev < p.tol.zero_abs_tol;
      ++out.pairs_checked;
    }
  return out;
}

/// Sectional curvatures of the coordinate 2-planes (after orthonormalizing the coordinate
/// basis d/dt, d/du^1, ...) from the Gauss equation K = <II(a,a), II(b,b)> - |II(a,b)|^2.
/// Entries are ordered (0,1), (0,2), ..., (1,2), ...
inline std::vector<double> sectional_curvatures(const RuledPatch& p, double t, const Eigen::VectorXd& u) {
  const auto frame = detail::point_frame(p, t, u);
  const int m = p.m();
  // II on coordinate vectors: only pairs involving d/dt are nonzero.
  std::vector<std::vector<AmbientVector>> coord_ii(static_cast<std::size_t>(m),
                                                   std::vector<AmbientVector>(static_cast<std::size_t>(m),
                                                                              AmbientVector::Zero(p.dim())));
  coord_ii[0][0] = project_out(sigma_tt(p, t, u), frame.q);
  for (int j = 1; j < m; ++j) {
    const AmbientVector v = project_out(p.fc.frame[static_cast<std::size_t>(j - 1)].eval(t, 1), frame.q);
    coord_ii[0][static_cast<std::size_t>(j)] = v;
    coord_ii[static_cast<std::size_t>(j)][0] = v;
  }
  const Eigen::MatrixXd rinv =
      frame.r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
  auto ii = [&](int a, int b) {
    AmbientVector out = AmbientVector::Zero(p.dim());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double w = rinv(i, a) * rinv(j, b);
        if (w != 0.0) out += w * coord_ii[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    return out;
  };
  std::vector<double> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) out.push_back(ii(a, a).dot(ii(b, b)) - ii(a, b).squaredNorm());
  return out;
}

struct FlatnessResult {
  double max_abs_curvature = 0.0;
  std::size_t points_checked = 0;
  std::size_t singular_skipped = 0;
};

inline FlatnessResult flatness_check(const RuledPatch& p) {
  FlatnessResult out;
  for_each_grid_point(p, [&](std::size_t, double t, const Eigen::VectorXd& u) {
    if (!is_regular(p, t, u)) {
      ++out.singular_skipped;
      return;
    }
    for (double k : sectional_curvatures(p, t, u)) out.max_abs_curvature = std::max(out.max_abs_curvature, std::abs(k));
    ++out.points_checked;
  });
  return out;
}

}  // namespace ruled
