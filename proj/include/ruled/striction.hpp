#pragma once

// Striction sheet of a ruled patch of constant degree d > 0.
//
// With the frame pivoted so that X_{m-d}, ..., X_{m-1} carry the full degree, the sheet
//     beta(t, u_free) = gamma + sum_free u^i X_i + sum_solved u^h(t, u_free) X_h
// is fixed by <d beta/dt, rho X_h> = 0 for the solved h, a d x d linear system
// A(t) u_solved = b(t, u_free) with b affine in the free coordinates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ruled/distribution.hpp"
#include "ruled/error.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/parametric.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/spline.hpp"

namespace ruled {

struct StrictionSystem {
  double t = 0.0;
  int d = 0;
  Eigen::MatrixXd a;          // A_hk = <X_k', rho X_h> over the solved indices
  Eigen::MatrixXd b_affine;   // columns: constant term, then one per free coordinate
  Eigen::MatrixXd rho_gram;   // Gram of the solved rho-images (equal to A in exact arithmetic)
  Eigen::MatrixXd a_dot;      // dA/dt
  Eigen::MatrixXd b_affine_dot;
  double min_eigenvalue = 0.0;

  [[nodiscard]] double asymmetry() const { return (a - a.transpose()).cwiseAbs().maxCoeff(); }
  [[nodiscard]] double gram_deviation() const { return (a - rho_gram).cwiseAbs().maxCoeff(); }
};

/// Assembles A, b (and their t-derivatives) at t for a pivoted frame of degree d.
inline StrictionSystem assemble_system(const FramedCurve& fc, double t, int d, const TolerancePolicy& tol = {}) {
  const int r = fc.frame_size();
  if (d <= 0 || d > r) fail(ErrorKind::input, "striction needs 1 <= d <= m-1");
  fc.check_parameter(t);
  const int free = r - d;
  const Eigen::MatrixXd x = fc.frame_matrix(t, 0);
  const Eigen::MatrixXd dx = fc.frame_matrix(t, 1);
  const Eigen::MatrixXd ddx = fc.frame_matrix(t, 2);
  const AmbientVector g1 = fc.directrix.eval(t, 1);
  const AmbientVector g2 = fc.directrix.eval(t, 2);
  const VectorList frame = VectorList::from_columns(x);

  // rho X_h and its t-derivative; rho X = X' - X (X^T X') for an orthonormal frame.
  Eigen::MatrixXd rho(fc.dim, d), rho_dot(fc.dim, d);
  for (int h = 0; h < d; ++h) {
    const Eigen::Index k = free + h;
    rho.col(h) = project_orthogonal(dx.col(k), frame, tol);
    const Eigen::VectorXd c = x.transpose() * dx.col(k);
    const Eigen::VectorXd c_dot = x.transpose() * ddx.col(k) + dx.transpose() * dx.col(k);
    rho_dot.col(h) = ddx.col(k) - x * c_dot - dx * c;
  }

  StrictionSystem sys;
  sys.t = t;
  sys.d = d;
  sys.a.resize(d, d);
  sys.a_dot.resize(d, d);
  sys.b_affine.resize(d, free + 1);
  sys.b_affine_dot.resize(d, free + 1);
  for (int h = 0; h < d; ++h) {
    for (int k = 0; k < d; ++k) {
      sys.a(h, k) = dx.col(free + k).dot(rho.col(h));
      sys.a_dot(h, k) = ddx.col(free + k).dot(rho.col(h)) + dx.col(free + k).dot(rho_dot.col(h));
    }
    sys.b_affine(h, 0) = -g1.dot(rho.col(h));
    sys.b_affine_dot(h, 0) = -(g2.dot(rho.col(h)) + g1.dot(rho_dot.col(h)));
    for (int i = 0; i < free; ++i) {
      sys.b_affine(h, 1 + i) = -dx.col(i).dot(rho.col(h));
      sys.b_affine_dot(h, 1 + i) = -(ddx.col(i).dot(rho.col(h)) + dx.col(i).dot(rho_dot.col(h)));
    }
  }
  sys.rho_gram = rho.transpose() * rho;
  const Eigen::MatrixXd sym = 0.5 * (sys.a + sys.a.transpose());
  sys.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues()(0);
  if (sys.min_eigenvalue < tol.zero_abs_tol)
    fail(ErrorKind::degeneracy, "striction matrix A is singular (smallest eigenvalue " +
                                    format_number(sys.min_eigenvalue) + ")",
         t);
  return sys;
}

/// The solved sheet: coefficient matrices C(t) with u_solved = C(t) (1, u_free), sampled on
/// the grid and interpolated by cubic Hermite splines with exact node derivatives.
class StrictionSheet {
 public:
  /// `coeff_dots` are the node slopes; when empty they are taken from the local
  /// interpolant of the node values.
  StrictionSheet(FramedCurve fc, int d, std::vector<double> ts, std::vector<Eigen::MatrixXd> coeffs,
                 std::vector<Eigen::MatrixXd> coeff_dots)
      : fc_(std::move(fc)), d_(d), ts_(std::move(ts)), coeffs_(std::move(coeffs)) {
    std::vector<Eigen::VectorXd> values, slopes;
    for (std::size_t i = 0; i < ts_.size(); ++i) values.push_back(detail::flatten(coeffs_[i]));
    if (coeff_dots.empty()) {
      slopes = HermiteSpline::local_slopes(ts_, values);
    } else {
      for (const auto& c : coeff_dots) slopes.push_back(detail::flatten(c));
    }
    spline_ = std::make_shared<const HermiteSpline>(ts_, std::move(values), std::move(slopes));
  }

  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] int m() const noexcept { return fc_.m; }
  [[nodiscard]] int free_count() const noexcept { return fc_.m - 1 - d_; }
  [[nodiscard]] int sheet_dim() const noexcept { return fc_.m - d_; }
  [[nodiscard]] const FramedCurve& frame() const noexcept { return fc_; }
  [[nodiscard]] const std::vector<double>& t_samples() const noexcept { return ts_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& coefficients() const noexcept { return coeffs_; }

  std::vector<double> fallback_t;      // samples solved by the pivoted-QR fallback
  std::vector<StrictionSystem> systems;  // one per grid sample
  double defining_residual = 0.0;      // max |<beta', rho X_h>| over grid samples

  [[nodiscard]] Eigen::MatrixXd coefficient(double t, int order = 0) const {
    const Eigen::VectorXd flat = spline_->eval(t, order);
    return Eigen::Map<const Eigen::MatrixXd>(flat.data(), d_, free_count() + 1);
  }

  [[nodiscard]] Eigen::VectorXd solved(double t, const Eigen::VectorXd& u_free, int order = 0) const {
    check_free(u_free);
    Eigen::VectorXd affine(free_count() + 1);
    affine(0) = 1.0;
    affine.tail(free_count()) = u_free;
    return coefficient(t, order) * affine;
  }

  /// Full ruling coordinates (u_free, u_solved) in the pivoted frame.
  [[nodiscard]] Eigen::VectorXd ruling_coords(double t, const Eigen::VectorXd& u_free) const {
    Eigen::VectorXd u(fc_.m - 1);
    u.head(free_count()) = u_free;
    u.tail(d_) = solved(t, u_free);
    return u;
  }

  [[nodiscard]] AmbientVector beta(double t, const Eigen::VectorXd& u_free) const {
    const Eigen::VectorXd u = ruling_coords(t, u_free);
    AmbientVector x = fc_.directrix.eval(t, 0);
    for (Eigen::Index j = 0; j < u.size(); ++j) x += u(j) * fc_.frame[static_cast<std::size_t>(j)].eval(t, 0);
    return x;
  }

  /// d beta / dt: analytic in the fields, spline derivative for the solved coordinates.
  [[nodiscard]] AmbientVector beta_dt(double t, const Eigen::VectorXd& u_free) const {
    const Eigen::VectorXd u = ruling_coords(t, u_free);
    const Eigen::VectorXd du = solved(t, u_free, 1);
    AmbientVector x = fc_.directrix.eval(t, 1);
    for (Eigen::Index j = 0; j < u.size(); ++j) x += u(j) * fc_.frame[static_cast<std::size_t>(j)].eval(t, 1);
    for (int h = 0; h < d_; ++h) x += du(h) * fc_.frame[static_cast<std::size_t>(free_count() + h)].eval(t, 0);
    return x;
  }

  /// d beta/dt, then d beta/du^i = X_i + sum_h (d u^h/du^i) X_h for the free coordinates.
  [[nodiscard]] VectorList beta_partials(double t, const Eigen::VectorXd& u_free) const {
    VectorList out(fc_.dim);
    out.push_back(beta_dt(t, u_free));
    const Eigen::MatrixXd c = coefficient(t);
    for (int i = 0; i < free_count(); ++i) {
      AmbientVector v = fc_.frame[static_cast<std::size_t>(i)].eval(t, 0);
      for (int h = 0; h < d_; ++h) v += c(h, 1 + i) * fc_.frame[static_cast<std::size_t>(free_count() + h)].eval(t, 0);
      out.push_back(std::move(v));
    }
    return out;
  }

  /// max_h |<beta', rho X_h>| at (t, u_free).
  [[nodiscard]] double defining_residual_at(double t, const Eigen::VectorXd& u_free,
                                            const TolerancePolicy& tol) const {
    const AmbientVector bd = beta_dt(t, u_free);
    const VectorList frame = fc_.frame_at(t, 0);
    double worst = 0.0;
    for (int h = 0; h < d_; ++h) {
      const AmbientVector rho =
          project_orthogonal(fc_.frame[static_cast<std::size_t>(free_count() + h)].eval(t, 1), frame, tol);
      worst = std::max(worst, std::abs(bd.dot(rho)));
    }
    return worst;
  }

 private:
  void check_free(const Eigen::VectorXd& u_free) const {
    if (u_free.size() != free_count())
      fail(ErrorKind::input, "expected " + std::to_string(free_count()) + " free sheet coordinates");
  }

  FramedCurve fc_;
  int d_;
  std::vector<double> ts_;
  std::vector<Eigen::MatrixXd> coeffs_;
  std::shared_ptr<const HermiteSpline> spline_;
};

/// Pivots the frame for degree d and solves A u = b at every grid sample.
inline StrictionSheet solve_striction(const RuledPatch& p, int d) {
  if (d <= 0) fail(ErrorKind::input, "no striction sheet for degree 0 (cylindrical patch)");
  const auto& ts = p.grid.t_samples;
  const FramedCurve pivoted = pivot_frame(p.fc, ts, d, p.tol);
  std::vector<Eigen::MatrixXd> coeffs, coeff_dots;
  std::vector<StrictionSystem> systems;
  std::vector<double> fallback;
  for (double t : ts) {
    StrictionSystem sys = assemble_system(pivoted, t, d, p.tol);
    Eigen::MatrixXd c, c_dot;
    if (sys.min_eigenvalue < 10.0 * p.tol.zero_abs_tol) {
      const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.a);
      c = qr.solve(sys.b_affine);
      c_dot = qr.solve(sys.b_affine_dot - sys.a_dot * c);
      fallback.push_back(t);
    } else {
      const Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (sys.a + sys.a.transpose()));
      c = llt.solve(sys.b_affine);
      c_dot = llt.solve(sys.b_affine_dot - sys.a_dot * c);
    }
    coeffs.push_back(std::move(c));
    coeff_dots.push_back(std::move(c_dot));
    systems.push_back(std::move(sys));
  }
  // The exact slope needs X''; interpolated frames only have it piecewise, so their slopes
  // come from the node values instead.
  bool interpolated = pivoted.directrix.interpolated();
  for (const auto& x : pivoted.frame) interpolated = interpolated || x.interpolated();
  if (interpolated) coeff_dots.clear();
  StrictionSheet sheet(pivoted, d, ts, std::move(coeffs), std::move(coeff_dots));
  sheet.fallback_t = std::move(fallback);
  sheet.systems = std::move(systems);
  const auto free_points = p.grid.u_points(sheet.free_count());
  for (double t : ts)
    for (const auto& uf : free_points) {
      const double res = sheet.defining_residual_at(t, uf, p.tol);
      sheet.defining_residual = std::max(sheet.defining_residual, res);
      if (res > p.tol.zero_abs_tol * (1.0 + uf.lpNorm<Eigen::Infinity>()))
        fail(ErrorKind::numeric, "solved sheet violates <beta', rho X_h> = 0 (residual " + format_number(res) + ")", t);
    }
  return sheet;
}

/// Numerical rank of the partials of beta; never below m - d - 1.
inline int striction_jacobian_rank(const StrictionSheet& sheet, double t, const Eigen::VectorXd& u_free,
                                   const TolerancePolicy& tol = {}) {
  const int rank = numerical_rank(sheet.beta_partials(t, u_free), tol);
  if (rank < sheet.free_count())
    fail(ErrorKind::numeric, "striction sheet rank " + std::to_string(rank) + " below m-d-1", t);
  return rank;
}

struct SingularEntry {
  double t = 0.0;
  Eigen::VectorXd u_free;
  double wedge_residual = 0.0;
  bool singular = false;
};

struct OffSheetProbe {
  double t = 0.0;
  Eigen::VectorXd u;  // full ruling coordinates in the pivoted frame
  bool regular = true;
};

struct SingularLocus {
  std::vector<SingularEntry> entries;
  std::vector<OffSheetProbe> off_sheet;
  double perturbation = 0.0;

  [[nodiscard]] std::size_t singular_count() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.singular; }));
  }
  [[nodiscard]] double singular_fraction() const {
    return entries.empty() ? 0.0 : static_cast<double>(singular_count()) / static_cast<double>(entries.size());
  }
  [[nodiscard]] std::size_t off_sheet_regular() const {
    return static_cast<std::size_t>(std::count_if(off_sheet.begin(), off_sheet.end(), [](const auto& e) { return e.regular; }));
  }
};

/// |beta' ^ X_1 ^ ... ^ X_{m-1}| at a sheet point.
inline double sheet_wedge_residual(const StrictionSheet& sheet, double t, const Eigen::VectorXd& u_free) {
  VectorList vs(sheet.frame().dim);
  vs.push_back(sheet.beta_dt(t, u_free));
  for (const auto& x : sheet.frame().frame) vs.push_back(x.eval(t, 0));
  return wedge_norm(vs);
}

/// Singularity test on every sheet sample, plus `probes` random points pushed off the sheet
/// by +-10 grid u-spacings in each solved coordinate, which must all be regular.
inline SingularLocus singular_locus(const RuledPatch& p, const StrictionSheet& sheet, std::uint64_t seed = 0,
                                    int probes = 32) {
  SingularLocus locus;
  for (double t : sheet.t_samples())
    for (const auto& uf : p.grid.u_points(sheet.free_count())) {
      SingularEntry e;
      e.t = t;
      e.u_free = uf;
      e.wedge_residual = sheet_wedge_residual(sheet, t, uf);
      e.singular = e.wedge_residual < p.tol.zero_abs_tol;
      locus.entries.push_back(std::move(e));
    }
  const RuledPatch pivoted{sheet.frame(), p.grid, p.tol};
  locus.perturbation = 10.0 * p.grid.u_spacing();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_dist(sheet.t_samples().front(), sheet.t_samples().back());
  std::uniform_real_distribution<double> u_dist(-p.grid.u_extent, p.grid.u_extent);
  std::bernoulli_distribution sign;
  for (int k = 0; k < probes; ++k) {
    OffSheetProbe probe;
    probe.t = t_dist(rng);
    Eigen::VectorXd uf(sheet.free_count());
    for (Eigen::Index i = 0; i < uf.size(); ++i) uf(i) = u_dist(rng);
    probe.u = sheet.ruling_coords(probe.t, uf);
    for (int h = 0; h < sheet.d(); ++h) probe.u(sheet.free_count() + h) += sign(rng) ? locus.perturbation : -locus.perturbation;
    probe.regular = is_regular(pivoted, probe.t, probe.u);
    locus.off_sheet.push_back(std::move(probe));
  }
  return locus;
}

struct EquivalenceEntry {
  double t = 0.0;
  Eigen::VectorXd u_free;
  int j = 0;  // pivoted frame index
  double plain_residual = 0.0;     // |beta' ^ X_1 ^ ... ^ X_{m-1}|
  double extended_residual = 0.0;  // |X_j' ^ beta' ^ X_1 ^ ... ^ X_{m-1}|
  bool agree = true;
};

struct EquivalenceTable {
  std::vector<EquivalenceEntry> entries;
  std::size_t skipped = 0;  // (t, j) with rho X_j below tolerance
  bool all_agree = true;
};

/// Compares the vanishing of beta' ^ X_1 ^ ... ^ X_{m-1} with that of the same wedge
/// extended by X_j', for every j with rho X_j != 0. The extended wedge equals
/// |rho X_j| times the plain one, so its vanishing threshold is scaled accordingly.
inline EquivalenceTable equivalent_condition_check(const RuledPatch& p, const StrictionSheet& sheet) {
  EquivalenceTable table;
  const FramedCurve& fc = sheet.frame();
  if (fc.m + 1 > fc.dim) {
    table.skipped = sheet.t_samples().size();
    return table;
  }
  for (double t : sheet.t_samples()) {
    const VectorList frame = fc.frame_at(t, 0);
    for (const auto& uf : p.grid.u_points(sheet.free_count())) {
      const AmbientVector bd = sheet.beta_dt(t, uf);
      VectorList plain(fc.dim);
      plain.push_back(bd);
      for (const auto& x : frame) plain.push_back(x);
      const double plain_res = wedge_norm(plain);
      for (int j = 0; j < fc.frame_size(); ++j) {
        const AmbientVector xd = fc.frame[static_cast<std::size_t>(j)].eval(t, 1);
        const double rho_norm = project_orthogonal(xd, frame, p.tol).norm();
        if (rho_norm < p.tol.zero_abs_tol) {
          ++table.skipped;
          continue;
        }
        VectorList ext(fc.dim);
        ext.push_back(xd);
        for (const auto& v : plain) ext.push_back(v);
        EquivalenceEntry e;
        e.t = t;
        e.u_free = uf;
        e.j = j;
        e.plain_residual = plain_res;
        e.extended_residual = wedge_norm(ext);
        e.agree = (plain_res < p.tol.zero_abs_tol) == (e.extended_residual < p.tol.zero_abs_tol * rho_norm);
        table.all_agree = table.all_agree && e.agree;
        table.entries.push_back(std::move(e));
      }
    }
  }
  return table;
}

/// Distance from x to the sheet as a point set: nearest sample, then damped Gauss-Newton
/// over (t, u_free) with t kept inside the sampled range.
class SheetDistance {
 public:
  SheetDistance(const StrictionSheet& sheet, const SampleGrid& grid) : sheet_(sheet) {
    for (double t : sheet.t_samples())
      for (const auto& uf : grid.u_points(sheet.free_count())) samples_.push_back({t, uf, sheet.beta(t, uf)});
  }

  [[nodiscard]] double operator()(const AmbientVector& x) const {
    const Sample* best = &samples_.front();
    double best_d = (best->point - x).norm();
    for (const auto& s : samples_) {
      const double dist = (s.point - x).norm();
      if (dist < best_d) {
        best_d = dist;
        best = &s;
      }
    }
    const double lo = sheet_.t_samples().front(), hi = sheet_.t_samples().back();
    Eigen::VectorXd theta(1 + sheet_.free_count());
    theta(0) = best->t;
    theta.tail(sheet_.free_count()) = best->u_free;
    double lambda = 1e-6;
    for (int it = 0; it < 60 && best_d > 0.0; ++it) {
      const Eigen::MatrixXd jac = sheet_.beta_partials(theta(0), theta.tail(sheet_.free_count())).matrix();
      const AmbientVector res = sheet_.beta(theta(0), theta.tail(sheet_.free_count())) - x;
      const Eigen::MatrixXd normal =
          jac.transpose() * jac + lambda * Eigen::MatrixXd::Identity(theta.size(), theta.size());
      Eigen::VectorXd next = theta - normal.ldlt().solve(jac.transpose() * res);
      next(0) = std::clamp(next(0), lo, hi);
      const double d_next = (sheet_.beta(next(0), next.tail(sheet_.free_count())) - x).norm();
      if (d_next < best_d) {
        const bool converged = best_d - d_next < 1e-15;
        theta = next;
        best_d = d_next;
        lambda = std::max(lambda * 0.1, 1e-12);
        if (converged) break;
      } else {
        lambda *= 10.0;
        if (lambda > 1e8) break;
      }
    }
    return best_d;
  }

 private:
  struct Sample {
    double t;
    Eigen::VectorXd u_free;
    AmbientVector point;
  };
  const StrictionSheet& sheet_;
  std::vector<Sample> samples_;
};

struct InvarianceOffset {
  Eigen::VectorXd offset;
  bool skipped = false;
  std::string note;
  double deviation = 0.0;
};

struct InvarianceResult {
  std::vector<InvarianceOffset> offsets;
  double max_deviation = 0.0;
};

/// Recomputes the sheet from the shifted directrices gamma + sum_j c^j X_j (re-parametrized
/// by arclength, same rulings) and measures how far the new sheet points lie from the
/// original sheet.
inline InvarianceResult directrix_invariance(const RuledPatch& p, const StrictionSheet& sheet,
                                             const std::vector<Eigen::VectorXd>& offsets) {
  InvarianceResult result;
  const SheetDistance distance(sheet, p.grid);
  const Interval range{p.grid.t_samples.front(), p.grid.t_samples.back()};
  for (const auto& c : offsets) {
    InvarianceOffset entry;
    entry.offset = c;
    if (c.size() != p.m() - 1) fail(ErrorKind::input, "offset needs m-1 coordinates");
    try {
      std::vector<ParamVectorField> terms{p.fc.directrix};
      std::vector<double> coefs{1.0};
      for (Eigen::Index j = 0; j < c.size(); ++j) {
        terms.push_back(p.fc.frame[static_cast<std::size_t>(j)]);
        coefs.push_back(c(j));
      }
      const auto map = make_arclength_map(linear_combination(terms, coefs), range, p.tol);
      FramedCurve shifted;
      shifted.dim = p.fc.dim;
      shifted.m = p.fc.m;
      shifted.directrix = compose(linear_combination(terms, coefs), map);
      for (const auto& x : p.fc.frame) shifted.frame.push_back(compose(x, map));
      shifted.interval = map->s_range();
      SampleGrid grid = SampleGrid::uniform(shifted.interval, static_cast<int>(p.grid.t_samples.size()),
                                            p.grid.u_extent, p.grid.u_samples_per_axis);
      const RuledPatch moved{shifted, grid, p.tol};
      const StrictionSheet other = solve_striction(moved, sheet.d());
      for (double s : grid.t_samples)
        for (const auto& uf : grid.u_points(other.free_count()))
          entry.deviation = std::max(entry.deviation, distance(other.beta(s, uf)));
      result.max_deviation = std::max(result.max_deviation, entry.deviation);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::regularity) throw;
      entry.skipped = true;
      entry.note = e.what();
    }
    result.offsets.push_back(std::move(entry));
  }
  return result;
}

}  // namespace ruled
