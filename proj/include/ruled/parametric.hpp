#pragma once

// Curve-level operations: arclength re-parametrization, Gram-Schmidt orthonormalization
// of frames, and parallel transport of a frame along its own distribution.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/field.hpp"
#include "ruled/framed_curve.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/spline.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

/// The inverse arclength function t(s) of a regular curve, together with the exact
/// derivatives t'(s) = 1/|f'(t)| and its s-derivatives evaluated through the curve.
class ArclengthMap {
 public:
  static constexpr int kNodes = 2049;

  struct Jet {
    double t = 0.0;
    double d1 = 0.0;  // dt/ds
    double d2 = 0.0;
    double d3 = 0.0;
  };

  ArclengthMap(ParamVectorField curve, Interval t_range, const TolerancePolicy& tol)
      : curve_(std::move(curve)), t_range_(t_range) {
    if (curve_.max_order() < 2)
      fail(ErrorKind::input, "arclength re-parametrization needs two derivatives of the curve");
    if (!(t_range.hi > t_range.lo)) fail(ErrorKind::input, "empty interval");
    std::vector<double> ts(kNodes), ss(kNodes);
    std::vector<Eigen::VectorXd> values(kNodes), slopes(kNodes);
    for (int i = 0; i < kNodes; ++i) {
      ts[static_cast<std::size_t>(i)] =
          t_range.lo + t_range.length() * static_cast<double>(i) / static_cast<double>(kNodes - 1);
    }
    ts.back() = t_range.hi;
    auto speed = [this](double t) { return curve_.derivative(t, 1).norm(); };
    double s = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double v = speed(ts[ui]);
      if (!(v > tol.zero_abs_tol)) fail(ErrorKind::regularity, "curve speed vanishes", ts[ui]);
      if (i > 0) {
        s += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(speed, ts[ui - 1], ts[ui], 2,
                                                                            1e-12);
      }
      ss[ui] = s;
      values[ui] = Eigen::VectorXd::Constant(1, ts[ui]);
      slopes[ui] = Eigen::VectorXd::Constant(1, 1.0 / v);
    }
    // Fritsch-Carlson limiter keeps the cubic monotone.
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
      const double secant = (ts[i + 1] - ts[i]) / (ss[i + 1] - ss[i]);
      const double a = slopes[i](0) / secant;
      const double b = slopes[i + 1](0) / secant;
      const double r2 = a * a + b * b;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        slopes[i](0) = tau * a * secant;
        slopes[i + 1](0) = tau * b * secant;
      }
    }
    length_ = s;
    inverse_ = HermiteSpline(std::move(ss), std::move(values), std::move(slopes));
  }

  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] Interval t_range() const noexcept { return t_range_; }
  [[nodiscard]] Interval s_range() const noexcept { return {0.0, length_}; }
  [[nodiscard]] const ParamVectorField& curve() const noexcept { return curve_; }
  /// Highest derivative of t(s) available: t^(k) needs the curve's k-th derivative.
  [[nodiscard]] int max_order() const { return std::min(3, curve_.max_order()); }

  [[nodiscard]] double t_at(double s) const {
    return std::clamp(inverse_.eval(s, 0)(0), t_range_.lo, t_range_.hi);
  }

  [[nodiscard]] Jet jet(double s) const {
    Jet j;
    j.t = t_at(s);
    const AmbientVector c1 = curve_.derivative(j.t, 1);
    const AmbientVector c2 = curve_.derivative(j.t, 2);
    const double v = c1.norm();
    const double v1 = c1.dot(c2) / v;
    j.d1 = 1.0 / v;
    j.d2 = -v1 / (v * v * v);
    if (max_order() < 3) return j;
    const AmbientVector c3 = curve_.derivative(j.t, 3);
    const double v2 = (c2.squaredNorm() + c1.dot(c3) - v1 * v1) / v;
    j.d3 = -v2 / std::pow(v, 4) + 3.0 * v1 * v1 / std::pow(v, 5);
    return j;
  }

 private:
  ParamVectorField curve_;
  Interval t_range_;
  double length_ = 0.0;
  HermiteSpline inverse_;
};

namespace detail {

/// f(t(s)) with chain-rule derivatives through an ArclengthMap.
class ReparamRep final : public FieldRep {
 public:
  ReparamRep(ParamVectorField base, std::shared_ptr<const ArclengthMap> map)
      : base_(std::move(base)), map_(std::move(map)) {}
  [[nodiscard]] int dim() const override { return base_.dim(); }
  [[nodiscard]] Interval domain() const override { return map_->s_range(); }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return "arclength(" + base_.family() + ")"; }
  [[nodiscard]] int max_order() const override { return std::min(map_->max_order(), base_.max_order()); }
  [[nodiscard]] bool interpolated() const override { return base_.interpolated(); }
  [[nodiscard]] AmbientVector derivative(double s, int order) const override {
    const auto j = map_->jet(std::clamp(s, 0.0, map_->length()));
    switch (order) {
      case 0: return base_.derivative(j.t, 0);
      case 1: return base_.derivative(j.t, 1) * j.d1;
      case 2: return base_.derivative(j.t, 2) * j.d1 * j.d1 + base_.derivative(j.t, 1) * j.d2;
      default:
        return base_.derivative(j.t, 3) * j.d1 * j.d1 * j.d1 +
               3.0 * base_.derivative(j.t, 2) * j.d1 * j.d2 + base_.derivative(j.t, 1) * j.d3;
    }
  }

 private:
  ParamVectorField base_;
  std::shared_ptr<const ArclengthMap> map_;
};

/// E_j(t) = sum_k X_k(t) Q_kj(t): a frame mixed by an interpolated matrix Q(t).
class FrameMixRep final : public FieldRep {
 public:
  FrameMixRep(std::vector<ParamVectorField> frame, std::shared_ptr<const HermiteSpline> mix, int column,
              std::string family)
      : frame_(std::move(frame)), mix_(std::move(mix)), column_(column), family_(std::move(family)) {}
  [[nodiscard]] int dim() const override { return frame_.front().dim(); }
  [[nodiscard]] Interval domain() const override { return {mix_->front(), mix_->back()}; }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return family_; }
  [[nodiscard]] int max_order() const override {
    int order = 3;
    for (const auto& x : frame_) order = std::min(order, x.max_order());
    return order;
  }
  [[nodiscard]] bool interpolated() const override { return true; }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    static constexpr double kBinomial[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    const auto r = static_cast<Eigen::Index>(frame_.size());
    AmbientVector out = AmbientVector::Zero(dim());
    for (int i = 0; i <= order; ++i) {
      const Eigen::VectorXd q = mix_->eval(t, order - i);
      for (Eigen::Index k = 0; k < r; ++k) {
        const double coeff = q(column_ * r + k);  // column-major flattening of Q
        if (coeff != 0.0)
          out += kBinomial[order][i] * coeff * frame_[static_cast<std::size_t>(k)].derivative(t, i);
      }
    }
    return out;
  }

 private:
  std::vector<ParamVectorField> frame_;
  std::shared_ptr<const HermiteSpline> mix_;
  Eigen::Index column_;
  std::string family_;
};

inline Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

/// Nearest orthogonal matrix (polar factor).
inline Eigen::MatrixXd polar_orthogonal(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace detail

inline std::shared_ptr<const ArclengthMap> make_arclength_map(const ParamVectorField& f, Interval interval,
                                                              const TolerancePolicy& tol = {}) {
  return std::make_shared<const ArclengthMap>(f, interval, tol);
}

/// Field composed with the inverse arclength function of `map`.
inline ParamVectorField compose(const ParamVectorField& f, const std::shared_ptr<const ArclengthMap>& map) {
  return ParamVectorField(std::make_shared<detail::ReparamRep>(f, map));
}

/// Unit-speed version of f over [0, L]; same image as f over `interval`.
inline ParamVectorField arclength_reparametrize(const ParamVectorField& f, Interval interval,
                                                const TolerancePolicy& tol = {}) {
  return compose(f, make_arclength_map(f, interval, tol));
}

/// Orthonormalizes fields pointwise on the grid (Gram-Schmidt order: output k lies in the
/// span of inputs 1..k) and interpolates the result with cubic Hermite splines whose node
/// slopes are the exact derivatives of the QR factor.
inline std::vector<ParamVectorField> gram_schmidt_frame(const std::vector<ParamVectorField>& fields,
                                                        const std::vector<double>& grid,
                                                        const TolerancePolicy& tol = {}) {
  if (fields.empty()) return {};
  if (grid.size() < 2) fail(ErrorKind::input, "gram_schmidt_frame needs at least two grid points");
  const int dim = fields.front().dim();
  const auto r = static_cast<Eigen::Index>(fields.size());
  if (r > dim) fail(ErrorKind::degeneracy, "more frame fields than ambient dimensions");
  std::vector<std::vector<Eigen::VectorXd>> values(fields.size()), slopes(fields.size());
  for (double t : grid) {
    Eigen::MatrixXd f(dim, r), df(dim, r);
    for (Eigen::Index j = 0; j < r; ++j) {
      f.col(j) = fields[static_cast<std::size_t>(j)].eval(t, 0);
      df.col(j) = fields[static_cast<std::size_t>(j)].eval(t, 1);
    }
    if (rank_info(VectorList::from_columns(f), tol).rank < r)
      fail(ErrorKind::degeneracy, "frame fields are linearly dependent", t);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(f);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, r);
    Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < r; ++k)
      if (rr(k, k) < 0) {
        q.col(k) *= -1.0;
        rr.row(k) *= -1.0;
      }
    const Eigen::MatrixXd rinv = rr.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r, r));
    const Eigen::MatrixXd c = q.transpose() * df * rinv;
    Eigen::MatrixXd lower = c.triangularView<Eigen::StrictlyLower>();
    const Eigen::MatrixXd dq = q * (lower - lower.transpose()) +
                               (Eigen::MatrixXd::Identity(dim, dim) - q * q.transpose()) * df * rinv;
    for (Eigen::Index j = 0; j < r; ++j) {
      values[static_cast<std::size_t>(j)].push_back(q.col(j));
      slopes[static_cast<std::size_t>(j)].push_back(dq.col(j));
    }
  }
  std::vector<ParamVectorField> out;
  for (std::size_t j = 0; j < fields.size(); ++j)
    out.push_back(ParamVectorField::spline("gram_schmidt", HermiteSpline(grid, values[j], slopes[j])));
  return out;
}

/// Frame E = X Q(t) spanning the same distribution as fc.frame with no tangential
/// derivative: Q' = -(X^T X') Q, integrated by classical RK4 on the grid with
/// re-orthonormalization after every step.
inline std::vector<ParamVectorField> parallel_transport_frame(const FramedCurve& fc,
                                                              const std::vector<double>& grid,
                                                              int substeps = 4) {
  if (grid.size() < 2) fail(ErrorKind::input, "parallel transport needs at least two grid points");
  const auto r = static_cast<Eigen::Index>(fc.frame.size());
  auto omega = [&](double t) -> Eigen::MatrixXd {
    const Eigen::MatrixXd x = fc.frame_matrix(t, 0);
    const Eigen::MatrixXd dx = fc.frame_matrix(t, 1);
    return x.transpose() * dx;
  };
  auto rhs = [&](double t, const Eigen::MatrixXd& q) -> Eigen::MatrixXd { return -omega(t) * q; };

  std::vector<Eigen::VectorXd> values, slopes;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(r, r);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      const double h = (grid[i] - grid[i - 1]) / substeps;
      double t = grid[i - 1];
      for (int s = 0; s < substeps; ++s) {
        const Eigen::MatrixXd k1 = rhs(t, q);
        const Eigen::MatrixXd k2 = rhs(t + 0.5 * h, q + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(t + 0.5 * h, q + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(t + h, q + h * k3);
        q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
      }
      if (!q.allFinite()) fail(ErrorKind::numeric, "transport integration diverged", grid[i]);
      q = detail::polar_orthogonal(q);
    }
    values.push_back(detail::flatten(q));
    slopes.push_back(detail::flatten(rhs(grid[i], q)));
  }
  auto mix = std::make_shared<const HermiteSpline>(grid, std::move(values), std::move(slopes));
  std::vector<ParamVectorField> out;
  for (Eigen::Index j = 0; j < r; ++j)
    out.emplace_back(std::make_shared<detail::FrameMixRep>(fc.frame, mix, static_cast<int>(j), "parallel_transport"));
  return out;
}

/// Frame X R(t) for sampled orthogonal matrices R_i (natural cubic interpolation).
inline std::vector<ParamVectorField> rotate_frame(const std::vector<ParamVectorField>& frame,
                                                  const std::vector<double>& grid,
                                                  const std::vector<Eigen::MatrixXd>& rotations,
                                                  const std::string& family) {
  std::vector<Eigen::VectorXd> values;
  for (const auto& rot : rotations) values.push_back(detail::flatten(rot));
  auto slopes = HermiteSpline::natural_slopes(grid, values);
  auto mix = std::make_shared<const HermiteSpline>(grid, std::move(values), std::move(slopes));
  std::vector<ParamVectorField> out;
  for (std::size_t j = 0; j < frame.size(); ++j)
    out.emplace_back(std::make_shared<detail::FrameMixRep>(frame, mix, static_cast<int>(j), family));
  return out;
}

}  // namespace ruled
