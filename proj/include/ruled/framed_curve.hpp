#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/field.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/tolerance.hpp"

namespace ruled {

/// Sampling window of a ruled patch: t samples along the directrix and a truncated
/// cube [-u_extent, u_extent]^(m-1) of ruling coordinates.
struct SampleGrid {
  std::vector<double> t_samples;
  double u_extent = 2.0;
  int u_samples_per_axis = 9;

  static SampleGrid uniform(Interval interval, int count, double u_extent = 2.0, int u_per_axis = 9) {
    if (count < 3) fail(ErrorKind::input, "a sample grid needs at least 3 t samples");
    SampleGrid g;
    g.u_extent = u_extent;
    g.u_samples_per_axis = u_per_axis;
    g.t_samples.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      g.t_samples[static_cast<std::size_t>(i)] =
          interval.lo + interval.length() * static_cast<double>(i) / static_cast<double>(count - 1);
    g.t_samples.back() = interval.hi;
    return g;
  }

  void validate() const {
    if (t_samples.size() < 3) fail(ErrorKind::validation, "sample grid needs at least 3 t samples");
    for (std::size_t i = 1; i < t_samples.size(); ++i)
      if (!(t_samples[i] > t_samples[i - 1]))
        fail(ErrorKind::validation, "t samples must be strictly increasing", t_samples[i]);
    if (!(u_extent > 0.0)) fail(ErrorKind::validation, "u_extent must be positive");
    if (u_samples_per_axis < 1) fail(ErrorKind::validation, "u_samples_per_axis must be positive");
  }

  [[nodiscard]] double u_spacing() const {
    return u_samples_per_axis > 1 ? 2.0 * u_extent / static_cast<double>(u_samples_per_axis - 1)
                                  : 2.0 * u_extent;
  }

  /// Axis samples: uniform in [-u_extent, u_extent] (a single sample sits at 0).
  [[nodiscard]] std::vector<double> u_axis() const {
    if (u_samples_per_axis == 1) return {0.0};
    std::vector<double> axis(static_cast<std::size_t>(u_samples_per_axis));
    for (int i = 0; i < u_samples_per_axis; ++i)
      axis[static_cast<std::size_t>(i)] = -u_extent + u_spacing() * static_cast<double>(i);
    return axis;
  }

  /// Tensor grid of `count` ruling coordinates (count may be 0: one empty point).
  [[nodiscard]] std::vector<Eigen::VectorXd> u_points(int count) const {
    std::vector<Eigen::VectorXd> points{Eigen::VectorXd(0)};
    const auto axis = u_axis();
    for (int c = 0; c < count; ++c) {
      std::vector<Eigen::VectorXd> next;
      next.reserve(points.size() * axis.size());
      for (const auto& p : points)
        for (double a : axis) {
          Eigen::VectorXd q(p.size() + 1);
          q.head(p.size()) = p;
          q(p.size()) = a;
          next.push_back(std::move(q));
        }
      points = std::move(next);
    }
    return points;
  }

  /// Same window restricted to t samples [first, last].
  [[nodiscard]] SampleGrid slice(std::size_t first, std::size_t last) const {
    SampleGrid g = *this;
    g.t_samples.assign(t_samples.begin() + static_cast<std::ptrdiff_t>(first),
                       t_samples.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    return g;
  }
};

/// Directrix (unit speed) and orthonormal ruling frame X_1..X_{m-1} over an interval.
struct FramedCurve {
  int dim = 0;  // m + n
  int m = 0;    // submanifold dimension
  ParamVectorField directrix;
  std::vector<ParamVectorField> frame;
  Interval interval{0.0, 1.0};

  [[nodiscard]] int frame_size() const { return m - 1; }
  [[nodiscard]] int codim() const { return dim - m; }

  [[nodiscard]] VectorList frame_at(double t, int order = 0) const {
    VectorList out(dim);
    for (const auto& x : frame) out.push_back(x.eval(t, order));
    return out;
  }

  [[nodiscard]] Eigen::MatrixXd frame_matrix(double t, int order = 0) const {
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(frame.size()));
    for (std::size_t j = 0; j < frame.size(); ++j)
      out.col(static_cast<Eigen::Index>(j)) = frame[j].derivative(t, order);
    return out;
  }

  void check_parameter(double t) const {
    if (!interval.contains(t, domain_slack(t)))
      fail(ErrorKind::domain, "parameter outside the curve interval", t);
  }

  /// Structural checks: dimensions, counts, interval.
  void validate_structure() const {
    if (m < 2 || m > dim) fail(ErrorKind::validation, "need 2 <= m <= ambient dimension");
    if (!directrix.valid() || directrix.dim() != dim)
      fail(ErrorKind::validation, "directrix dimension does not match the ambient dimension");
    if (static_cast<int>(frame.size()) != m - 1)
      fail(ErrorKind::validation, "frame must have m-1 fields");
    for (const auto& x : frame)
      if (!x.valid() || x.dim() != dim)
        fail(ErrorKind::validation, "frame field dimension does not match the ambient dimension");
    if (!(interval.hi > interval.lo)) fail(ErrorKind::validation, "empty parameter interval");
  }

  /// max over samples of | |gamma'| - 1 |.
  [[nodiscard]] double speed_defect(const std::vector<double>& ts) const {
    double worst = 0.0;
    for (double t : ts) worst = std::max(worst, std::abs(directrix.eval(t, 1).norm() - 1.0));
    return worst;
  }

  /// max over samples of the max-norm of Gram(frame) - I.
  [[nodiscard]] double orthonormality_defect(const std::vector<double>& ts) const {
    double worst = 0.0;
    for (double t : ts) {
      const Eigen::MatrixXd x = frame_matrix(t);
      const Eigen::MatrixXd g = x.transpose() * x;
      worst = std::max(worst, (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
    }
    return worst;
  }

  /// Full validation on the sampled parameters.
  void validate(const std::vector<double>& ts, const TolerancePolicy& tol) const {
    validate_structure();
    for (double t : ts) {
      check_parameter(t);
      if (std::abs(directrix.eval(t, 1).norm() - 1.0) > tol.derivative_check_tol)
        fail(ErrorKind::validation, "directrix is not unit speed", t);
      const Eigen::MatrixXd x = frame_matrix(t);
      const Eigen::MatrixXd g = x.transpose() * x;
      if ((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > tol.derivative_check_tol)
        fail(ErrorKind::frame, "frame is not orthonormal", t);
    }
  }
};

}  // namespace ruled
