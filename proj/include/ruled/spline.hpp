#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ruled/error.hpp"

namespace ruled {

/// Piecewise cubic Hermite interpolant of a vector-valued function. Each node carries
/// a value and a first derivative; the result is C^1, and derivatives of order up to 3
/// are those of the local cubic.
class HermiteSpline {
 public:
  HermiteSpline() = default;

  HermiteSpline(std::vector<double> nodes, std::vector<Eigen::VectorXd> values,
                std::vector<Eigen::VectorXd> slopes)
      : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes)) {
    if (nodes_.size() < 2) fail(ErrorKind::input, "spline needs at least two nodes");
    if (values_.size() != nodes_.size() || slopes_.size() != nodes_.size())
      fail(ErrorKind::input, "spline node/value/slope counts differ");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1])) fail(ErrorKind::input, "spline nodes must increase strictly");
    dim_ = static_cast<int>(values_.front().size());
  }

  /// Slopes at the nodes from the derivative of the degree-(points-1) Lagrange interpolant
  /// through the nearest `points` nodes (centered where possible).
  static std::vector<Eigen::VectorXd> local_slopes(const std::vector<double>& x, const std::vector<Eigen::VectorXd>& y,
                                                   std::size_t points = 5) {
    const std::size_t n = x.size();
    if (n < 2) fail(ErrorKind::input, "slopes need at least two nodes");
    points = std::min(points, n);
    std::vector<Eigen::VectorXd> slopes(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t first = std::min(i >= points / 2 ? i - points / 2 : 0, n - points);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(y[i].size());
      for (std::size_t j = first; j < first + points; ++j) {
        if (j == i) {
          double w = 0.0;
          for (std::size_t k = first; k < first + points; ++k)
            if (k != i) w += 1.0 / (x[i] - x[k]);
          d += w * y[i];
        } else {
          double w = 1.0 / (x[j] - x[i]);
          for (std::size_t k = first; k < first + points; ++k)
            if (k != i && k != j) w *= (x[i] - x[k]) / (x[j] - x[k]);
          d += w * y[j];
        }
      }
      slopes[i] = d;
    }
    return slopes;
  }

  /// Slopes of the natural cubic spline through the values (second derivative zero at
  /// both ends). For sampled data with no derivative information.
  static std::vector<Eigen::VectorXd> natural_slopes(const std::vector<double>& x,
                                                     const std::vector<Eigen::VectorXd>& y) {
    const std::size_t n = x.size();
    if (n < 2) fail(ErrorKind::input, "natural spline needs at least two nodes");
    // Tridiagonal system for the slopes, solved by the Thomas algorithm.
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);
    std::vector<Eigen::VectorXd> rhs(n);
    auto h = [&](std::size_t i) { return x[i + 1] - x[i]; };
    diag[0] = 2.0 / h(0);
    sup[0] = 1.0 / h(0);
    rhs[0] = 3.0 * (y[1] - y[0]) / (h(0) * h(0));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sub[i] = 1.0 / h(i - 1);
      diag[i] = 2.0 / h(i - 1) + 2.0 / h(i);
      sup[i] = 1.0 / h(i);
      rhs[i] = 3.0 * ((y[i] - y[i - 1]) / (h(i - 1) * h(i - 1)) + (y[i + 1] - y[i]) / (h(i) * h(i)));
    }
    sub[n - 1] = 1.0 / h(n - 2);
    diag[n - 1] = 2.0 / h(n - 2);
    rhs[n - 1] = 3.0 * (y[n - 1] - y[n - 2]) / (h(n - 2) * h(n - 2));
    for (std::size_t i = 1; i < n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    std::vector<Eigen::VectorXd> slopes(n);
    slopes[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) slopes[i] = (rhs[i] - sup[i] * slopes[i + 1]) / diag[i];
    return slopes;
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double front() const { return nodes_.front(); }
  [[nodiscard]] double back() const { return nodes_.back(); }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<Eigen::VectorXd>& values() const noexcept { return values_; }

  /// order-th derivative at t; t is clamped to the node range (callers check domains).
  [[nodiscard]] Eigen::VectorXd eval(double t, int order) const {
    if (order < 0 || order > 3) {
      if (order > 3) return Eigen::VectorXd::Zero(dim_);
      fail(ErrorKind::input, "negative derivative order");
    }
    t = std::clamp(t, nodes_.front(), nodes_.back());
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, nodes_.size() - 1) - 1;
    const double h = nodes_[i + 1] - nodes_[i];
    const double s = (t - nodes_[i]) / h;
    const Eigen::VectorXd& p0 = values_[i];
    const Eigen::VectorXd& p1 = values_[i + 1];
    const Eigen::VectorXd m0 = slopes_[i] * h;
    const Eigen::VectorXd m1 = slopes_[i + 1] * h;
    // Basis polynomials in s and their s-derivatives.
    double h00, h10, h01, h11;
    switch (order) {
      case 0:
        h00 = 2 * s * s * s - 3 * s * s + 1;
        h10 = s * s * s - 2 * s * s + s;
        h01 = -2 * s * s * s + 3 * s * s;
        h11 = s * s * s - s * s;
        break;
      case 1:
        h00 = 6 * s * s - 6 * s;
        h10 = 3 * s * s - 4 * s + 1;
        h01 = -6 * s * s + 6 * s;
        h11 = 3 * s * s - 2 * s;
        break;
      case 2:
        h00 = 12 * s - 6;
        h10 = 6 * s - 4;
        h01 = -12 * s + 6;
        h11 = 6 * s - 2;
        break;
      default:
        h00 = 12;
        h10 = 6;
        h01 = -12;
        h11 = 6;
        break;
    }
    const double scale = std::pow(h, -order);
    return scale * (h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1);
  }

 private:
  std::vector<double> nodes_;
  std::vector<Eigen::VectorXd> values_;
  std::vector<Eigen::VectorXd> slopes_;
  int dim_ = 0;
};

}  // namespace ruled
