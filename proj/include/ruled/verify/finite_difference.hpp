#pragma once

// Finite-difference oracles. Used only to cross-check analytic derivatives in tests and
// in the self-test; no analysis path depends on them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ruled/field.hpp"

namespace ruled::verify {

/// Central difference of f at t with one Richardson step: error O(h^4).
inline Eigen::VectorXd richardson_derivative(const std::function<Eigen::VectorXd(double)>& f, double t,
                                             double h = 1e-3) {
  auto central = [&](double step) -> Eigen::VectorXd { return (f(t + step) - f(t - step)) / (2.0 * step); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

struct DerivativeCheck {
  std::string family;
  int order = 0;  // analytic derivative order compared against d/dt of order - 1
  double max_error = 0.0;
  double worst_t = 0.0;
  int samples = 0;
};

/// Compares derivative(t, k) with the difference quotient of derivative(t, k - 1) for
/// k = 1..max_order at `samples` random parameters drawn inside `window` (shrunk by the
/// stencil, and kept clear of `breakpoints` where a derivative jumps). Errors are relative
/// to max(1, |analytic|).
inline std::vector<DerivativeCheck> check_field_derivatives(const ParamVectorField& f, Interval window,
                                                            int max_order, int samples, std::mt19937_64& rng,
                                                            const std::vector<double>& breakpoints = {},
                                                            double h = 1e-3) {
  const Interval dom = f.domain();
  const double lo = std::max(window.lo, dom.lo) + h;
  const double hi = std::min(window.hi, dom.hi) - h;
  if (!(hi > lo)) fail(ErrorKind::input, "finite-difference window is empty");
  std::uniform_real_distribution<double> draw(lo, hi);
  std::vector<double> ts(static_cast<std::size_t>(samples));
  auto near_break = [&](double t) {
    return std::any_of(breakpoints.begin(), breakpoints.end(), [&](double b) { return std::abs(t - b) < 2.0 * h; });
  };
  for (auto& t : ts)
    do t = draw(rng);
    while (near_break(t));
  std::vector<DerivativeCheck> out;
  for (int k = 1; k <= std::min(max_order, f.max_order()); ++k) {
    DerivativeCheck c;
    c.family = f.family();
    c.order = k;
    c.samples = samples;
    for (double t : ts) {
      const Eigen::VectorXd analytic = f.derivative(t, k);
      const Eigen::VectorXd numeric = richardson_derivative([&](double s) { return f.derivative(s, k - 1); }, t, h);
      const double err = (analytic - numeric).norm() / std::max(1.0, analytic.norm());
      if (err > c.max_error) {
        c.max_error = err;
        c.worst_t = t;
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace ruled::verify
