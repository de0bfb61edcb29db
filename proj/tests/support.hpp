#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "ruled/ruled.hpp"

namespace ruled::testing {

inline constexpr double kPi = std::numbers::pi;

inline RuledPatch builtin_patch(const std::string& name, int t_samples = 60, double u_extent = 2.0) {
  FramedCurve fc = builtin::make_patch(name);
  return {fc, SampleGrid::uniform(fc.interval, t_samples, u_extent, 5), TolerancePolicy{}};
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Runs `body` and checks that it throws ruled::Error of the given kind.
template <typename Body>
::testing::AssertionResult throws_kind(Body&& body, ErrorKind kind) {
  try {
    body();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "wrong kind: " << e.what();
  }
  return ::testing::AssertionFailure() << "no exception";
}

/// Frame rotating inside span{(cos t, sin t, 0, 0), e4} with directrix t e3 in R^4 (m = 3).
/// rho X_1 vanishes at t = pi and rho X_2 at t = 0 and 2 pi, so only a rotation pivots it.
inline FramedCurve rotating_pivot_fixture() {
  auto coord = [](double c, std::vector<double> cs, std::vector<double> ss) {
    const std::size_t n = std::max(cs.size(), ss.size());
    cs.resize(n, 0.0);
    ss.resize(n, 0.0);
    return FourierCoordinate{c, std::move(cs), std::move(ss), 0.5};
  };
  // cos(t/2) cos t = (cos(t/2) + cos(3t/2)) / 2, cos(t/2) sin t = (sin(3t/2) + sin(t/2)) / 2.
  auto x1 = ParamVectorField::fourier({coord(0, {0.5, 0, 0.5}, {}), coord(0, {}, {0.5, 0, 0.5}),
                                       coord(0, {}, {}), coord(0, {}, {1.0})});
  // -sin(t/2) cos t = (sin(t/2) - sin(3t/2)) / 2, -sin(t/2) sin t = (cos(3t/2) - cos(t/2)) / 2.
  auto x2 = ParamVectorField::fourier({coord(0, {}, {0.5, 0, -0.5}), coord(0, {-0.5, 0, 0.5}, {}),
                                       coord(0, {}, {}), coord(0, {1.0}, {})});
  FramedCurve fc;
  fc.dim = 4;
  fc.m = 3;
  fc.directrix = ParamVectorField::polynomial({{0}, {0}, {0, 1}, {0}});
  fc.frame = {x1, x2};
  fc.interval = {0.0, 2 * kPi};
  return fc;
}

}  // namespace ruled::testing
