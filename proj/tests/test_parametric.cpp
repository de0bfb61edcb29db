#include "support.hpp"

namespace ruled {
namespace {

using testing::kPi;
using testing::vec;

ParamVectorField radius_two_circle() {
  return ParamVectorField::fourier({{0.0, {2.0}, {0.0}, 1.0}, {0.0, {0.0}, {2.0}, 1.0}, {1.0, {}, {}, 1.0}});
}

TEST(Arclength, LengthAndInverseOfScaledCircle) {
  const auto map = make_arclength_map(radius_two_circle(), {0.0, 2 * kPi});
  EXPECT_NEAR(map->length(), 4 * kPi, 1e-12);
  for (double s : {0.0, 1.0, 5.5, 4 * kPi}) EXPECT_NEAR(map->t_at(s), s / 2, 1e-10);
  const auto jet = map->jet(3.0);
  EXPECT_NEAR(jet.d1, 0.5, 1e-12);
  EXPECT_NEAR(jet.d2, 0.0, 1e-12);
}

TEST(Arclength, ReparametrizedCurveHasUnitSpeed) {
  const auto f = arclength_reparametrize(radius_two_circle(), {0.0, 2 * kPi});
  EXPECT_NEAR(f.domain().hi, 4 * kPi, 1e-12);
  for (double s : {0.3, 2.0, 7.0, 12.0}) {
    EXPECT_NEAR(f.eval(s, 1).norm(), 1.0, 1e-9);
    EXPECT_NEAR(f.eval(s, 1).dot(f.eval(s, 2)), 0.0, 1e-8);
    EXPECT_NEAR(f.eval(s, 2).norm(), 0.5, 1e-8);  // curvature of a radius-2 circle
  }
}

TEST(Arclength, NonCubicCurveReparametrizes) {
  // (t, t^2): speed sqrt(1 + 4 t^2), not constant.
  const auto f = arclength_reparametrize(ParamVectorField::polynomial({{0, 1}, {0, 0, 1}}), {-1.0, 1.0});
  const double len = std::sqrt(5.0) + 0.5 * std::asinh(2.0);
  EXPECT_NEAR(f.domain().hi, len, 1e-10);
  for (double s : {0.1, 1.0, 2.0}) EXPECT_NEAR(f.eval(s, 1).norm(), 1.0, 1e-8);
}

TEST(Arclength, CurveWithTwoDerivativesReparametrizes) {
  // Axis plus the spliced ruling: only C^2, so the composed field stops at order 2.
  const auto curve = linear_combination({builtin::make_field("helicoid_axis"), builtin::make_field("spliced_rotation")},
                                        {1.0, 0.5});
  const auto f = arclength_reparametrize(curve, {-1.0, 1.0});
  EXPECT_EQ(f.max_order(), 2);
  for (double s : {0.2, 1.5, 2.0}) EXPECT_NEAR(f.eval(s, 1).norm(), 1.0, 1e-8);
}

TEST(Arclength, VanishingSpeedIsRegularityError) {
  const auto cusp = ParamVectorField::polynomial({{0, 0, 1}, {0, 0, 0, 1}});
  EXPECT_TRUE(testing::throws_kind([&] { (void)make_arclength_map(cusp, {-1.0, 1.0}); }, ErrorKind::regularity));
}

TEST(Frames, GramSchmidtOrthonormalizesAndKeepsFlag) {
  const std::vector<ParamVectorField> fields{ParamVectorField::constant(vec({2, 0, 0})),
                                             ParamVectorField::polynomial({{1}, {0, 1}, {1}})};
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-1.0 + 0.05 * i);
  const auto q = gram_schmidt_frame(fields, grid);
  ASSERT_EQ(q.size(), 2u);
  for (double t : {-0.93, 0.0, 0.41}) {
    EXPECT_NEAR(q[0].eval(t).norm(), 1.0, 1e-6);
    EXPECT_NEAR(q[1].eval(t).norm(), 1.0, 1e-6);
    EXPECT_NEAR(q[0].eval(t).dot(q[1].eval(t)), 0.0, 1e-6);
    // Second field is (0, t, 1) / sqrt(1 + t^2) after removing the e1 part.
    const Eigen::VectorXd expect = vec({0, t, 1}) / std::sqrt(1 + t * t);
    EXPECT_NEAR((q[1].eval(t) - expect).norm(), 0.0, 1e-6);
  }
  EXPECT_TRUE(q[0].interpolated());
}

TEST(Frames, GramSchmidtReportsDependentParameter) {
  const std::vector<ParamVectorField> fields{ParamVectorField::constant(vec({1, 0, 0})),
                                             ParamVectorField::polynomial({{1}, {0, 1}, {0}})};
  try {
    (void)gram_schmidt_frame(fields, {0.0, 0.5, 1.0});
    FAIL() << "expected a degeneracy error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
    ASSERT_TRUE(e.parameter().has_value());
    EXPECT_EQ(*e.parameter(), 0.0);
  }
}

TEST(Frames, ParallelTransportRemovesInternalRotation) {
  FramedCurve fc = builtin::make_patch("rotating_frame_cylinder");
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(fc.interval.lo + fc.interval.length() * i / 100.0);
  const auto e = parallel_transport_frame(fc, grid);
  for (double t : {0.5, 2.0, 4.0}) {
    Eigen::MatrixXd x(fc.dim, e.size()), dx(fc.dim, e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
      x.col(static_cast<Eigen::Index>(j)) = e[j].eval(t);
      dx.col(static_cast<Eigen::Index>(j)) = e[j].eval(t, 1);
    }
    // Interpolated between transported nodes, so only spline-accurate.
    EXPECT_NEAR((x.transpose() * x - Eigen::MatrixXd::Identity(x.cols(), x.cols())).norm(), 0.0, 1e-6);
    EXPECT_LT((x.transpose() * dx).norm(), 1e-5);
    // Same span as the original frame.
    const Eigen::MatrixXd orig = fc.frame_matrix(t);
    EXPECT_NEAR((x - orig * (orig.transpose() * x)).norm(), 0.0, 1e-8);
  }
}

}  // namespace
}  // namespace ruled
