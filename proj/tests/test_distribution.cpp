#include "support.hpp"

namespace ruled {
namespace {

using testing::builtin_patch;
using testing::kPi;

struct ExpectedDegree {
  const char* name;
  int degree;
};

void PrintTo(const ExpectedDegree& e, std::ostream* os) { *os << e.name; }

class BuiltinDegree : public ::testing::TestWithParam<ExpectedDegree> {};

TEST_P(BuiltinDegree, ConstantDegreeAndBound) {
  const auto p = builtin_patch(GetParam().name);
  const DegreeProfile prof = degree_profile(p.fc, p.grid, p.tol);
  ASSERT_TRUE(prof.constant_degree.has_value());
  EXPECT_EQ(*prof.constant_degree, GetParam().degree);
  EXPECT_TRUE(prof.borderline_samples.empty());
  const int n = p.dim() - p.m();
  for (const auto& s : prof.samples) EXPECT_LE(s.degree, std::min(p.m() - 1, n + 1));
  EXPECT_EQ(prof.cylindrical, GetParam().degree == 0);
  EXPECT_EQ(prof.noncylindrical, GetParam().degree > 0);
}

INSTANTIATE_TEST_SUITE_P(Corpus, BuiltinDegree,
                         ::testing::Values(ExpectedDegree{"cylinder_helix_r4", 0}, ExpectedDegree{"plane", 0},
                                           ExpectedDegree{"circular_cone", 1},
                                           ExpectedDegree{"tangent_developable_helix", 1},
                                           ExpectedDegree{"helicoid", 1}, ExpectedDegree{"rotation_r5", 2},
                                           ExpectedDegree{"helix_product_r4", 1},
                                           ExpectedDegree{"rotating_frame_cylinder", 0}),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(Distribution, RhoIsOrthogonalToFrame) {
  const auto p = builtin_patch("rotation_r5");
  for (double t : {0.2, 1.7, 5.0}) {
    const RhoSample s = rho_at(p.fc, t);
    for (const auto& r : s.rho_vectors)
      for (const auto& x : p.fc.frame) EXPECT_NEAR(r.dot(x.eval(t)), 0.0, 1e-14);
  }
}

TEST(Distribution, HelicoidRhoIsTheRulingDerivative) {
  const auto p = builtin_patch("helicoid");
  const RhoSample s = rho_at(p.fc, 0.8);
  EXPECT_NEAR((s.rho_vectors[0] - p.fc.frame[0].eval(0.8, 1)).norm(), 0.0, 1e-15);
}

TEST(Distribution, NonOrthonormalFrameIsRejected) {
  auto fc = builtin::make_patch("circular_cone");
  fc.frame[0] = ParamVectorField::constant(testing::vec({2, 0, 0}));
  EXPECT_TRUE(testing::throws_kind([&] { (void)rho_at(fc, 0.0); }, ErrorKind::frame));
}

TEST(Distribution, SplicedRotationHasTwoSegments) {
  const auto p = builtin_patch("spliced_rotation", 201);
  const DegreeProfile prof = degree_profile(p.fc, p.grid, p.tol);
  EXPECT_FALSE(prof.constant_degree.has_value());
  ASSERT_EQ(prof.segments.size(), 2u);
  EXPECT_EQ(prof.segments[0].degree, 0);
  EXPECT_EQ(prof.segments[1].degree, 1);
  EXPECT_LE(prof.segments[0].t_end, 0.0);
  EXPECT_GT(prof.segments[1].t_begin, 0.0);
}

TEST(Pivot, KeepsFrameWhenTailAlreadyWorks) {
  const auto p = builtin_patch("circular_cone");
  const FramedCurve out = pivot_frame(p.fc, p.grid.t_samples, 1);
  EXPECT_EQ(out.frame[0].family(), p.fc.frame[0].family());
}

TEST(Pivot, PermutesWhenAnotherFieldWorks) {
  // helix_product_r4 carries (T, e4); only T moves, so it must come last.
  const auto p = builtin_patch("helix_product_r4");
  const FramedCurve out = pivot_frame(p.fc, p.grid.t_samples, 1);
  for (double t : {0.3, 2.0}) {
    EXPECT_NEAR((out.frame.back().eval(t) - p.fc.frame.front().eval(t)).norm(), 0.0, 1e-15);
    EXPECT_GT(rho_at(out, t).rho_vectors[1].norm(), 0.1);
  }
}

TEST(Pivot, RotatesWhenNoConstantChoiceWorks) {
  const FramedCurve fc = testing::rotating_pivot_fixture();
  std::vector<double> ts;
  for (int i = 0; i <= 120; ++i) ts.push_back(2 * kPi * i / 120.0);
  const DegreeProfile prof = degree_profile(fc, ts);
  ASSERT_TRUE(prof.constant_degree.has_value());
  EXPECT_EQ(*prof.constant_degree, 1);
  // Each original field loses its rho-image somewhere.
  EXPECT_LT(rho_at(fc, kPi).rho_vectors[0].norm(), 1e-12);
  EXPECT_LT(rho_at(fc, 0.0).rho_vectors[1].norm(), 1e-12);

  const FramedCurve out = pivot_frame(fc, ts, 1);
  EXPECT_EQ(out.frame.back().family(), "pivot_rotation");
  for (double t : {0.0, kPi / 2, kPi, 3 * kPi / 2, 2 * kPi}) {
    EXPECT_GT(rho_at(out, t).rho_vectors[1].norm(), 0.5) << "t=" << t;
    const Eigen::MatrixXd x = out.frame_matrix(t);
    const Eigen::MatrixXd orig = fc.frame_matrix(t);
    EXPECT_NEAR((x.transpose() * x - Eigen::MatrixXd::Identity(2, 2)).norm(), 0.0, 1e-8);
    EXPECT_NEAR((x - orig * (orig.transpose() * x)).norm(), 0.0, 1e-10);
  }
}

TEST(Pivot, FailsOnWrongDegree) {
  const auto p = builtin_patch("plane");
  EXPECT_TRUE(testing::throws_kind([&] { (void)pivot_frame(p.fc, p.grid.t_samples, 1); }, ErrorKind::pivot));
}

}  // namespace
}  // namespace ruled
