#include <random>

#include "ruled/verify/finite_difference.hpp"
#include "support.hpp"

namespace ruled {
namespace {

using verify::check_field_derivatives;
using verify::richardson_derivative;

using testing::kPi;
using testing::vec;

TEST(Field, PolynomialDerivatives) {
  // (1 + 2t + 3t^2, t^3)
  auto f = ParamVectorField::polynomial({{1, 2, 3}, {0, 0, 0, 1}});
  EXPECT_EQ(f.dim(), 2);
  EXPECT_EQ(f.kind(), FieldKind::polynomial);
  EXPECT_NEAR((f.eval(2.0) - vec({17, 8})).norm(), 0.0, 1e-13);
  EXPECT_NEAR((f.eval(2.0, 1) - vec({14, 12})).norm(), 0.0, 1e-13);
  EXPECT_NEAR((f.eval(2.0, 2) - vec({6, 12})).norm(), 0.0, 1e-13);
}

TEST(Field, FourierDerivatives) {
  // (cos 2t, 1 + sin 2t)
  auto f = ParamVectorField::fourier({{0.0, {1.0}, {0.0}, 2.0}, {1.0, {0.0}, {1.0}, 2.0}});
  const double t = 0.3;
  EXPECT_NEAR((f.eval(t) - vec({std::cos(2 * t), 1 + std::sin(2 * t)})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.eval(t, 1) - vec({-2 * std::sin(2 * t), 2 * std::cos(2 * t)})).norm(), 0.0, 1e-14);
  EXPECT_NEAR((f.eval(t, 2) - vec({-4 * std::cos(2 * t), -4 * std::sin(2 * t)})).norm(), 0.0, 1e-14);
}

TEST(Field, ConstantFieldHasZeroDerivative) {
  auto f = ParamVectorField::constant(vec({1, 2, 3}));
  EXPECT_EQ(f.eval(5.0), vec({1, 2, 3}));
  EXPECT_EQ(f.eval(5.0, 1).norm(), 0.0);
}

TEST(Field, PublicOrderIsCapped) {
  auto f = builtin::make_field("helix");
  EXPECT_TRUE(testing::throws_kind([&] { (void)f.eval(0.0, 3); }, ErrorKind::input));
  EXPECT_NO_THROW((void)f.derivative(0.0, 3));
}

TEST(Field, NonFiniteCoefficientsAreRejected) {
  EXPECT_TRUE(testing::throws_kind([] { (void)ParamVectorField::polynomial({{std::nan("")}}); },
                                   ErrorKind::input));
}

TEST(Field, UnknownFamilyIsConfigError) {
  EXPECT_TRUE(testing::throws_kind([] { (void)builtin::make_field("no_such_family"); }, ErrorKind::config));
  EXPECT_TRUE(testing::throws_kind([] { (void)builtin::make_patch("no_such_patch"); }, ErrorKind::config));
}

TEST(Field, UnknownParameterIsConfigError) {
  EXPECT_TRUE(testing::throws_kind([] { (void)builtin::make_field("helix", {{"zz", 1.0}}); }, ErrorKind::config));
}

TEST(Field, HelixIsUnitSpeed) {
  auto f = builtin::make_field("helix", {{"a", 2.0}, {"b", 1.0}});
  for (double t : {0.0, 0.7, 3.0}) EXPECT_NEAR(f.eval(t, 1).norm(), 1.0, 1e-14);
}

TEST(Field, SplineOutsideNodesIsDomainError) {
  const std::vector<double> x{0, 1, 2};
  const std::vector<Eigen::VectorXd> y{vec({0}), vec({1}), vec({4})};
  auto f = ParamVectorField::spline("s", HermiteSpline(x, y, HermiteSpline::local_slopes(x, y)));
  EXPECT_NO_THROW((void)f.eval(1.5));
  EXPECT_TRUE(testing::throws_kind([&] { (void)f.eval(2.5); }, ErrorKind::domain));
}

TEST(Field, MismatchedFourierCoefficientsAreRejected) {
  EXPECT_TRUE(testing::throws_kind([] { (void)ParamVectorField::fourier({{0.0, {1.0}, {}, 1.0}}); },
                                   ErrorKind::input));
}

TEST(Field, InterpolatedFlagPropagates) {
  EXPECT_FALSE(builtin::make_field("circle").interpolated());
  const std::vector<double> x{0, 1, 2, 3};
  std::vector<Eigen::VectorXd> y;
  for (double xi : x) y.push_back(vec({xi * xi}));
  auto s = ParamVectorField::spline("square", HermiteSpline(x, y, HermiteSpline::local_slopes(x, y)));
  EXPECT_TRUE(s.interpolated());
}

TEST(Spline, ReproducesCubicPolynomial) {
  std::vector<double> x;
  std::vector<Eigen::VectorXd> y, dy;
  for (int i = 0; i <= 8; ++i) {
    const double t = 0.25 * i;
    x.push_back(t);
    y.push_back(vec({t * t * t - t}));
    dy.push_back(vec({3 * t * t - 1}));
  }
  const HermiteSpline s(x, y, dy);
  for (double t : {0.1, 0.9, 1.33}) {
    EXPECT_NEAR(s.eval(t, 0)(0), t * t * t - t, 1e-13);
    EXPECT_NEAR(s.eval(t, 1)(0), 3 * t * t - 1, 1e-12);
  }
}

TEST(Spline, LocalSlopesAreExactForQuartics) {
  std::vector<double> x;
  std::vector<Eigen::VectorXd> y;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i * i;  // non-uniform nodes
    x.push_back(t);
    y.push_back(vec({std::pow(t, 4) - 2 * t}));
  }
  const auto slopes = HermiteSpline::local_slopes(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(slopes[i](0), 4 * std::pow(x[i], 3) - 2, 1e-8 * (1 + std::pow(x[i], 3)));
}

TEST(FiniteDifference, RichardsonMatchesAnalyticDerivative) {
  auto f = [](double t) { return vec({std::sin(t), std::exp(t)}); };
  const Eigen::VectorXd d = richardson_derivative(f, 0.4);
  EXPECT_NEAR(d(0), std::cos(0.4), 1e-11);
  EXPECT_NEAR(d(1), std::exp(0.4), 1e-11);
}

TEST(FiniteDifference, EveryFieldFamilyMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (const auto& fam : builtin::field_families()) {
    const auto f = fam.make(fam.defaults);
    const bool spliced = fam.name == "spliced_rotation";
    const Interval window = spliced ? Interval{-1.0, 1.0} : Interval{0.0, 2 * kPi};
    const std::vector<double> breaks = spliced ? std::vector<double>{0.0} : std::vector<double>{};
    for (const auto& c : check_field_derivatives(f, window, 3, 20, rng, breaks))
      EXPECT_LT(c.max_error, 1e-7) << fam.name << " order " << c.order << " at t=" << c.worst_t;
  }
}

TEST(FiniteDifference, DetectsAWrongDerivative) {
  // A field whose claimed derivative is off by a factor: the oracle must notice.
  class Wrong final : public detail::FieldRep {
   public:
    int dim() const override { return 1; }
    FieldKind kind() const override { return FieldKind::builtin; }
    std::string family() const override { return "wrong"; }
    int max_order() const override { return 2; }
    AmbientVector derivative(double t, int order) const override {
      if (order == 0) return vec({std::sin(t)});
      if (order == 1) return vec({1.01 * std::cos(t)});
      return vec({-std::sin(t)});
    }
  };
  std::mt19937_64 rng(1);
  const ParamVectorField f(std::make_shared<Wrong>());
  const auto checks = check_field_derivatives(f, {0.0, 1.0}, 2, 10, rng);
  ASSERT_FALSE(checks.empty());
  EXPECT_GT(checks.front().max_error, 1e-3);
}

}  // namespace
}  // namespace ruled
