#include "support.hpp"

namespace ruled {
namespace {

using testing::vec;

TEST(Multilinear, WedgeNormOfOrthonormalSetIsOne) {
  VectorList vs(3, {unit_vector(3, 0), unit_vector(3, 2)});
  EXPECT_NEAR(wedge_norm(vs), 1.0, 1e-15);
}

TEST(Multilinear, WedgeNormIsAreaOfParallelogram) {
  VectorList vs(3, {vec({2, 0, 0}), vec({1, 3, 0})});
  EXPECT_NEAR(wedge_norm(vs), 6.0, 1e-13);
}

TEST(Multilinear, WedgeNormVanishesOnDependentVectors) {
  VectorList vs(4, {vec({1, 2, 3, 4}), vec({2, 4, 6, 8}), vec({0, 1, 0, 0})});
  EXPECT_LT(wedge_norm(vs), 1e-12);
}

TEST(Multilinear, WedgeOfMoreVectorsThanDimensionIsRejected) {
  VectorList vs(2, {vec({1, 0}), vec({0, 1}), vec({1, 1})});
  EXPECT_TRUE(testing::throws_kind([&] { (void)wedge_norm(vs); }, ErrorKind::input));
}

TEST(Multilinear, GramMatrixMatchesInnerProducts) {
  VectorList vs(3, {vec({1, 2, 0}), vec({0, 1, 1})});
  const Eigen::MatrixXd g = gram_matrix(vs);
  EXPECT_DOUBLE_EQ(g(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(g(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(g(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(g(1, 1), 2.0);
}

TEST(Multilinear, DimensionMismatchIsRejected) {
  VectorList vs(3);
  EXPECT_TRUE(testing::throws_kind([&] { vs.push_back(vec({1, 2})); }, ErrorKind::input));
}

TEST(Multilinear, RankUsesRelativeCutoff) {
  TolerancePolicy tol;
  VectorList vs(3, {vec({1, 0, 0}), vec({0, 1e-10, 0})});
  const RankInfo info = rank_info(vs, tol);
  EXPECT_EQ(info.rank, 1);
  VectorList vs2(3, {vec({1, 0, 0}), vec({0, 1e-6, 0})});
  EXPECT_EQ(numerical_rank(vs2, tol), 2);
}

TEST(Multilinear, RankFlagsBorderlineValues) {
  TolerancePolicy tol;
  VectorList vs(3, {vec({1, 0, 0}), vec({0, 5e-8, 0})});
  const RankInfo info = rank_info(vs, tol);
  EXPECT_EQ(info.rank, 2);
  EXPECT_TRUE(info.borderline);
  VectorList clear(3, {vec({1, 0, 0}), vec({0, 1e-3, 0})});
  EXPECT_FALSE(rank_info(clear, tol).borderline);
}

TEST(Multilinear, RankOfZeroVectorsIsZero) {
  VectorList vs(3, {vec({0, 0, 0}), vec({1e-12, 0, 0})});
  EXPECT_EQ(numerical_rank(vs, TolerancePolicy{}), 0);
}

TEST(Multilinear, ProjectOrthogonalRemovesSpanComponent) {
  VectorList basis(3, {vec({1, 1, 0})});
  const AmbientVector p = project_orthogonal(vec({1, 0, 2}), basis, TolerancePolicy{});
  EXPECT_NEAR(p.dot(vec({1, 1, 0})), 0.0, 1e-15);
  EXPECT_NEAR((p - vec({0.5, -0.5, 2})).norm(), 0.0, 1e-15);
}

TEST(Multilinear, SmallestSingularValue) {
  VectorList vs(3, {vec({3, 0, 0}), vec({0, 0.25, 0})});
  EXPECT_NEAR(smallest_singular_value(vs), 0.25, 1e-15);
}

}  // namespace
}  // namespace ruled
