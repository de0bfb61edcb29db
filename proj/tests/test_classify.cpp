#include "support.hpp"

namespace ruled {
namespace {

using testing::builtin_patch;

struct ExpectedKind {
  const char* name;
  RegionKind kind;
};

void PrintTo(const ExpectedKind& e, std::ostream* os) { *os << e.name; }

class BuiltinKind : public ::testing::TestWithParam<ExpectedKind> {};

TEST_P(BuiltinKind, SingleRegion) {
  const auto rep = classify_patch(builtin_patch(GetParam().name, 80));
  ASSERT_EQ(rep.regions.size(), 1u);
  EXPECT_EQ(rep.regions[0].kind, GetParam().kind);
  EXPECT_EQ(rep.regions[0].first, 0u);
  EXPECT_EQ(rep.regions[0].last, 79u);
  EXPECT_TRUE(rep.boundary_points.empty());
}

INSTANTIATE_TEST_SUITE_P(
    Corpus, BuiltinKind,
    ::testing::Values(ExpectedKind{"cylinder_helix_r4", RegionKind::cylindrical},
                      ExpectedKind{"plane", RegionKind::cylindrical},
                      ExpectedKind{"rotating_frame_cylinder", RegionKind::cylindrical},
                      ExpectedKind{"circular_cone", RegionKind::conical},
                      ExpectedKind{"tangent_developable_helix", RegionKind::tangent},
                      ExpectedKind{"helix_product_r4", RegionKind::tangent},
                      ExpectedKind{"helicoid", RegionKind::non_rank_one},
                      ExpectedKind{"rotation_r5", RegionKind::non_rank_one}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Classify, ConeEvidence) {
  const auto rep = classify_patch(builtin_patch("circular_cone", 80));
  const Region& r = rep.regions.front();
  EXPECT_TRUE(r.rank_one);
  ASSERT_TRUE(r.singular_fraction.has_value());
  EXPECT_GE(*r.singular_fraction, kSingularCoverage);
  ASSERT_TRUE(r.off_sheet_regular.has_value());
  EXPECT_EQ(*r.off_sheet_regular, *r.off_sheet_checked);
  for (int k : r.striction_ranks) EXPECT_EQ(k, 0);
  EXPECT_TRUE(rep.is_rank_one);
  EXPECT_FALSE(rep.is_cylinder);
}

TEST(Classify, PlaneIsCylinderButNotRankOne) {
  const auto rep = classify_patch(builtin_patch("plane", 40));
  EXPECT_TRUE(rep.is_cylinder);
  EXPECT_FALSE(rep.is_rank_one);  // planar points only
  EXPECT_GT(rep.regions.front().planar_count, 0u);
}

TEST(Classify, SplicedRotationSplitsAtTheSplice) {
  const auto rep = classify_patch(builtin_patch("spliced_rotation", 201));
  ASSERT_EQ(rep.regions.size(), 2u);
  EXPECT_EQ(rep.regions[0].kind, RegionKind::cylindrical);
  EXPECT_EQ(rep.regions[1].kind, RegionKind::non_rank_one);
  EXPECT_LE(rep.regions[0].t_end, 0.0);
  EXPECT_GT(rep.regions[1].t_begin, 0.0);
  for (double t : rep.boundary_points) EXPECT_LT(std::abs(t), 0.5);
  EXPECT_FALSE(rep.is_rank_one);
  EXPECT_FALSE(rep.is_cylinder);
}

TEST(Classify, RegionsAreDisjointAndOrdered) {
  const auto rep = classify_patch(builtin_patch("spliced_rotation", 201));
  for (std::size_t i = 1; i < rep.regions.size(); ++i) EXPECT_GT(rep.regions[i].first, rep.regions[i - 1].last);
}

TEST(Classify, Deterministic) {
  const auto p = builtin_patch("helix_product_r4", 50);
  const auto a = classify_patch(p, 5);
  const auto b = classify_patch(p, 5);
  ASSERT_EQ(a.regions.size(), b.regions.size());
  EXPECT_EQ(a.regions[0].off_sheet_regular, b.regions[0].off_sheet_regular);
  EXPECT_EQ(a.regions[0].striction_ranks, b.regions[0].striction_ranks);
}

TEST(Converse, AgreesOnDegreeOneCorpus) {
  for (const char* name : {"circular_cone", "tangent_developable_helix", "helicoid", "helix_product_r4"}) {
    const ConverseResult c = converse_check(builtin_patch(name, 60));
    EXPECT_TRUE(c.agree) << name;
    EXPECT_EQ(c.rank_one, c.singular_throughout) << name;
  }
  EXPECT_FALSE(converse_check(builtin_patch("helicoid", 60)).rank_one);
}

TEST(Converse, RequiresDegreeOne) {
  EXPECT_TRUE(testing::throws_kind([] { (void)converse_check(builtin_patch("plane", 20)); }, ErrorKind::input));
  EXPECT_TRUE(
      testing::throws_kind([] { (void)converse_check(builtin_patch("rotation_r5", 20)); }, ErrorKind::input));
}

TEST(Classify, KindNames) {
  EXPECT_STREQ(to_string(RegionKind::non_rank_one), "non_rank_one");
  EXPECT_STREQ(to_string(RegionKind::undetermined), "undetermined");
}

}  // namespace
}  // namespace ruled
