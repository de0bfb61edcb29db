#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace ruled {
namespace {

namespace fs = std::filesystem;

std::string scene_path(const std::string& name) { return std::string(RULED_SOURCE_DIR) + "/scenes/" + name + ".json"; }

/// Message of the ruled::Error thrown by `body`, or "" if none was thrown.
template <typename Body>
std::string error_message(Body&& body, ErrorKind expected) {
  try {
    body();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), expected) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no exception";
  return "";
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kExplicitCone = R"({
  "name": "explicit",
  "ambient_dim": 3,
  "m": 2,
  "interval": [0, 6.283185307179586],
  "directrix": {"kind": "fourier", "coordinates": [
    {"cos": [1]}, {"sin": [1]}, {"constant": 1}]},
  "frame": [{"kind": "builtin", "family": "cone_ruling"}],
  "grid": {"t_samples": 40}
})";

TEST(SceneParse, SyntaxErrorReportsLineAndColumn) {
  const std::string msg =
      error_message([] { (void)parse_scene_text("{\n  \"name\": ,\n}", "bad.json"); }, ErrorKind::parse);
  EXPECT_NE(msg.find("bad.json:2:11"), std::string::npos) << msg;
}

TEST(SceneValidate, PathsNameTheOffendingKey) {
  struct Case {
    std::string text;
    std::string path;
  };
  const std::vector<Case> cases{
      {R"({"patch": {"builtin": "circular_cone"}, "extra": 1})", "/extra: unknown key"},
      {R"({"patch": {"builtin": "nope"}})", "/patch:"},
      {R"({"patch": {"builtin": "helicoid", "params": {"zz": 1}}})", "/patch:"},
      {R"({"patch": {"builtin": "helicoid"}, "m": 3})", "/m:"},
      {R"({"patch": {"builtin": "helicoid"}, "interval": [1, 0]})", "/interval:"},
      {R"({"patch": {"builtin": "helicoid"}, "grid": {"t_samples": 2}})", "/grid/t_samples:"},
      {R"({"patch": {"builtin": "helicoid"}, "grid": {"u_extent": -1}})", "/grid/u_extent:"},
      {R"({"patch": {"builtin": "helicoid"}, "tolerances": {"rank_rel_tol": 2}})", "/tolerances:"},
      {R"({"patch": {"builtin": "helicoid"}, "seed": -4})", "/seed:"},
      {R"({"ambient_dim": 3, "m": 2, "interval": [0, 1], "directrix": {"kind": "polynomial",
          "coefficients": [[0], [0], [0, 1]]}, "frame": [{"kind": "wavelet"}]})",
       "/frame/0/kind:"},
      {R"({"ambient_dim": 3, "m": 2, "interval": [0, 1], "directrix": {"kind": "polynomial",
          "coefficients": [[0], [0, 1]]}, "frame": [{"kind": "constant", "value": [1, 0, 0]}]})",
       "/directrix:"},
      {R"({"ambient_dim": 3, "m": 3, "interval": [0, 1], "directrix": {"kind": "polynomial",
          "coefficients": [[0], [0], [0, 1]]}, "frame": [{"kind": "constant", "value": [1, 0, 0]}]})",
       "/frame:"},
      {R"({"ambient_dim": 3, "m": 2, "interval": [0, 1], "frame": []})", "/directrix: required key missing"},
  };
  for (const auto& c : cases) {
    const std::string msg = error_message([&] { (void)ingest_text(c.text); }, ErrorKind::validation);
    EXPECT_NE(msg.find(c.path), std::string::npos) << "expected '" << c.path << "' in: " << msg;
  }
}

TEST(SceneIngest, BuiltinDefaultsAreFilled) {
  const IngestResult r = ingest_text(R"({"patch": {"builtin": "circular_cone"}})");
  EXPECT_EQ(r.normalized["grid"]["t_samples"], kDefaultTSamples);
  EXPECT_EQ(r.normalized["patch"]["params"]["r"], 1.0);
  EXPECT_EQ(r.normalized["seed"], kDefaultSeed);
  EXPECT_FALSE(r.reparametrized);
  EXPECT_FALSE(r.orthonormalized);
}

TEST(SceneIngest, OverridesTakePrecedence) {
  SceneOverrides o;
  o.t_samples = 17;
  o.seed = 3;
  o.rank_rel_tol = 1e-6;
  const IngestResult r = ingest_text(R"({"patch": {"builtin": "helicoid"}, "grid": {"t_samples": 50}})", "s", o);
  EXPECT_EQ(r.patch.grid.t_samples.size(), 17u);
  EXPECT_EQ(r.seed, 3u);
  EXPECT_EQ(r.patch.tol.rank_rel_tol, 1e-6);
}

TEST(SceneIngest, ExplicitFieldsMatchBuiltin) {
  const IngestResult r = ingest_text(kExplicitCone);
  const FramedCurve cone = builtin::make_patch("circular_cone");
  for (double t : {0.2, 3.3}) {
    EXPECT_NEAR((r.patch.fc.directrix.eval(t) - cone.directrix.eval(t)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((r.patch.fc.frame[0].eval(t) - cone.frame[0].eval(t)).norm(), 0.0, 1e-15);
  }
}

TEST(SceneIngest, NonUnitSpeedIsReparametrized) {
  const IngestResult r = ingest(scene_path("cone_non_unit_speed"));
  EXPECT_TRUE(r.reparametrized);
  EXPECT_TRUE(r.normalized["provenance"].contains("reparametrization"));
  EXPECT_LT(r.patch.fc.speed_defect(r.patch.grid.t_samples), 1e-7);
}

TEST(SceneIngest, ScaledRulingIsOrthonormalized) {
  const IngestResult r = ingest(scene_path("cone_scaled_ruling"));
  EXPECT_TRUE(r.orthonormalized);
  EXPECT_LT(r.patch.fc.orthonormality_defect(r.patch.grid.t_samples), 1e-7);
}

TEST(SceneIngest, DependentFrameNamesParameter) {
  try {
    (void)ingest(scene_path("dependent_frame"));
    FAIL() << "expected a degeneracy error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
    ASSERT_TRUE(e.parameter().has_value());
    EXPECT_EQ(*e.parameter(), 0.0);
    EXPECT_NE(std::string(e.what()).find("t=0"), std::string::npos);
  }
}

TEST(SceneIngest, NormalizationIsIdempotent) {
  for (const char* name : {"cone_non_unit_speed", "cone_scaled_ruling", "helicoid_explicit", "spliced_rotation"}) {
    const IngestResult first = ingest(scene_path(name));
    const IngestResult second = ingest_text(dump_scene(first.normalized));
    EXPECT_EQ(dump_scene(first.normalized), dump_scene(second.normalized)) << name;
  }
}

TEST(SceneIngest, EveryCorpusSceneParses) {
  for (const auto& entry : fs::directory_iterator(std::string(RULED_SOURCE_DIR) + "/scenes")) {
    if (entry.path().stem() == "dependent_frame") continue;
    EXPECT_NO_THROW((void)ingest(entry.path().string())) << entry.path();
  }
}

TEST(Report, ConeReportContents) {
  SceneOverrides o;
  o.t_samples = 40;
  const Analysis a = analyze(ingest(scene_path("circular_cone"), o));
  const Json j = report_json(a);
  EXPECT_EQ(j["degree_profile"]["constant_degree"], 1);
  EXPECT_EQ(j["classification"]["regions"][0]["kind"], "conical");
  EXPECT_LT(j["classification"]["regions"][0]["apex_spread"].get<double>(), 1e-12);
  EXPECT_TRUE(j["rank_one"]["rank_one"].get<bool>());
  EXPECT_TRUE(j["tangent_stability"]["stable"].get<bool>());
  EXPECT_EQ(j["first_normal"]["violations"], 0);
  ASSERT_EQ(j["striction"].size(), 1u);
  EXPECT_TRUE(j["striction"][0]["equivalent_condition"]["all_agree"].get<bool>());
  EXPECT_LT(j["striction"][0]["directrix_invariance"]["max_deviation"].get<double>(), 1e-8);
  EXPECT_TRUE(j["converse"]["agree"].get<bool>());
}

TEST(Report, CylinderHasNoSheetAndNullConverse) {
  SceneOverrides o;
  o.t_samples = 30;
  const Json j = report_json(analyze(ingest(scene_path("cylinder_helix_r4"), o)));
  EXPECT_TRUE(j["striction"].empty());
  EXPECT_TRUE(j["converse"].is_null());
  EXPECT_TRUE(j["classification"]["regions"][0]["evidence"]["singular_fraction"].is_null());
}

TEST(Report, SplicedRotationAtCoarseGrid) {
  // The t > 0 sheet solves here, so the invariance shift runs on a C^2 ruling.
  SceneOverrides o;
  o.t_samples = 40;
  const Json j = report_json(analyze(ingest(scene_path("spliced_rotation"), o)));
  ASSERT_EQ(j["classification"]["regions"].size(), 2u);
  EXPECT_EQ(j["classification"]["regions"][1]["kind"], "non_rank_one");
}

TEST(Report, ReportIsDeterministic) {
  SceneOverrides o;
  o.t_samples = 30;
  const auto s = ingest(scene_path("helix_product_r4"), o);
  EXPECT_EQ(report_json(analyze(s)).dump(), report_json(analyze(s)).dump());
}

TEST(Report, OutputFiles) {
  SceneOverrides o;
  o.t_samples = 30;
  const Analysis a = analyze(ingest(scene_path("helicoid"), o));
  const fs::path dir = fs::temp_directory_path() / "ruled_report_test";
  fs::remove_all(dir);
  write_outputs(a, dir);
  for (const char* f : {"report.json", "scene.normalized.json", "striction.csv", "mesh.obj"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  std::istringstream csv(read(dir / "striction.csv"));
  std::string header, line;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,s1,b1,b2,b3,wedge_residual,singular");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 30u);

  const std::string obj = read(dir / "mesh.obj");
  EXPECT_NE(obj.find("o patch"), std::string::npos);
  EXPECT_NE(obj.find("o striction_1"), std::string::npos);
  EXPECT_EQ(Json::parse(read(dir / "report.json")), report_json(a));
  fs::remove_all(dir);
}

TEST(Report, HigherDimensionSkipsMesh) {
  SceneOverrides o;
  o.t_samples = 20;
  const Analysis a = analyze(ingest(scene_path("rotation_r5"), o));
  const fs::path dir = fs::temp_directory_path() / "ruled_report_test_r5";
  fs::remove_all(dir);
  write_outputs(a, dir);
  EXPECT_TRUE(fs::exists(dir / "striction.csv"));
  EXPECT_FALSE(fs::exists(dir / "mesh.obj"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace ruled
