#pragma once

// Full analysis of an ingested scene and its exports: report.json, striction.csv and,
// for surfaces in R^3, mesh.obj.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ruled/classify.hpp"
#include "ruled/distribution.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/scene.hpp"
#include "ruled/striction.hpp"

namespace ruled {

/// Tangent-space stability pairs drawn per t sample.
inline constexpr int kStabilityPairsPerT = 10;

struct SheetAnalysis {
  std::shared_ptr<const StrictionSheet> sheet;
  std::shared_ptr<const SingularLocus> locus;
  std::vector<std::size_t> regions;  // indices into the classification
  double a_asymmetry = 0.0;
  double a_gram_deviation = 0.0;
  double min_eigenvalue = 0.0;
  EquivalenceTable equivalence;
  InvarianceResult invariance;
};

struct Analysis {
  IngestResult scene;
  ClassificationReport classification;
  RankOneResult rank_one;
  FlatnessResult flatness;
  StabilitySweep stability;
  FirstNormalReport first_normal;
  std::vector<SheetAnalysis> sheets;
  std::optional<ConverseResult> converse;
};

/// Shifts c * (1, ..., 1) of the directrix used for the invariance check.
inline std::vector<Eigen::VectorXd> default_invariance_offsets(int m) {
  std::vector<Eigen::VectorXd> out;
  for (double c : {1.0, -0.5, 0.25}) out.push_back(Eigen::VectorXd::Constant(m - 1, c));
  return out;
}

inline Analysis analyze(const IngestResult& scene) {
  Analysis a;
  a.scene = scene;
  const RuledPatch& p = scene.patch;
  a.classification = classify_patch(p, scene.seed);
  a.rank_one = rank_one_check(p);
  a.flatness = flatness_check(p);
  std::mt19937_64 rng(scene.seed);
  a.stability = tangent_stability_sweep(p, kStabilityPairsPerT, rng);
  a.first_normal = first_normal_bounds_check(p);

  for (std::size_t i = 0; i < a.classification.regions.size(); ++i) {
    const Region& r = a.classification.regions[i];
    if (!r.sheet) continue;
    if (!a.sheets.empty() && a.sheets.back().sheet == r.sheet) {
      a.sheets.back().regions.push_back(i);
      continue;
    }
    SheetAnalysis s;
    s.sheet = r.sheet;
    s.locus = r.locus;
    s.regions = {i};
    s.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& sys : r.sheet->systems) {
      s.a_asymmetry = std::max(s.a_asymmetry, sys.asymmetry());
      s.a_gram_deviation = std::max(s.a_gram_deviation, sys.gram_deviation());
      s.min_eigenvalue = std::min(s.min_eigenvalue, sys.min_eigenvalue);
    }
    SampleGrid grid = p.grid;
    grid.t_samples = r.sheet->t_samples();
    const RuledPatch segment{p.fc, grid, p.tol};
    s.equivalence = equivalent_condition_check(segment, *r.sheet);
    s.invariance = directrix_invariance(segment, *r.sheet, default_invariance_offsets(p.m()));
    a.sheets.push_back(std::move(s));
  }
  if (a.classification.profile.constant_degree == 1 && a.classification.profile.borderline_samples.empty())
    a.converse = converse_check(p, scene.seed);
  return a;
}

namespace detail {

inline Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json region_json(const Region& r, int m) {
  Json ev = {{"degree", r.degree},
             {"rank_one", r.rank_one},
             {"rank_one_residual_max", r.rank_one_residual},
             {"planar_points", r.planar_count},
             {"sampled_points", r.point_count},
             {"striction_rank_profile", r.striction_ranks}};
  ev["singular_fraction"] = r.singular_fraction ? Json(*r.singular_fraction) : Json(nullptr);
  ev["nonsingular_t"] = r.nonsingular_t;
  ev["off_sheet_regular"] = r.off_sheet_regular ? Json(*r.off_sheet_regular) : Json(nullptr);
  ev["off_sheet_checked"] = r.off_sheet_checked ? Json(*r.off_sheet_checked) : Json(nullptr);
  ev["converse_agrees"] = r.converse_agrees ? Json(*r.converse_agrees) : Json(nullptr);
  Json out = {{"t_range", {r.t_begin, r.t_end}},
              {"first_index", r.first},
              {"last_index", r.last},
              {"kind", to_string(r.kind)},
              {"evidence", ev},
              {"notes", r.notes}};
  if (r.kind == RegionKind::conical && r.sheet && m == 2) {
    // Apex: the sheet collapses to a point; report the mean and the spread of its samples.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(r.sheet->frame().dim);
    std::vector<Eigen::VectorXd> pts;
    for (double t : r.sheet->t_samples())
      if (t >= r.t_begin && t <= r.t_end) pts.push_back(r.sheet->beta(t, Eigen::VectorXd(0)));
    for (const auto& q : pts) mean += q;
    mean /= static_cast<double>(pts.size());
    double spread = 0.0;
    for (const auto& q : pts) spread = std::max(spread, (q - mean).norm());
    out["apex"] = vector_json(mean);
    out["apex_spread"] = spread;
  }
  return out;
}

}  // namespace detail

inline Json report_json(const Analysis& a) {
  const RuledPatch& p = a.scene.patch;
  Json out = Json::object();
  out["scene"] = a.scene.normalized;
  out["scene_notes"] = a.scene.notes;

  const auto& prof = a.classification.profile;
  Json samples = Json::array();
  for (const auto& s : prof.samples) {
    Json sv = Json::array();
    for (Eigen::Index i = 0; i < s.rank.singular_values.size(); ++i) sv.push_back(s.rank.singular_values(i));
    samples.push_back({{"t", s.t}, {"degree", s.degree}, {"borderline", s.borderline}, {"singular_values", sv}});
  }
  Json segments = Json::array();
  for (const auto& seg : prof.segments)
    segments.push_back({{"t_range", {seg.t_begin, seg.t_end}},
                        {"first_index", seg.first},
                        {"last_index", seg.last},
                        {"degree", seg.degree}});
  out["degree_profile"] = {{"constant_degree", prof.constant_degree ? Json(*prof.constant_degree) : Json(nullptr)},
                           {"degree_bound", std::min(p.m() - 1, p.dim() - p.m() + 1)},
                           {"cylindrical", prof.cylindrical},
                           {"noncylindrical", prof.noncylindrical},
                           {"segments", segments},
                           {"samples", samples}};

  Json regions = Json::array();
  for (const auto& r : a.classification.regions) regions.push_back(detail::region_json(r, p.m()));
  out["classification"] = {{"regions", regions},
                           {"boundary_points", a.classification.boundary_points},
                           {"is_rank_one", a.classification.is_rank_one},
                           {"is_cylinder", a.classification.is_cylinder},
                           {"notes", a.classification.notes}};

  out["rank_one"] = {{"rank_one", a.rank_one.rank_one},
                     {"planar_points", a.rank_one.planar_count},
                     {"worst_residual", a.rank_one.worst_residual},
                     {"t", a.rank_one.t},
                     {"max_residual", a.rank_one.max_residual}};
  out["flatness"] = {{"max_abs_curvature", a.flatness.max_abs_curvature},
                     {"points_checked", a.flatness.points_checked},
                     {"singular_skipped", a.flatness.singular_skipped}};
  out["tangent_stability"] = {{"stable", a.stability.stable},
                              {"max_deviation", a.stability.max_deviation},
                              {"pairs_checked", a.stability.pairs_checked}};
  out["first_normal"] = {{"min_dim", a.first_normal.min_dim},
                         {"max_dim", a.first_normal.max_dim},
                         {"violations", a.first_normal.violations},
                         {"points_checked", a.first_normal.entries.size()},
                         {"singular_skipped", a.first_normal.singular_skipped}};

  Json sheets = Json::array();
  for (const auto& s : a.sheets) {
    Json offsets = Json::array();
    for (const auto& o : s.invariance.offsets)
      offsets.push_back({{"offset", detail::vector_json(o.offset)},
                         {"deviation", o.deviation},
                         {"skipped", o.skipped},
                         {"note", o.note}});
    std::size_t agree = 0;
    for (const auto& e : s.equivalence.entries) agree += e.agree ? 1 : 0;
    sheets.push_back({{"regions", s.regions},
                      {"degree", s.sheet->d()},
                      {"sheet_dim", s.sheet->sheet_dim()},
                      {"t_range", {s.sheet->t_samples().front(), s.sheet->t_samples().back()}},
                      {"defining_residual_max", s.sheet->defining_residual},
                      {"a_asymmetry_max", s.a_asymmetry},
                      {"a_gram_deviation_max", s.a_gram_deviation},
                      {"a_min_eigenvalue", s.min_eigenvalue},
                      {"fallback_t", s.sheet->fallback_t},
                      {"singular_fraction", s.locus->singular_fraction()},
                      {"off_sheet",
                       {{"checked", s.locus->off_sheet.size()},
                        {"regular", s.locus->off_sheet_regular()},
                        {"perturbation", s.locus->perturbation}}},
                      {"equivalent_condition",
                       {{"entries", s.equivalence.entries.size()},
                        {"agree", agree},
                        {"skipped", s.equivalence.skipped},
                        {"all_agree", s.equivalence.all_agree}}},
                      {"directrix_invariance", {{"max_deviation", s.invariance.max_deviation}, {"offsets", offsets}}}});
  }
  out["striction"] = sheets;
  if (a.converse)
    out["converse"] = {{"agree", a.converse->agree},
                       {"rank_one", a.converse->rank_one},
                       {"singular_throughout", a.converse->singular_throughout},
                       {"singular_fraction", a.converse->singular_fraction},
                       {"note", a.converse->note}};
  else
    out["converse"] = nullptr;
  return out;
}

namespace detail {

inline std::string num(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

}  // namespace detail

inline std::string striction_csv_header(const StrictionSheet& sheet) {
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= sheet.free_count(); ++i) out << ",u" << i;
  for (int h = sheet.m() - sheet.d(); h <= sheet.m() - 1; ++h) out << ",s" << h;
  for (int k = 1; k <= sheet.frame().dim; ++k) out << ",b" << k;
  out << ",wedge_residual,singular";
  return out.str();
}

/// One row per sheet sample, in the order of the singular locus entries.
inline void write_striction_rows(std::ostream& out, const StrictionSheet& sheet, const SingularLocus& locus) {
  for (const auto& e : locus.entries) {
    out << detail::num(e.t);
    for (Eigen::Index i = 0; i < e.u_free.size(); ++i) out << ',' << detail::num(e.u_free(i));
    const Eigen::VectorXd solved = sheet.solved(e.t, e.u_free);
    for (Eigen::Index h = 0; h < solved.size(); ++h) out << ',' << detail::num(solved(h));
    const Eigen::VectorXd b = sheet.beta(e.t, e.u_free);
    for (Eigen::Index k = 0; k < b.size(); ++k) out << ',' << detail::num(b(k));
    out << ',' << detail::num(e.wedge_residual) << ',' << (e.singular ? 1 : 0) << '\n';
  }
}

/// Sampled patch (quads over the t x u grid) plus each striction curve as a polyline.
/// Only meaningful for surfaces in R^3.
inline void write_mesh_obj(std::ostream& out, const Analysis& a) {
  const RuledPatch& p = a.scene.patch;
  if (p.dim() != 3 || p.m() != 2) fail(ErrorKind::input, "mesh export needs a surface in R^3");
  const auto& ts = p.grid.t_samples;
  const auto us = p.grid.u_axis();
  out << "o patch\n";
  for (double t : ts)
    for (double u : us) {
      const Eigen::VectorXd x = eval_sigma(p, t, Eigen::VectorXd::Constant(1, u));
      out << "v " << detail::num(x(0)) << ' ' << detail::num(x(1)) << ' ' << detail::num(x(2)) << '\n';
    }
  const std::size_t nu = us.size();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    for (std::size_t k = 0; k + 1 < nu; ++k) {
      const std::size_t a0 = i * nu + k + 1;
      out << "f " << a0 << ' ' << a0 + nu << ' ' << a0 + nu + 1 << ' ' << a0 + 1 << '\n';
    }
  std::size_t next = ts.size() * nu + 1;
  for (std::size_t s = 0; s < a.sheets.size(); ++s) {
    const auto& sheet = *a.sheets[s].sheet;
    out << "o striction_" << s + 1 << '\n';
    const std::size_t start = next;
    for (double t : sheet.t_samples()) {
      const Eigen::VectorXd b = sheet.beta(t, Eigen::VectorXd(0));
      out << "v " << detail::num(b(0)) << ' ' << detail::num(b(1)) << ' ' << detail::num(b(2)) << '\n';
      ++next;
    }
    out << 'l';
    for (std::size_t v = start; v < next; ++v) out << ' ' << v;
    out << '\n';
  }
}

struct WrittenFiles {
  std::vector<std::string> paths;
};

/// Writes report.json, the normalized scene, striction CSVs (sheets grouped by degree; the
/// first degree goes to striction.csv, further degrees to striction_d<d>.csv) and mesh.obj.
inline WrittenFiles write_outputs(const Analysis& a, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::input, "cannot create output directory '" + dir.string() + "': " + ec.message());
  WrittenFiles written;
  auto open = [&](const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::input, "cannot write '" + path.string() + "'");
    written.paths.push_back(path.string());
    return f;
  };
  {
    auto f = open(dir / "report.json");
    f << report_json(a).dump(2) << '\n';
  }
  {
    auto f = open(dir / "scene.normalized.json");
    f << dump_scene(a.scene.normalized);
  }
  std::map<int, std::vector<const SheetAnalysis*>> by_degree;
  for (const auto& s : a.sheets) by_degree[s.sheet->d()].push_back(&s);
  bool first = true;
  for (const auto& [d, sheets] : by_degree) {
    auto f = open(dir / (first ? std::string("striction.csv") : "striction_d" + std::to_string(d) + ".csv"));
    first = false;
    f << striction_csv_header(*sheets.front()->sheet) << '\n';
    for (const auto* s : sheets) write_striction_rows(f, *s->sheet, *s->locus);
  }
  if (a.scene.patch.dim() == 3 && a.scene.patch.m() == 2) {
    auto f = open(dir / "mesh.obj");
    write_mesh_obj(f, a);
  }
  return written;
}

}  // namespace ruled
