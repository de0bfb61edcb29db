#pragma once

// Segmentation of a ruled patch into cylindrical, conical, tangent and non-rank-one
// regions, with the evidence behind each label.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruled/distribution.hpp"
#include "ruled/error.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/striction.hpp"

namespace ruled {

enum class RegionKind { cylindrical, conical, tangent, non_rank_one, undetermined };

inline const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::cylindrical: return "cylindrical";
    case RegionKind::conical: return "conical";
    case RegionKind::tangent: return "tangent";
    case RegionKind::non_rank_one: return "non_rank_one";
    case RegionKind::undetermined: return "undetermined";
  }
  return "?";
}

/// Fraction of sheet samples that must be singular for the sheet to count as singular.
inline constexpr double kSingularCoverage = 0.99;
/// Shortest run of grid steps that a rank-change split may produce.
inline constexpr std::size_t kMinSplitSteps = 4;

struct Region {
  std::size_t first = 0;  // grid sample indices, inclusive
  std::size_t last = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  RegionKind kind = RegionKind::undetermined;
  int degree = 0;
  bool rank_one = false;
  double rank_one_residual = 0.0;
  std::size_t planar_count = 0;
  std::size_t point_count = 0;
  std::vector<int> striction_ranks;  // per t sample; -1 where ranks differ along the sheet
  std::optional<double> singular_fraction;
  std::vector<double> nonsingular_t;
  std::optional<std::size_t> off_sheet_regular;
  std::optional<std::size_t> off_sheet_checked;
  std::optional<bool> converse_agrees;
  std::vector<std::string> notes;
  std::shared_ptr<const StrictionSheet> sheet;  // solved on the enclosing degree segment
  std::shared_ptr<const SingularLocus> locus;

  [[nodiscard]] std::size_t count() const { return last - first + 1; }
};

struct ClassificationReport {
  std::vector<Region> regions;          // ordered by t, disjoint
  std::vector<double> boundary_points;  // samples excluded from every region
  std::vector<std::size_t> boundary_indices;
  bool is_rank_one = false;
  bool is_cylinder = false;
  DegreeProfile profile;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string join_parameters(const std::vector<double>& ts) { return list_parameters(ts); }

/// Per-sample striction Jacobian rank, -1 where the rank varies over the free coordinates.
inline std::vector<int> striction_rank_profile(const RuledPatch& p, const StrictionSheet& sheet) {
  std::vector<int> out;
  const auto free_points = p.grid.u_points(sheet.free_count());
  for (double t : sheet.t_samples()) {
    int rank = -2;
    for (const auto& uf : free_points) {
      const int r = striction_jacobian_rank(sheet, t, uf, p.tol);
      rank = rank == -2 ? r : (rank == r ? r : -1);
    }
    out.push_back(rank);
  }
  return out;
}

inline void check_region(const Region& r, int m) {
  auto broken = [&](const std::string& what) {
    fail(ErrorKind::numeric, std::string("inconsistent ") + to_string(r.kind) + " label: " + what, r.t_begin);
  };
  if (r.kind == RegionKind::cylindrical && r.degree != 0) broken("degree is not 0");
  if (r.kind == RegionKind::conical || r.kind == RegionKind::tangent) {
    if (r.degree != 1) broken("degree is not 1");
    if (!r.rank_one) broken("not rank-one");
    if (!r.singular_fraction || *r.singular_fraction < kSingularCoverage) broken("sheet not singular");
    const int want = r.kind == RegionKind::tangent ? m - 1 : m - 2;
    for (int rank : r.striction_ranks)
      if (rank != want) broken("striction rank " + std::to_string(rank));
  }
}

/// Splits a rank-one, singular degree-1 run by striction rank. Ranks are indexed relative
/// to `first`.
inline void label_by_striction_rank(const Region& base, const std::vector<int>& ranks, int m,
                                    std::vector<Region>& out) {
  std::size_t start = 0;
  while (start < ranks.size()) {
    std::size_t end = start;
    while (end + 1 < ranks.size() && ranks[end + 1] == ranks[start]) ++end;
    Region r = base;
    r.first = base.first + start;
    r.last = base.first + end;
    r.t_begin = base.sheet->t_samples()[start];
    r.t_end = base.sheet->t_samples()[end];
    r.striction_ranks.assign(ranks.begin() + static_cast<std::ptrdiff_t>(start),
                             ranks.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    const bool whole = start == 0 && end + 1 == ranks.size();
    const bool wide = end - start >= kMinSplitSteps;
    if (ranks[start] == m - 1 && (whole || wide)) {
      r.kind = RegionKind::tangent;
    } else if (ranks[start] == m - 2 && (whole || wide)) {
      r.kind = RegionKind::conical;
    } else {
      r.kind = RegionKind::undetermined;
      if (ranks[start] == m - 1 || ranks[start] == m - 2)
        r.notes.push_back("striction rank run shorter than " + std::to_string(kMinSplitSteps) + " grid steps");
      else
        r.notes.push_back("striction Jacobian rank " + std::to_string(ranks[start]) + " is neither m-1 nor m-2");
    }
    if (!whole) r.notes.push_back("split from a degree-1 segment at striction rank changes");
    out.push_back(std::move(r));
    start = end + 1;
  }
}

/// Labels one constant-degree segment; appends one or more regions.
inline void classify_segment(const RuledPatch& full, const DegreeSegment& seg, std::uint64_t seed,
                             std::vector<Region>& out) {
  const RuledPatch p = full.slice(seg.first, seg.last);
  Region r;
  r.first = seg.first;
  r.last = seg.last;
  r.t_begin = seg.t_begin;
  r.t_end = seg.t_end;
  r.degree = seg.degree;
  const RankOneResult r1 = rank_one_check(p);
  r.rank_one = r1.rank_one;
  r.rank_one_residual = r1.worst_residual;
  r.planar_count = r1.planar_count;
  for_each_grid_point(p, [&](std::size_t, double, const Eigen::VectorXd&) { ++r.point_count; });
  const bool developable = r1.worst_residual < p.tol.zero_abs_tol;

  if (seg.degree == 0) {
    r.kind = RegionKind::cylindrical;
    if (r.planar_count == r.point_count)
      r.notes.push_back("planar: the second fundamental form vanishes at every sampled point");
    else if (r.planar_count > 0)
      r.notes.push_back("planar at " + std::to_string(r.planar_count) + " of " + std::to_string(r.point_count) +
                        " sampled points");
    out.push_back(std::move(r));
    return;
  }

  if (seg.count() < 2) {
    r.kind = RegionKind::undetermined;
    r.notes.push_back("segment holds a single sample; no striction sheet can be interpolated");
    out.push_back(std::move(r));
    return;
  }

  try {
    auto sheet = std::make_shared<const StrictionSheet>(solve_striction(p, seg.degree));
    auto locus = std::make_shared<const SingularLocus>(singular_locus(p, *sheet, seed));
    r.sheet = sheet;
    r.locus = locus;
    r.singular_fraction = locus->singular_fraction();
    for (const auto& e : locus->entries)
      if (!e.singular && (r.nonsingular_t.empty() || r.nonsingular_t.back() != e.t)) r.nonsingular_t.push_back(e.t);
    r.off_sheet_regular = locus->off_sheet_regular();
    r.off_sheet_checked = locus->off_sheet.size();
    if (*r.off_sheet_regular != *r.off_sheet_checked)
      r.notes.push_back(std::to_string(*r.off_sheet_checked - *r.off_sheet_regular) +
                        " off-sheet probes are singular");
    if (!sheet->fallback_t.empty())
      r.notes.push_back("pivoted QR fallback used at t = " + join_parameters(sheet->fallback_t));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degeneracy && e.kind() != ErrorKind::pivot && e.kind() != ErrorKind::numeric) throw;
    r.kind = seg.degree == 1 && r.rank_one ? RegionKind::undetermined : RegionKind::non_rank_one;
    r.notes.push_back(std::string("striction sheet unavailable: ") + e.what());
    out.push_back(std::move(r));
    return;
  }

  const bool singular = *r.singular_fraction >= kSingularCoverage;
  if (seg.degree == 1) {
    r.converse_agrees = r.rank_one == singular;
    if (!*r.converse_agrees)
      r.notes.push_back(r.rank_one ? "rank-one but the sheet is not singular throughout"
                                   : "sheet singular throughout but not rank-one");
    if (!singular && *r.singular_fraction > 0.0)
      r.notes.push_back("singular only on part of the sheet; the converse needs singularity along all of it");
  }

  if (seg.degree >= 2) {
    r.kind = RegionKind::non_rank_one;
    if (r.rank_one) {
      r.kind = RegionKind::undetermined;
      r.notes.push_back("rank-one test passes with degree >= 2, which cannot happen for a noncylindrical patch");
    }
    out.push_back(std::move(r));
    return;
  }

  if (!r.rank_one) {
    if (developable && r.planar_count > 0) {
      r.kind = RegionKind::undetermined;
      r.notes.push_back("developable with planar points (" + std::to_string(r.planar_count) + " of " +
                        std::to_string(r.point_count) + ")");
    } else {
      r.kind = RegionKind::non_rank_one;
    }
    out.push_back(std::move(r));
    return;
  }

  if (!singular) {
    r.kind = RegionKind::undetermined;
    r.notes.push_back("rank-one but only " + format_number(*r.singular_fraction) +
                      " of the sheet samples are singular; nonsingular at t = " + join_parameters(r.nonsingular_t));
    out.push_back(std::move(r));
    return;
  }
  label_by_striction_rank(r, striction_rank_profile(p, *r.sheet), p.m(), out);
}

}  // namespace detail

/// Degree profile, segmentation by constant degree, and a label per segment.
inline ClassificationReport classify_patch(const RuledPatch& p, std::uint64_t seed = 42) {
  ClassificationReport report;
  report.profile = degree_profile(p.fc, p.grid, p.tol);
  for (std::size_t i : report.profile.borderline_samples) {
    report.boundary_indices.push_back(i);
    report.boundary_points.push_back(p.grid.t_samples[i]);
  }
  for (const auto& seg : report.profile.segments) detail::classify_segment(p, seg, seed, report.regions);
  for (const auto& r : report.regions) detail::check_region(r, p.m());

  const auto& samples = report.profile.samples;
  report.is_cylinder = report.profile.cylindrical && report.boundary_indices.empty();
  report.is_rank_one = !report.regions.empty() && report.boundary_indices.empty() &&
                       std::all_of(report.regions.begin(), report.regions.end(), [](const Region& r) {
                         return r.kind == RegionKind::conical || r.kind == RegionKind::tangent ||
                                (r.kind == RegionKind::cylindrical && r.planar_count == 0);
                       });
  if (!samples.empty() && report.regions.size() > 1)
    report.notes.push_back(std::to_string(report.regions.size()) + " regions");
  if (!report.boundary_points.empty())
    report.notes.push_back("borderline degree at t = " + detail::join_parameters(report.boundary_points));
  return report;
}

struct ConverseResult {
  bool agree = true;
  bool rank_one = false;
  bool singular_throughout = false;
  double singular_fraction = 0.0;
  std::string note;
};

/// If the patch is singular along the whole striction sheet, it must be rank-one (and
/// conversely). Requires degree 1 at every sample.
inline ConverseResult converse_check(const RuledPatch& p, std::uint64_t seed = 42) {
  const DegreeProfile profile = degree_profile(p.fc, p.grid, p.tol);
  if (profile.constant_degree != 1) fail(ErrorKind::input, "converse check needs degree 1 at every sample");
  ConverseResult out;
  out.rank_one = rank_one_check(p).rank_one;
  const StrictionSheet sheet = solve_striction(p, 1);
  out.singular_fraction = singular_locus(p, sheet, seed).singular_fraction();
  out.singular_throughout = out.singular_fraction >= kSingularCoverage;
  out.agree = out.rank_one == out.singular_throughout;
  if (!out.singular_throughout && out.singular_fraction > 0.0)
    out.note = "singular only on part of the sheet; the converse needs singularity along all of it";
  return out;
}

}  // namespace ruled
