#pragma once

// The acceptance corpus: nine criteria over the builtin patches, shared by the `selftest`
// command and the acceptance test binary.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ruled/builtins.hpp"
#include "ruled/classify.hpp"
#include "ruled/distribution.hpp"
#include "ruled/report.hpp"
#include "ruled/ruledgeom.hpp"
#include "ruled/striction.hpp"
#include "ruled/verify/finite_difference.hpp"

namespace ruled::verify {

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">=", "==", ">"
  double bound = 0.0;
  bool passed = false;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

struct AcceptanceOptions {
  int t_samples = 200;
  double u_extent = 2.0;
  TolerancePolicy tol;
  std::uint64_t seed = 42;
  int fd_samples = 50;
};

namespace detail {

class Recorder {
 public:
  explicit Recorder(CriterionResult& r) : r_(r) {}

  void less(const std::string& name, double value, double bound) { add(name, value, "<", bound, value < bound); }
  void at_least(const std::string& name, double value, double bound) {
    add(name, value, ">=", bound, value >= bound);
  }
  void greater(const std::string& name, double value, double bound) { add(name, value, ">", bound, value > bound); }
  void equal(const std::string& name, double value, double expected) {
    add(name, value, "==", expected, value == expected);
  }
  void truth(const std::string& name, bool value, const std::string& note = {}) {
    add(name, value ? 1.0 : 0.0, "==", 1.0, value, note);
  }
  void error(const std::string& name, const std::exception& e) { add(name, 0.0, "==", 1.0, false, e.what()); }

  /// Runs `body`, turning any library error into a failed check.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      error(name, e);
    }
  }

 private:
  void add(const std::string& name, double value, const char* rel, double bound, bool ok, std::string note = {}) {
    r_.checks.push_back({name, value, rel, bound, ok, std::move(note)});
  }
  CriterionResult& r_;
};

inline RuledPatch corpus_patch(const std::string& name, const AcceptanceOptions& o) {
  FramedCurve fc = builtin::make_patch(name);
  return {fc, SampleGrid::uniform(fc.interval, o.t_samples, o.u_extent, kDefaultUSamplesPerAxis), o.tol};
}

inline std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& f : builtin::patch_families()) out.push_back(f.name);
  return out;
}

inline double max_over_samples(const StrictionSheet& sheet, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (double t : sheet.t_samples()) worst = std::max(worst, f(t));
  return worst;
}

inline const std::vector<std::string>& rank_one_noncylindrical() {
  static const std::vector<std::string> names{"circular_cone", "tangent_developable_helix", "helix_product_r4"};
  return names;
}

inline const std::vector<std::string>& degree_one() {
  static const std::vector<std::string> names{"circular_cone", "tangent_developable_helix", "helicoid",
                                              "helix_product_r4"};
  return names;
}

}  // namespace detail

inline CriterionResult criterion_degree_profiles(const AcceptanceOptions& o) {
  CriterionResult r{1, "degree profiles and the bound d <= min(m-1, n+1)", {}};
  detail::Recorder rec(r);
  const std::vector<std::pair<std::string, int>> expected{{"cylinder_helix_r4", 0},
                                                          {"helicoid", 1},
                                                          {"circular_cone", 1},
                                                          {"tangent_developable_helix", 1},
                                                          {"rotation_r5", 2}};
  for (const auto& [name, d] : expected)
    rec.guarded(name + " degree", [&, name = name, d = d] {
      const auto p = detail::corpus_patch(name, o);
      const auto prof = degree_profile(p.fc, p.grid, p.tol);
      rec.equal(name + " constant degree", prof.constant_degree ? *prof.constant_degree : -1, d);
      rec.equal(name + " borderline samples", static_cast<double>(prof.borderline_samples.size()), 0);
    });
  for (const auto& name : detail::corpus_names())
    rec.guarded(name + " degree bound", [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto prof = degree_profile(p.fc, p.grid, p.tol);
      int worst = 0;
      for (const auto& s : prof.samples) worst = std::max(worst, s.degree);
      rec.at_least(name + " min(m-1, n+1) - max degree", std::min(p.m() - 1, p.dim() - p.m() + 1) - worst, 0);
    });
  return r;
}

inline CriterionResult criterion_striction_recovery(const AcceptanceOptions& o) {
  CriterionResult r{2, "striction recovery (cone apex, helicoid axis, helix)", {}};
  detail::Recorder rec(r);
  rec.guarded("circular_cone", [&] {
    const auto p = detail::corpus_patch("circular_cone", o);
    const auto sheet = solve_striction(p, 1);
    const Eigen::VectorXd none(0);
    rec.less("cone max |beta|", detail::max_over_samples(sheet, [&](double t) { return sheet.beta(t, none).norm(); }),
             1e-6);
    rec.less("cone max |u + sqrt(2)|", detail::max_over_samples(sheet, [&](double t) {
               return std::abs(sheet.solved(t, none)(0) + std::numbers::sqrt2);
             }),
             1e-8);
  });
  rec.guarded("helicoid", [&] {
    const auto p = detail::corpus_patch("helicoid", o);
    const auto sheet = solve_striction(p, 1);
    const Eigen::VectorXd none(0);
    rec.less("helicoid max distance of beta from the z axis",
             detail::max_over_samples(sheet, [&](double t) { return sheet.beta(t, none).head(2).norm(); }), 1e-8);
  });
  rec.guarded("tangent_developable_helix", [&] {
    const auto p = detail::corpus_patch("tangent_developable_helix", o);
    const auto sheet = solve_striction(p, 1);
    const Eigen::VectorXd none(0);
    rec.less("helix max |u|",
             detail::max_over_samples(sheet, [&](double t) { return std::abs(sheet.solved(t, none)(0)); }), 1e-8);
    rec.less("helix max |beta - gamma|", detail::max_over_samples(sheet, [&](double t) {
               return (sheet.beta(t, none) - p.fc.directrix.eval(t)).norm();
             }),
             1e-8);
  });
  return r;
}

inline CriterionResult criterion_a_matrix(const AcceptanceOptions& o) {
  CriterionResult r{3, "A symmetric, positive definite, equal to the Gram matrix of rho-images", {}};
  detail::Recorder rec(r);
  for (const std::string name :
       {"circular_cone", "tangent_developable_helix", "helicoid", "rotation_r5", "helix_product_r4"})
    rec.guarded(name, [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto prof = degree_profile(p.fc, p.grid, p.tol);
      if (!prof.constant_degree) fail(ErrorKind::pivot, "degree not constant");
      const auto sheet = solve_striction(p, *prof.constant_degree);
      double asym = 0.0, gram = 0.0, min_eig = std::numeric_limits<double>::infinity();
      for (const auto& sys : sheet.systems) {
        asym = std::max(asym, sys.asymmetry());
        gram = std::max(gram, sys.gram_deviation());
        min_eig = std::min(min_eig, sys.min_eigenvalue);
      }
      rec.less(name + " max |A - A^T|", asym, 1e-10);
      rec.less(name + " max |A - Gram|", gram, 1e-10);
      rec.greater(name + " min eigenvalue of A", min_eig, 0.0);
    });
  return r;
}

inline CriterionResult criterion_singularity(const AcceptanceOptions& o) {
  CriterionResult r{4, "singular points lie exactly on the striction sheet", {}};
  detail::Recorder rec(r);
  for (const auto& name : detail::rank_one_noncylindrical())
    rec.guarded(name, [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto sheet = solve_striction(p, 1);
      const auto locus = singular_locus(p, sheet, o.seed);
      rec.at_least(name + " singular fraction of sheet samples", locus.singular_fraction(), kSingularCoverage);
      rec.equal(name + " regular off-sheet probes (of 32)", static_cast<double>(locus.off_sheet_regular()), 32);
    });
  rec.guarded("helicoid", [&] {
    const auto p = detail::corpus_patch("helicoid", o);
    const auto sheet = solve_striction(p, 1);
    rec.equal("helicoid singular sheet samples", static_cast<double>(singular_locus(p, sheet, o.seed).singular_count()),
              0);
  });
  return r;
}

inline CriterionResult criterion_rank_one_equivalences(const AcceptanceOptions& o) {
  CriterionResult r{5, "rank-one test, tangent stability and flatness agree", {}};
  detail::Recorder rec(r);
  for (const auto& name : detail::corpus_names())
    rec.guarded(name, [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto r1 = rank_one_check(p);
      const bool developable = r1.worst_residual < p.tol.zero_abs_tol;
      std::mt19937_64 rng(o.seed);
      const bool stable = tangent_stability_sweep(p, kStabilityPairsPerT, rng).stable;
      const bool flat = flatness_check(p).max_abs_curvature < 1e-6;
      std::ostringstream note;
      note << "developable=" << developable << " stable=" << stable << " flat=" << flat
           << " planar_points=" << r1.planar_count;
      rec.truth(name + " verdicts agree", developable == stable && stable == flat, note.str());
      rec.truth(name + " rank-one iff developable without planar points",
                r1.rank_one == (developable && r1.planar_count == 0));
    });
  rec.guarded("helicoid curvature", [&] {
    const auto p = detail::corpus_patch("helicoid", o);
    rec.less("helicoid |K(0,0) + 1|", std::abs(sectional_curvatures(p, 0.0, Eigen::VectorXd::Zero(1)).front() + 1.0),
             1e-6);
  });
  return r;
}

inline CriterionResult criterion_first_normal(const AcceptanceOptions& o) {
  CriterionResult r{6, "d-1 <= dim N^1 <= d+1 on every sampled regular point", {}};
  detail::Recorder rec(r);
  for (const auto& name : detail::corpus_names())
    rec.guarded(name, [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto rep = first_normal_bounds_check(p);
      rec.equal(name + " violations (of " + std::to_string(rep.entries.size()) + ")",
                static_cast<double>(rep.violations), 0);
    });
  return r;
}

inline CriterionResult criterion_invariance(const AcceptanceOptions& o) {
  CriterionResult r{7, "striction sheet independent of the directrix", {}};
  detail::Recorder rec(r);
  for (const std::string name : {"circular_cone", "tangent_developable_helix"})
    rec.guarded(name, [&] {
      const auto p = detail::corpus_patch(name, o);
      const auto sheet = solve_striction(p, 1);
      const auto inv = directrix_invariance(p, sheet, default_invariance_offsets(p.m()));
      std::size_t skipped = 0;
      for (const auto& off : inv.offsets) skipped += off.skipped ? 1 : 0;
      rec.equal(name + " skipped offsets", static_cast<double>(skipped), 0);
      rec.less(name + " max deviation over 3 shifted directrices", inv.max_deviation, 1e-6);
    });
  return r;
}

inline CriterionResult criterion_classification(const AcceptanceOptions& o) {
  CriterionResult r{8, "classification and the converse", {}};
  detail::Recorder rec(r);
  const std::vector<std::pair<std::string, RegionKind>> expected{
      {"cylinder_helix_r4", RegionKind::cylindrical},
      {"circular_cone", RegionKind::conical},
      {"tangent_developable_helix", RegionKind::tangent},
      {"helicoid", RegionKind::non_rank_one},
      {"helix_product_r4", RegionKind::tangent},
      {"rotation_r5", RegionKind::non_rank_one}};
  for (const auto& [name, kind] : expected)
    rec.guarded(name, [&, name = name, kind = kind] {
      const auto p = detail::corpus_patch(name, o);
      const auto rep = classify_patch(p, o.seed);
      const bool single = rep.regions.size() == 1 && rep.boundary_points.empty();
      rec.truth(name + " -> single " + to_string(kind) + " region", single && rep.regions.front().kind == kind,
                rep.regions.empty() ? "no regions" : to_string(rep.regions.front().kind));
      if (name == "helix_product_r4" && single) {
        const auto& reg = rep.regions.front();
        rec.equal(name + " sheet dimension", reg.sheet ? reg.sheet->sheet_dim() : -1, 2);
        const bool rank_two = std::all_of(reg.striction_ranks.begin(), reg.striction_ranks.end(),
                                          [](int k) { return k == 2; });
        rec.truth(name + " striction Jacobian rank 2 at every sample", rank_two && !reg.striction_ranks.empty());
      }
    });
  for (const auto& name : detail::degree_one())
    rec.guarded(name + " converse", [&] {
      const auto c = converse_check(detail::corpus_patch(name, o), o.seed);
      rec.truth(name + " converse agrees", c.agree, c.note);
    });
  return r;
}

inline CriterionResult criterion_hygiene(const AcceptanceOptions& o) {
  CriterionResult r{9, "analytic derivatives match finite differences; rotating frame cylinder", {}};
  detail::Recorder rec(r);
  std::mt19937_64 rng(o.seed);
  auto run = [&](const std::string& label, const ParamVectorField& f, Interval window,
                 const std::vector<double>& breaks) {
    rec.guarded(label, [&] {
      double worst = 0.0;
      for (const auto& c : check_field_derivatives(f, window, 3, o.fd_samples, rng, breaks))
        worst = std::max(worst, c.max_error);
      rec.less(label + " max FD error", worst, o.tol.derivative_check_tol);
    });
  };
  for (const auto& fam : builtin::field_families()) {
    const bool spliced = fam.name == "spliced_rotation";
    const Interval window = spliced ? Interval{-1.0, 1.0} : Interval{0.0, 2.0 * std::numbers::pi};
    run("field " + fam.name, fam.make(fam.defaults), window, spliced ? std::vector<double>{0.0} : std::vector<double>{});
  }
  for (const auto& name : detail::corpus_names()) {
    const FramedCurve fc = builtin::make_patch(name);
    const std::vector<double> breaks = name == "spliced_rotation" ? std::vector<double>{0.0} : std::vector<double>{};
    run(name + " directrix", fc.directrix, fc.interval, breaks);
    for (std::size_t j = 0; j < fc.frame.size(); ++j)
      run(name + " X" + std::to_string(j + 1), fc.frame[j], fc.interval, breaks);
  }
  rec.guarded("rotating_frame_cylinder", [&] {
    const auto rep = classify_patch(detail::corpus_patch("rotating_frame_cylinder", o), o.seed);
    rec.truth("rotating_frame_cylinder -> single cylindrical region",
              rep.regions.size() == 1 && rep.boundary_points.empty() &&
                  rep.regions.front().kind == RegionKind::cylindrical);
  });
  return r;
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o = {}) {
  return {criterion_degree_profiles(o),      criterion_striction_recovery(o), criterion_a_matrix(o),
          criterion_singularity(o),          criterion_rank_one_equivalences(o), criterion_first_normal(o),
          criterion_invariance(o),           criterion_classification(o),     criterion_hygiene(o)};
}

/// One line per criterion.
inline void print_summary(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    out << (r.passed() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << " (" << r.checks.size()
        << " checks)\n";
}

/// Every check with its value and bound; failures are marked.
inline void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    out << (r.passed() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << '\n';
    for (const auto& c : r.checks) {
      out << "    " << (c.passed ? "ok  " : "FAIL") << "  " << c.name << ": " << std::setprecision(6) << c.value << ' '
          << c.relation << ' ' << c.bound;
      if (!c.note.empty()) out << "  [" << c.note << ']';
      out << '\n';
    }
  }
}

}  // namespace ruled::verify
