// Command-line front end: analyze a scene, run the self-test, list builtins.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "ruled/ruled.hpp"
#include "ruled/verify/acceptance.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitSelftest = 4;

int exit_code(ruled::ErrorKind kind) {
  switch (kind) {
    case ruled::ErrorKind::input:
    case ruled::ErrorKind::config:
    case ruled::ErrorKind::parse:
    case ruled::ErrorKind::validation:
      return kExitValidation;
    default:
      return kExitNumeric;
  }
}

struct Flags {
  std::optional<int> t_samples;
  std::optional<double> u_extent;
  std::optional<double> rank_tol;
  std::optional<double> zero_tol;
  std::optional<std::uint64_t> seed;
};

int run_analyze(const std::string& scene_path, const std::string& out_dir, const Flags& flags) {
  ruled::SceneOverrides ov;
  ov.t_samples = flags.t_samples;
  ov.u_extent = flags.u_extent;
  ov.rank_rel_tol = flags.rank_tol;
  ov.zero_abs_tol = flags.zero_tol;
  ov.seed = flags.seed;
  const auto scene = ruled::ingest(scene_path, ov);
  for (const auto& note : scene.notes) std::cout << "note: " << note << '\n';
  const auto analysis = ruled::analyze(scene);
  for (const auto& r : analysis.classification.regions)
    std::cout << "region [" << r.t_begin << ", " << r.t_end << "]: " << ruled::to_string(r.kind)
              << " (degree " << r.degree << ")\n";
  if (!analysis.classification.boundary_points.empty())
    std::cout << analysis.classification.boundary_points.size() << " boundary samples excluded\n";
  for (const auto& path : ruled::write_outputs(analysis, out_dir).paths) std::cout << "wrote " << path << '\n';
  return kExitOk;
}

int run_selftest(const Flags& flags) {
  ruled::verify::AcceptanceOptions o;
  if (flags.t_samples) o.t_samples = *flags.t_samples;
  if (flags.u_extent) o.u_extent = *flags.u_extent;
  if (flags.rank_tol) o.tol.rank_rel_tol = *flags.rank_tol;
  if (flags.zero_tol) o.tol.zero_abs_tol = *flags.zero_tol;
  if (flags.seed) o.seed = *flags.seed;
  o.tol.validate();
  const auto results = ruled::verify::run_acceptance(o);
  ruled::verify::print_table(std::cout, results);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed() ? 0 : 1;
  std::cout << (failed == 0 ? "selftest passed" : "selftest FAILED") << ": " << results.size() - failed << "/"
            << results.size() << " criteria\n";
  return failed == 0 ? kExitOk : kExitSelftest;
}

void list_builtins() {
  std::cout << "patches:\n";
  for (const auto& f : ruled::builtin::patch_families()) {
    std::cout << "  " << f.name << ": " << f.description;
    for (const auto& [k, v] : f.defaults) std::cout << " [" << k << "=" << v << "]";
    std::cout << '\n';
  }
  std::cout << "fields:\n";
  for (const auto& f : ruled::builtin::field_families()) {
    std::cout << "  " << f.name << ": " << f.description;
    for (const auto& [k, v] : f.defaults) std::cout << " [" << k << "=" << v << "]";
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis and classification of ruled submanifolds"};
  app.require_subcommand(1);
  Flags flags;
  int t_samples = 0;
  double u_extent = 0, rank_tol = 0, zero_tol = 0;
  std::uint64_t seed = 0;
  auto* o_t = app.add_option("--t-samples", t_samples, "number of t samples")->check(CLI::Range(3, 1000000));
  auto* o_u = app.add_option("--u-extent", u_extent, "half-width of the ruling window")->check(CLI::PositiveNumber);
  auto* o_r = app.add_option("--rank-tol", rank_tol, "relative singular value cutoff");
  auto* o_z = app.add_option("--zero-tol", zero_tol, "absolute zero tolerance");
  auto* o_s = app.add_option("--seed", seed, "seed for the off-sheet spot check and random pairs");

  std::string scene_path, out_dir;
  auto* analyze = app.add_subcommand("analyze", "analyze a scene and write report.json, striction.csv, mesh.obj");
  analyze->fallthrough();
  analyze->add_option("scene", scene_path, "scene JSON file")->required();
  analyze->add_option("-o,--output", out_dir, "output directory")->required();
  auto* selftest = app.add_subcommand("selftest", "run the acceptance corpus");
  selftest->fallthrough();
  auto* list = app.add_subcommand("list-builtins", "list builtin patches and fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (*o_t) flags.t_samples = t_samples;
  if (*o_u) flags.u_extent = u_extent;
  if (*o_r) flags.rank_tol = rank_tol;
  if (*o_z) flags.zero_tol = zero_tol;
  if (*o_s) flags.seed = seed;

  try {
    if (*analyze) return run_analyze(scene_path, out_dir, flags);
    if (*selftest) return run_selftest(flags);
    if (*list) list_builtins();
    return kExitOk;
  } catch (const ruled::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
